#include "properties.hpp"

#include <gtest/gtest.h>

#include <ostream>

namespace props {
void PrintTo(const Entry& e, std::ostream* os) { *os << e.name; }
}  // namespace props

namespace {

constexpr int kCases = 250;

class Property : public ::testing::TestWithParam<props::Entry> {};

TEST_P(Property, HoldsOnRandomCases) {
  props::Result r = GetParam().fn(0x5eed, kCases);
  EXPECT_EQ(r.cases, kCases);
  EXPECT_EQ(r.failures, 0) << r.name << ": " << r.first_failure;
}

INSTANTIATE_TEST_SUITE_P(All, Property, ::testing::ValuesIn(props::all()),
                         [](const auto& info) { return std::string(info.param.name); });

}  // namespace
