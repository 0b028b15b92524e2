#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace props {

struct Result {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;
  bool ok(int min_cases) const { return cases >= min_cases && failures == 0; }
};

using Fn = Result (*)(std::uint64_t seed, int cases);

Result norm_multiplicative(std::uint64_t seed, int cases);
Result factor_round_trip(std::uint64_t seed, int cases);
Result principal_round_trip(std::uint64_t seed, int cases);
Result ray_class_equivalence(std::uint64_t seed, int cases);
Result bridge_identity(std::uint64_t seed, int cases);
Result product_to_coset_oracle(std::uint64_t seed, int cases);
Result decompose_partition(std::uint64_t seed, int cases);
Result theta_symmetry(std::uint64_t seed, int cases);
Result eta_euler_product(std::uint64_t seed, int cases);

struct Entry {
  const char* name;
  Fn fn;
};
const std::vector<Entry>& all();

}  // namespace props
