#include "virtheta/cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <unistd.h>

namespace {

namespace fs = std::filesystem;
using virtheta::run_cli;

struct Outcome {
  int code;
  std::string out, err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("virtheta_cli_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

TEST(Verify, Id1Table) {
  Outcome r = run({"verify", "id1", "--trunc", "20/1"});
  EXPECT_EQ(r.code, 0);
  size_t rows = 0, pos = 0;
  while ((pos = r.out.find("PASS   id1.", pos)) != std::string::npos) ++rows, ++pos;
  EXPECT_EQ(rows, 3u);
}

TEST(Verify, UnknownSuiteIsUsageError) {
  EXPECT_EQ(run({"verify", "nosuch"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"verify", "id1", "--trunc", "1.5"}).code, 2);
  EXPECT_EQ(run({"verify", "id1", "--trunc", "0"}).code, 2);
  EXPECT_EQ(run({"verify", "id1", "--trunc", "-3/2"}).code, 2);
  EXPECT_EQ(run({"verify", "thm51", "--a", "1", "--r", "2"}).code, 2);
  EXPECT_EQ(run({"verify", "thm51", "--a", "3", "--r", "1"}).code, 2);
}

TEST(Verify, FamilyAtAEqualsFive) {
  EXPECT_EQ(run({"verify", "thm51", "--a", "5", "--r", "1", "--eps", "0", "--trunc", "2/1"}).code, 0);
}

TEST(Verify, MutationFails) {
  Outcome r = run({"verify", "id2", "--mutate", "--json", "--no-timing"});
  EXPECT_EQ(r.code, 1);
  auto j = r.json();
  EXPECT_FALSE(j["pass"].get<bool>());
  bool mismatch = false;
  for (const auto& rep : j["reports"])
    if (!rep["pass"].get<bool>()) mismatch = mismatch || !rep["first_mismatch"].is_null();
  EXPECT_TRUE(mismatch);
}

TEST(Verify, JsonIsDeterministic) {
  std::vector<std::string> args = {"verify", "id1", "relations55", "--json", "--no-timing", "--jobs", "4"};
  Outcome a = run(args), b = run(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto j = a.json();
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["reports"].size(), 9u);
  EXPECT_EQ(j["reports"][0]["name"], "id1.i1");
  EXPECT_EQ(j["reports"][0]["wall_time_ms"], 0.0);
}

TEST(Verify, AllSuites) {
  Outcome r = run({"verify", "all", "--jobs", "4", "--json", "--no-timing"});
  EXPECT_EQ(r.code, 0) << r.err;
  std::set<std::string> suites;
  auto j = r.json();
  for (const auto& rep : j["reports"]) {
    std::string n = rep["name"];
    suites.insert(n.substr(0, n.find('.')));
  }
  EXPECT_EQ(suites.size(), virtheta::suite_registry().size());
}

TEST(Verify, ConfigFileAndOverride) {
  fs::path dir = temp_dir("cfg");
  fs::create_directories(dir);
  fs::path cfg = dir / "run.ini";
  std::ofstream(cfg) << "trunc=3/1\njson=true\nno-timing=true\n";
  Outcome a = run({"verify", "id1", "--config", cfg.string()});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.json()["reports"][0]["trunc"], nlohmann::json::array({3, 1}));
  Outcome b = run({"verify", "id1", "--config", cfg.string(), "--trunc", "5/1"});
  EXPECT_EQ(b.json()["reports"][0]["trunc"], nlohmann::json::array({5, 1}));
  fs::remove_all(dir);
}

TEST(Dump, Theta) {
  Outcome r = run({"dump", "theta", "--ell", "0", "--k", "1", "--trunc", "9/1"});
  ASSERT_EQ(r.code, 0);
  auto j = r.json();
  // 1 + 2q + 2q^4 + 2q^9 over denominator 4.
  EXPECT_EQ(j["denom"], 4);
  EXPECT_EQ(j["terms"], nlohmann::json::parse("[[0,1],[4,2],[16,2],[36,2]]"));
}

TEST(Dump, EtaSigns) {
  auto j = run({"dump", "eta", "--trunc", "8/1"}).json();
  EXPECT_EQ(j["denom"], 24);
  EXPECT_EQ(j["terms"], nlohmann::json::parse("[[1,1],[25,-1],[49,-1],[121,1],[169,1]]"));
}

TEST(Dump, RayClass) {
  Outcome r = run({"dump", "rayclass", "-D", "-2", "-Dp", "-1", "-F", "4*P2"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.json();
  ASSERT_EQ(j["A"].size(), 1u);
  EXPECT_EQ(j["A"][0]["ideal"], "(1)");
  ASSERT_EQ(j["S"].size(), 1u);
  Outcome k = run({"dump", "class", "-D", "-2", "-F", "4*P2", "--spec", "[5+2w]"});
  ASSERT_EQ(k.code, 0) << k.err;
  EXPECT_EQ(k.json()["hnf"], j["S"][0]["hnf"]);
}

TEST(Dump, Errors) {
  EXPECT_EQ(run({"dump", "rayclass", "-D", "-2", "-Dp", "-1", "-F", "4*Q2"}).code, 2);
  EXPECT_EQ(run({"dump", "rayclass", "-D", "-2", "-Dp", "-1", "-F", "3"}).code, 2);
  EXPECT_EQ(run({"dump", "class", "-D", "-2", "-F", "4*P2", "--spec", "[5+2w"}).code, 2);
  EXPECT_EQ(run({"dump", "nothing"}).code, 2);
}

TEST(Search, Id1Pool) {
  Outcome r = run({"search", "--pool", "id1"});
  ASSERT_EQ(r.code, 0);
  auto rels = r.json()["relations"];
  EXPECT_EQ(rels.size(), 3u);
  for (const auto& rel : rels) EXPECT_EQ(rel["status"], "CANDIDATE");
  EXPECT_EQ(run({"search", "--product", "1:2"}).json()["relations"].size(), 0u);
}

TEST(Cache, StatsClearRoundTrip) {
  fs::path dir = temp_dir("cache");
  fs::create_directories(dir);
  auto stats = run({"cache", "stats", "--cache", dir.string()}).json();
  EXPECT_EQ(stats["entries"], 0);
  std::vector<std::string> dump = {"dump", "rayclass", "-D", "-2", "-Dp", "-1", "-F", "4*P2", "--cache", dir.string()};
  Outcome first = run(dump);
  ASSERT_EQ(first.code, 0);
  EXPECT_EQ(run({"cache", "stats", "--cache", dir.string()}).json()["entries"], 1);
  EXPECT_EQ(run(dump).out, first.out);
  EXPECT_EQ(run({"cache", "clear", "--cache", dir.string()}).code, 0);
  EXPECT_EQ(run({"cache", "stats", "--cache", dir.string()}).json()["entries"], 0);
  EXPECT_EQ(run(dump).out, first.out);
  fs::remove_all(dir);
}

TEST(Cache, UnwritableDirectoryIsInternalError) {
  fs::path dir = temp_dir("ro");
  fs::create_directories(dir);
  fs::path file = dir / "plain";
  std::ofstream(file) << "x";
  EXPECT_EQ(run({"dump", "rayclass", "-D", "-2", "-Dp", "-1", "-F", "4*P2", "--cache", (file / "sub").string()}).code, 3);
  EXPECT_EQ(run({"verify", "sec54", "--cache", (file / "sub").string()}).code, 3);
  fs::remove_all(dir);
}

TEST(Help, MentionsNamedPrimes) {
  Outcome r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("P13"), std::string::npos);
}

}  // namespace
