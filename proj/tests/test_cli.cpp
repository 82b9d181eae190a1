#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "conerank/cli.hpp"
#include "fixtures.hpp"

using namespace conerank;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return (fs::path(CONERANK_DATA_DIR) / name).string(); }

// Rows of the rank table after the two header lines: {id, k/m}.
std::vector<std::pair<std::string, std::string>> rank_rows(const std::string& table) {
  std::istringstream in(table);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  std::vector<std::pair<std::string, std::string>> rows;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string id, frac;
    row >> id >> frac;
    rows.emplace_back(id, frac);
  }
  return rows;
}

fs::path temp_dir(const std::string& tag) {
  auto dir = fs::temp_directory_path() / ("conerank_cli_" + tag + "_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Cli, RankReproducesTable1Sorted) {
  const auto r = invoke({"rank", "--problem", data("example3.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::vector<std::pair<std::string, std::string>> want{
      {"a5", "5/5"}, {"a1", "2/5"}, {"a4", "2/5"}, {"a2", "1/5"}, {"a3", "1/5"}};
  EXPECT_EQ(rank_rows(r.out), want);
  EXPECT_NE(r.out.find("1.0000"), std::string::npos);
  EXPECT_NE(r.out.find("0.4000"), std::string::npos);
  EXPECT_NE(r.out.find("0.2000"), std::string::npos);
}

TEST(Cli, SingleJudgeSubsetGivesScalarizedRow) {
  const auto r = invoke({"rank", "--problem", data("example3.json"), "--judges", "j1", "--output", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto res = rank_result_from_json(nlohmann::json::parse(r.out));
  const std::vector<std::size_t> want{2, 2, 3, 4, 5};
  ASSERT_EQ(res.entries.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(res.entries[i].value.rank.count, want[i]);
    EXPECT_EQ(res.entries[i].value.rank.of, 5u);
  }
}

TEST(Cli, Table2SubsetFromSameFile) {
  const auto r = invoke({"rank", "--problem", data("example3.json"), "--judges", "j1,j2", "--output", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto res = rank_result_from_json(nlohmann::json::parse(r.out));
  const std::vector<std::size_t> want{2, 1, 2, 4, 5};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(res.entries[i].value.rank.count, want[i]) << i;
  EXPECT_EQ(res.importance, conerank::testing::table2_cone());
}

TEST(Cli, CsvDirectoryMatchesJson) {
  const auto a = invoke({"rank", "--problem", data("example3.json"), "--output", "json"});
  const auto b = invoke({"rank", "--problem", data("example3_csv"), "--output", "json"});
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, RankJsonRoundTrips) {
  const auto r = invoke({"rank", "--problem", data("example3.json"), "--output", "json"});
  ASSERT_EQ(r.code, 0);
  const auto parsed = rank_result_from_json(nlohmann::json::parse(r.out));
  EXPECT_EQ(parsed.importance, conerank::testing::table1_cone());
  EXPECT_EQ(parsed.acceptance, dual_cone(conerank::testing::table1_cone()));
  const auto again = rank_result_to_json(parsed);
  const auto orig = nlohmann::ordered_json::parse(r.out);
  EXPECT_EQ(again["ranks"], orig["ranks"]);
  EXPECT_EQ(again["order"], orig["order"]);
}

TEST(Cli, ClassifyAtPointEight) {
  const auto r = invoke({"classify", "--problem", data("example3.json"), "-p", "0.8", "--output", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto v = verdicts_from_json(nlohmann::json::parse(r.out));
  ASSERT_EQ(v.size(), 5u);
  EXPECT_EQ(v[4].alternative_id, "a5");
  EXPECT_EQ(v[4].label, Verdict::neutral);
  EXPECT_EQ(v[0].label, Verdict::non_advisable);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(v[i].label, Verdict::non_advisable) << i;
  EXPECT_EQ(verdicts_to_json(0.8, v).dump(2) + "\n", r.out);
}

TEST(Cli, ClassifyTableAndLongFlag) {
  const auto r = invoke({"classify", "--problem", data("example3.json"), "--p", "0.8"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("a5           yes       yes       neutral"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("non_advisable"), std::string::npos);
}

TEST(Cli, ClassifyJsonWithRegion) {
  const auto r =
      invoke({"classify", "--problem", data("example3.json"), "-p", "0.6", "--bbox", "0,0,6,6", "--output", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["region"]["intersection_kind"], "segment");
}

TEST(Cli, Example6NoLowerMembersAtHighOrder) {
  const auto r = invoke({"classify", "--problem", data("example6.json"), "-p", "0.9", "--output", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& v : verdicts_from_json(nlohmann::json::parse(r.out))) EXPECT_FALSE(v.in_lower) << v.alternative_id;
}

TEST(Cli, QuantilePrintsExtremeRayThresholds) {
  const auto r = invoke({"quantile", "--problem", data("example3.json"), "-p", "0.8", "--output", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["halfspaces"].size(), 2u);  // j2 is absorbed
  EXPECT_EQ(j["halfspaces"][0]["judge"], "j1");
  EXPECT_EQ(j["halfspaces"][1]["judge"], "j3");
  for (const auto& h : j["halfspaces"]) {
    EXPECT_DOUBLE_EQ(h["lower_threshold"].get<double>(), 11.0);
    EXPECT_DOUBLE_EQ(h["upper_threshold"].get<double>(), 15.0);
  }
  ASSERT_EQ(j["memberships"].size(), 5u);
  EXPECT_EQ(j["memberships"][4]["rank"]["value"], 5);
  EXPECT_EQ(j["memberships"][4]["strict_exceedance"]["value"], 4);
  EXPECT_TRUE(j["memberships"][4]["in_lower"].get<bool>());

  const auto t = invoke({"quantile", "--problem", data("example3.json"), "-p", "0.8"});
  ASSERT_EQ(t.code, 0);
  EXPECT_NE(t.out.find("j1     (2, 1)     11             15"), std::string::npos) << t.out;
}

TEST(Cli, QuantileThresholdsAtExtremeOrders) {
  const auto lo = nlohmann::json::parse(
      invoke({"quantile", "--problem", data("example3.json"), "-p", "0.1", "--output", "json"}).out);
  EXPECT_DOUBLE_EQ(lo["halfspaces"][0]["lower_threshold"].get<double>(), 7.0);
  EXPECT_DOUBLE_EQ(lo["halfspaces"][0]["upper_threshold"].get<double>(), 7.0);
  const auto hi = nlohmann::json::parse(
      invoke({"quantile", "--problem", data("example3.json"), "-p", "0.99", "--output", "json"}).out);
  EXPECT_DOUBLE_EQ(hi["halfspaces"][0]["lower_threshold"].get<double>(), 15.0);
  EXPECT_DOUBLE_EQ(hi["halfspaces"][0]["upper_threshold"].get<double>(), 15.0);
}

TEST(Cli, ConesPrintsGeneratorsAndNormals) {
  const auto r = invoke({"cones", "--problem", data("example3.json"), "--output", "json"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(cone_from_json(j["importance_cone"]), conerank::testing::table1_cone());
  EXPECT_EQ(cone_from_json(j["acceptance_cone"]), dual_cone(conerank::testing::table1_cone()));

  const auto t = invoke({"cones", "--problem", data("three_criteria.json")});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_NE(t.out.find("importance cone K_I"), std::string::npos);
  EXPECT_NE(t.out.find("facet normals"), std::string::npos);
}

TEST(Cli, PlotWritesDeterministicSvg) {
  const auto dir = temp_dir("plot");
  const auto file = (dir / "fig.svg").string();
  const auto a = invoke({"plot", "--problem", data("example3.json"), "-p", "0.8", "--bbox", "0,0,6,6", "--out", file});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_TRUE(a.out.empty());
  std::ifstream f(file);
  const std::string written((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  const auto b = invoke({"plot", "--problem", data("example3.json"), "-p", "0.8", "--bbox", "0,0,6,6", "--output", "svg"});
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(written, b.out);
  EXPECT_EQ(b.out.rfind("<svg", 0), 0u);
  fs::remove_all(dir);
}

TEST(Cli, ExitCodes) {
  const auto ex3 = data("example3.json");
  // bad flags
  EXPECT_EQ(invoke({}).code, cli::kBadFlags);
  EXPECT_EQ(invoke({"bogus"}).code, cli::kBadFlags);
  EXPECT_EQ(invoke({"rank"}).code, cli::kBadFlags);
  EXPECT_EQ(invoke({"classify", "--problem", ex3}).code, cli::kBadFlags);
  EXPECT_EQ(invoke({"classify", "--problem", ex3, "-p", "1.0"}).code, cli::kBadFlags);
  EXPECT_EQ(invoke({"classify", "--problem", ex3, "-p", "0"}).code, cli::kBadFlags);
  EXPECT_EQ(invoke({"classify", "--problem", ex3, "-p", "abc"}).code, cli::kBadFlags);
  EXPECT_EQ(invoke({"quantile", "--problem", ex3}).code, cli::kBadFlags);
  EXPECT_EQ(invoke({"plot", "--problem", ex3, "--bbox", "0,0,6,6"}).code, cli::kBadFlags);
  EXPECT_EQ(invoke({"plot", "--problem", ex3, "-p", "0.5"}).code, cli::kBadFlags);
  EXPECT_EQ(invoke({"plot", "--problem", ex3, "-p", "0.5", "--bbox", "6,0,0,6"}).code, cli::kBadFlags);
  EXPECT_EQ(invoke({"plot", "--problem", ex3, "-p", "0.5", "--bbox", "0,0,6"}).code, cli::kBadFlags);
  EXPECT_EQ(invoke({"rank", "--problem", ex3, "--output", "svg"}).code, cli::kBadFlags);
  EXPECT_EQ(invoke({"rank", "--problem", ex3, "--output", "xml"}).code, cli::kBadFlags);
  EXPECT_EQ(invoke({"rank", "--problem", ex3, "--judges", ""}).code, cli::kBadFlags);
  EXPECT_EQ(invoke({"rank", "--problem", ex3, "--judges", "j9"}).code, cli::kBadFlags);
  EXPECT_EQ(invoke({"serve", "--port", "70000"}).code, cli::kBadFlags);
  EXPECT_EQ(invoke({"serve", "--static", "/nonexistent/conerank"}).code, cli::kBadFlags);
  // unsupported dimension
  EXPECT_EQ(invoke({"plot", "--problem", data("three_criteria.json"), "-p", "0.5", "--bbox", "0,0,1,1"}).code,
            cli::kUnsupportedDimension);
  // parse / validation failures
  EXPECT_EQ(invoke({"rank", "--problem", data("missing.json")}).code, cli::kInvalidInput);
}

TEST(Cli, ParseFailureReportsLocation) {
  const auto dir = temp_dir("bad");
  const auto file = dir / "bad.json";
  std::ofstream(file) << R"({"criteria":["c1","c2"],"alternatives":["a"],"judges":[[1,-2]],"evaluations":[[1,2]]})";
  const auto r = invoke({"rank", "--problem", file.string()});
  EXPECT_EQ(r.code, cli::kInvalidInput);
  EXPECT_NE(r.err.find("judges[0]"), std::string::npos) << r.err;
  fs::remove_all(dir);
}

TEST(Cli, AxisAlignedPanelAccepted) {
  const auto dir = temp_dir("orthant");
  const auto file = dir / "p.json";
  std::ofstream(file) << R"({"criteria":["c1","c2"],"alternatives":["a","b"],"judges":[[1,0],[0,1]],"evaluations":[[1,2],[2,1]]})";
  EXPECT_EQ(invoke({"rank", "--problem", file.string()}).code, 0);
  fs::remove_all(dir);
}

TEST(Cli, HelpExitsZero) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("classify"), std::string::npos);
}
