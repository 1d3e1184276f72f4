#include "doctest.h"

#include "graphkdv_cli/cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using graphkdv::cli::json;

namespace {

fs::path fresh(const std::string& name) {
  const fs::path d = fs::path(GRAPHKDV_TEST_TMP) / "cli" / name;
  fs::remove_all(d);
  fs::create_directories(d.parent_path());
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json manifest(const fs::path& dir) { return json::parse(slurp(dir / "manifest.json")); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("configuration errors exit 2 and write nothing") {
  const fs::path out = fresh("bad");
  CHECK(graphkdv::cli::run(json{{"experiment", "profiles"}, {"Zed", 1.0}}, out) == 2);
  CHECK(graphkdv::cli::run(json{{"experiment", "nope"}}, out) == 2);
  CHECK(graphkdv::cli::run(json{{"experiment", "profiles"}, {"beta", 1.0}}, out) == 2);
  CHECK(graphkdv::cli::run(json{{"experiment", "profiles"}, {"Z", 3.0}}, out) == 2);
  CHECK(graphkdv::cli::run(json{{"experiment", "profiles"}, {"L", 10.0}, {"h", 0.3}}, out) == 2);
  CHECK(graphkdv::cli::run(json{{"experiment", "evolve"}, {"solver", "rk4"}}, out) == 2);
  CHECK(graphkdv::cli::run(json::array(), out) == 2);

  const fs::path cfg = fs::path(GRAPHKDV_TEST_TMP) / "cli" / "malformed.json";
  std::ofstream(cfg) << "{\"experiment\": \"profiles\",";
  CHECK(graphkdv::cli::run(cfg, out) == 2);
  CHECK(graphkdv::cli::run(fs::path(GRAPHKDV_TEST_TMP) / "cli" / "missing.json", out) == 2);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("profiles run writes a manifest") {
  const fs::path out = fresh("profiles");
  REQUIRE(graphkdv::cli::run(json{{"experiment", "profiles"}}, out) == 0);
  const json m = manifest(out);
  CHECK(m.at("status") == "pass");
  CHECK(m.at("experiment") == "profiles");
  CHECK(m.at("headline").at("vertex_value").get<double>() == doctest::Approx(1.125).epsilon(1e-14));
  CHECK(m.at("headline").at("kind") == "bump");
  for (const auto& f : m.at("outputs")) CHECK(fs::exists(out / f.get<std::string>()));
}

TEST_CASE("failing checks exit 1 unless assertions are off") {
  const json cfg = {{"experiment", "trace-matrix"}, {"tau_count", 5}};
  CHECK(graphkdv::cli::run(cfg, fresh("tm")) == 1);
  json off = cfg;
  off["assert"] = false;
  const fs::path out = fresh("tm_off");
  CHECK(graphkdv::cli::run(off, out) == 0);
  CHECK(manifest(out).at("status") == "fail");
}

TEST_CASE("roots run and determinism") {
  const json cfg = {{"experiment", "roots"}, {"tau_count", 200}, {"seed", 7}};
  const fs::path a = fresh("roots_a"), b = fresh("roots_b");
  REQUIRE(graphkdv::cli::run(cfg, a) == 0);
  REQUIRE(graphkdv::cli::run(cfg, b) == 0);
  CHECK(manifest(a).at("headline").at("r2_real_part_max").get<double>() < 1e-9);
  CHECK(slurp(a / "roots.csv") == slurp(b / "roots.csv"));
  CHECK(!slurp(a / "roots.csv").empty());
}

TEST_CASE("sweep") {
  SUBCASE("grid with a duplicate") {
    const json doc = {{"base", {{"experiment", "profiles"}}}, {"grid", {{"Z", {0.5, 1.0, 1.0}}}}};
    const auto spec = graphkdv::cli::parse_sweep(doc);
    REQUIRE(spec.values.size() == 1);
    CHECK(spec.values[0].size() == 2);
    CHECK(spec.warnings.size() == 1);
    const fs::path out = fresh("sweep");
    CHECK(graphkdv::cli::sweep(doc, out) == 0);
    const std::string csv = slurp(out / "sweep.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(csv.rfind("Z,status,", 0) == 0);
  }
  SUBCASE("empty grid gives a header-only table") {
    const fs::path out = fresh("sweep_empty");
    CHECK(graphkdv::cli::sweep(json{{"base", {{"experiment", "profiles"}}}, {"grid", {{"Z", json::array()}}}}, out) == 0);
    const std::string csv = slurp(out / "sweep.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1);
  }
  SUBCASE("bad sweep configs") {
    const fs::path out = fresh("sweep_bad");
    CHECK(graphkdv::cli::sweep(json{{"base", {{"experiment", "profiles"}}}, {"grid", {{"h", {0.1}}}}}, out) == 2);
    CHECK(graphkdv::cli::sweep(json{{"grid", {{"Z", {1.0}}}}}, out) == 2);
    CHECK(graphkdv::cli::sweep(json{{"base", {{"experiment", "profiles"}}}, {"grid", {{"Z", {"a"}}}}}, out) == 2);
    CHECK_FALSE(fs::exists(out));
  }
  SUBCASE("rows outside the admissible range are reported, not fatal") {
    const fs::path out = fresh("sweep_rows");
    CHECK(graphkdv::cli::sweep(json{{"base", {{"experiment", "profiles"}}}, {"grid", {{"Z", {1.0, 3.0}}}}}, out) == 1);
    const std::string csv = slurp(out / "sweep.csv");
    CHECK(csv.find("error:") != std::string::npos);
  }
}

TEST_CASE("report") {
  const fs::path root = fresh("report");
  std::ostringstream log;
  CHECK(graphkdv::cli::report(root / "missing", log) == 2);
  fs::create_directories(root);
  CHECK(graphkdv::cli::report(root, log) == 1);

  REQUIRE(graphkdv::cli::run(json{{"experiment", "profiles"}}, root / "p") == 0);
  json off = {{"experiment", "trace-matrix"}, {"tau_count", 3}, {"assert", false}};
  REQUIRE(graphkdv::cli::run(off, root / "t") == 0);
  std::ostringstream summary;
  CHECK(graphkdv::cli::report(root, summary) == 0);
  CHECK(summary.str().find("runs: 2 (1 pass, 1 fail)") != std::string::npos);
  CHECK(fs::exists(root / "report" / "summary.csv"));
  CHECK(fs::exists(root / "report" / "manifest.json"));
  // the report directory itself is not picked up on a second pass
  std::ostringstream again;
  CHECK(graphkdv::cli::report(root, again) == 0);
  CHECK(again.str().find("runs: 2 ") != std::string::npos);

  // a directory of CSVs without a manifest is flagged
  fs::create_directories(root / "stray");
  std::ofstream(root / "stray" / "x.csv") << "a\n1\n";
  std::ostringstream stray;
  CHECK(graphkdv::cli::report(root, stray) == 1);
}

}
