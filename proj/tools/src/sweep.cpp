#include "graphkdv_cli/cli.hpp"

#include "graphkdv/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>
#include <set>

namespace graphkdv::cli {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kGridKeys = {"alpha", "beta", "Z", "c", "delta"};

}  // namespace

SweepSpec parse_sweep(const json& doc) {
  if (!doc.is_object()) throw ConfigError("sweep config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "base" && key != "grid") throw ConfigError("unknown key '" + key + "' in sweep config");
  }
  if (!doc.contains("base") || !doc.contains("grid")) throw ConfigError("sweep config needs 'base' and 'grid'");
  SweepSpec spec;
  spec.base = parse_config(doc.at("base"));
  const json& grid = doc.at("grid");
  if (!grid.is_object()) throw ConfigError("'grid' must be an object");
  for (const auto& [key, value] : grid.items()) {
    if (!kGridKeys.count(key)) throw ConfigError("grid key '" + key + "' is not sweepable");
    if (!value.is_array()) throw ConfigError("grid key '" + key + "' must map to an array");
    std::vector<double> vals;
    for (const auto& v : value) {
      if (!v.is_number()) throw ConfigError("grid key '" + key + "' must hold numbers");
      const double x = v.get<double>();
      if (std::find(vals.begin(), vals.end(), x) != vals.end()) {
        spec.warnings.push_back("duplicate value " + format_double(x) + " for '" + key + "' dropped");
        continue;
      }
      vals.push_back(x);
    }
    spec.keys.push_back(key);
    spec.values.push_back(std::move(vals));
  }
  return spec;
}

int sweep(const json& doc, const fs::path& out) {
  SweepSpec spec;
  try {
    spec = parse_sweep(doc);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  for (const auto& w : spec.warnings) std::cerr << "warning: " << w << "\n";
  const std::string started = timestamp();
  const auto t0 = std::chrono::steady_clock::now();

  // cartesian product in the order given, last key fastest
  std::vector<std::vector<double>> points;
  bool empty = spec.keys.empty();
  for (const auto& v : spec.values) empty = empty || v.empty();
  if (!empty) {
    std::vector<std::size_t> idx(spec.keys.size(), 0);
    for (;;) {
      std::vector<double> p;
      for (std::size_t k = 0; k < idx.size(); ++k) p.push_back(spec.values[k][idx[k]]);
      points.push_back(std::move(p));
      int k = static_cast<int>(idx.size()) - 1;
      while (k >= 0 && ++idx[k] == spec.values[k].size()) idx[k--] = 0;
      if (k < 0) break;
    }
  }

  struct Row {
    std::string status;
    int passed = 0;
    int total = 0;
    json headline;
  };
  std::vector<Row> rows(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    json cfg = spec.base.echo;
    for (std::size_t k = 0; k < spec.keys.size(); ++k) cfg[spec.keys[k]] = points[i][k];
    try {
      const RunResult r = execute(parse_config(cfg));
      rows[i].headline = r.headline;
      rows[i].total = static_cast<int>(r.checks.size());
      for (const auto& c : r.checks) rows[i].passed += c.pass;
      rows[i].status = rows[i].passed == rows[i].total ? "pass" : "fail";
    } catch (const std::exception& e) {
      rows[i].status = std::string("error: ") + e.what();
    }
  });

  std::set<std::string> numeric;
  for (const auto& r : rows)
    for (const auto& [k, v] : r.headline.items())
      if (v.is_number() || v.is_boolean()) numeric.insert(k);
  Table t{"sweep.csv", spec.keys, {}};
  t.header.push_back("status");
  t.header.push_back("checks_passed");
  t.header.push_back("checks_total");
  for (const auto& k : numeric) t.header.push_back(k);
  bool all_ok = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<Cell> row;
    for (double v : points[i]) row.push_back(v);
    std::string status = rows[i].status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    row.push_back(status);
    row.push_back(static_cast<long long>(rows[i].passed));
    row.push_back(static_cast<long long>(rows[i].total));
    for (const auto& k : numeric) {
      if (!rows[i].headline.contains(k)) {
        row.push_back(std::string());
        continue;
      }
      const json& v = rows[i].headline.at(k);
      row.push_back(v.is_boolean() ? static_cast<double>(v.get<bool>()) : v.get<double>());
    }
    all_ok = all_ok && rows[i].status == "pass";
    t.rows.push_back(std::move(row));
  }
  RunResult summary;
  summary.headline["rows"] = static_cast<long long>(rows.size());
  summary.headline["warnings"] = spec.warnings;
  summary.checks.push_back(Check{"all_rows_pass", all_ok, 0.0, 0.0, ""});
  summary.tables.push_back(std::move(t));
  RunConfig echo = spec.base;
  echo.experiment = "sweep:" + spec.base.experiment;
  echo.echo = doc;
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const int code = write_run(echo, summary, out, wall, started, timestamp());
  std::cout << rows.size() << " rows, " << (all_ok ? "all pass" : "some rows failed") << "\n";
  return code;
}

int sweep(const fs::path& config, const fs::path& out) {
  json doc;
  try {
    doc = read_json_file(config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  return sweep(doc, out);
}

}  // namespace graphkdv::cli
