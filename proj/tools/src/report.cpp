#include "graphkdv_cli/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace graphkdv::cli {

namespace fs = std::filesystem;

namespace {

std::vector<std::vector<std::string>> read_rows(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

bool has_csv(const fs::path& dir) {
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".csv") return true;
  return false;
}

}  // namespace

int report(const fs::path& dir, std::ostream& summary) {
  if (!fs::is_directory(dir)) {
    std::cerr << "report: " << dir << " is not a directory\n";
    return 2;
  }
  const fs::path out = dir / "report";
  std::vector<fs::path> manifests;
  std::vector<fs::path> missing;
  std::set<fs::path> run_dirs;
  for (auto it = fs::recursive_directory_iterator(dir); it != fs::recursive_directory_iterator(); ++it) {
    if (it->is_directory() && it->path() == out) {
      it.disable_recursion_pending();
      continue;
    }
    if (it->is_regular_file() && it->path().filename() == "manifest.json") {
      manifests.push_back(it->path());
      run_dirs.insert(it->path().parent_path());
    }
  }
  for (auto it = fs::recursive_directory_iterator(dir); it != fs::recursive_directory_iterator(); ++it) {
    if (!it->is_directory()) continue;
    if (it->path() == out) {
      it.disable_recursion_pending();
      continue;
    }
    // CSVs without a manifest in this directory or above it
    bool covered = false;
    for (fs::path p = it->path(); !covered; p = p.parent_path()) {
      covered = run_dirs.count(p) > 0;
      if (p == dir || !p.has_parent_path() || p == p.parent_path()) break;
    }
    if (!covered && has_csv(it->path())) missing.push_back(it->path());
  }
  if (!run_dirs.count(dir) && has_csv(dir)) missing.push_back(dir);
  std::sort(manifests.begin(), manifests.end());
  std::sort(missing.begin(), missing.end());

  if (manifests.empty()) {
    std::cerr << "report: no manifest.json found below " << dir << "\n";
    for (const auto& m : missing) std::cerr << "  outputs without manifest: " << m << "\n";
    return 1;
  }

  Table runs{"summary.csv", {"run", "experiment", "status", "lambda", "lambda_fit", "ratio"}, {}};
  Table deviation{"deviation.csv", {"run", "t", "deviation_h1"}, {}};
  Table spectrum{"spectrum.csv", {"run", "re", "im"}, {}};
  std::vector<std::string> passed, failed;
  for (const auto& m : manifests) {
    const fs::path rundir = m.parent_path();
    const std::string name = fs::relative(rundir, dir).generic_string();
    json doc;
    try {
      doc = read_json_file(m);
    } catch (const ConfigError& e) {
      failed.push_back(name + " (unreadable manifest)");
      continue;
    }
    const std::string experiment = doc.value("experiment", "");
    const std::string status = doc.value("status", "unknown");
    const json head = doc.value("headline", json::object());
    auto num = [&](const char* k) -> Cell {
      if (head.contains(k) && head.at(k).is_number()) return head.at(k).get<double>();
      return std::string();
    };
    runs.rows.push_back({name, experiment, status, num("lambda"), num("lambda_fit"), num("ratio")});
    std::ostringstream line;
    line << name << " [" << experiment << "]";
    if (experiment == "instability" && head.contains("ratio"))
      line << " lambda_fit/lambda = " << format_double(head.at("ratio").get<double>());
    if (experiment == "spectrum" && head.contains("lambda"))
      line << " lambda = " << format_double(head.at("lambda").get<double>());
    for (const auto& c : doc.value("checks", json::array()))
      if (!c.value("pass", false)) line << " failed:" << c.value("name", "?");
    (status == "pass" ? passed : failed).push_back(line.str());
    if (experiment == "instability" && fs::exists(rundir / "deviation.csv"))
      for (const auto& r : read_rows(rundir / "deviation.csv"))
        if (r.size() >= 2) deviation.rows.push_back({name, std::stod(r[0]), std::stod(r[1])});
    if (experiment == "spectrum" && fs::exists(rundir / "eigenvalues.csv"))
      for (const auto& r : read_rows(rundir / "eigenvalues.csv"))
        if (r.size() >= 2) spectrum.rows.push_back({name, std::stod(r[0]), std::stod(r[1])});
  }

  summary << "runs: " << manifests.size() << " (" << passed.size() << " pass, " << failed.size() << " fail)\n";
  summary << "passing:\n";
  for (const auto& s : passed) summary << "  " << s << "\n";
  summary << "failing:\n";
  for (const auto& s : failed) summary << "  " << s << "\n";
  for (const auto& m : missing) summary << "missing manifest: " << m.generic_string() << "\n";

  RunConfig cfg;
  cfg.experiment = "report";
  cfg.echo = json::object({{"dir", dir.generic_string()}});
  RunResult res;
  res.headline["runs"] = static_cast<long long>(manifests.size());
  res.headline["passing"] = static_cast<long long>(passed.size());
  res.headline["failing"] = static_cast<long long>(failed.size());
  res.checks.push_back(Check{"no_missing_manifests", missing.empty(), static_cast<double>(missing.size()), 0.0, ""});
  res.tables.push_back(std::move(runs));
  res.tables.push_back(std::move(deviation));
  res.tables.push_back(std::move(spectrum));
  const std::string now = timestamp();
  write_run(cfg, res, out, 0.0, now, now);
  return missing.empty() ? 0 : 1;
}

}  // namespace graphkdv::cli
