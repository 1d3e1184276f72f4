#include "graphkdv_cli/cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>

namespace graphkdv::cli {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

void write_atomic(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
  }
  fs::rename(tmp, path);
}

}  // namespace

void write_csv(const Table& t, const fs::path& path) {
  std::string text;
  for (std::size_t i = 0; i < t.header.size(); ++i) text += (i ? "," : "") + t.header[i];
  text += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + cell_text(row[i]);
    text += '\n';
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_atomic(path, text);
}

int write_run(const RunConfig& cfg, const RunResult& res, const fs::path& out, double wall_seconds,
              const std::string& started, const std::string& finished) {
  fs::create_directories(out);
  json manifest;
  manifest["artifact"] = "graphkdv";
  manifest["version"] = kVersion;
  manifest["experiment"] = cfg.experiment;
  manifest["config"] = cfg.echo;
  manifest["started"] = started;
  manifest["finished"] = finished;
  manifest["wall_seconds"] = wall_seconds;
  json checks = json::array();
  for (const auto& c : res.checks) {
    json j;
    j["name"] = c.name;
    j["pass"] = c.pass;
    j["value"] = c.value;
    j["tolerance"] = c.tolerance;
    if (!c.note.empty()) j["note"] = c.note;
    checks.push_back(j);
  }
  manifest["checks"] = checks;
  manifest["headline"] = res.headline;
  json outputs = json::array();
  for (const auto& t : res.tables) {
    write_csv(t, out / t.file);
    outputs.push_back(t.file);
  }
  for (const auto& [name, doc] : res.documents) {
    write_atomic(out / name, doc.dump(2) + "\n");
    outputs.push_back(name);
  }
  manifest["outputs"] = outputs;
  const bool pass = res.all_pass();
  manifest["status"] = pass ? "pass" : "fail";
  write_atomic(out / "manifest.json", manifest.dump(2) + "\n");
  return pass || !cfg.assert_checks ? 0 : 1;
}

int run(const json& doc, const fs::path& out) {
  RunConfig cfg;
  RunResult res;
  const std::string started = timestamp();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    cfg = parse_config(doc);
    res = execute(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 1;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const int code = write_run(cfg, res, out, wall, started, timestamp());
  for (const auto& c : res.checks)
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << format_double(c.value)
              << " tol=" << format_double(c.tolerance) << (c.note.empty() ? "" : " (" + c.note + ")") << "\n";
  return code;
}

int run(const fs::path& config, const fs::path& out) {
  json doc;
  try {
    doc = read_json_file(config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  return run(doc, out);
}

}  // namespace graphkdv::cli
