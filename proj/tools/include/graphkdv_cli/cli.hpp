#pragma once

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace graphkdv::cli {

using json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::string experiment;
  double alpha = 1.0;
  double beta = -1.0;
  double Z = 1.0;
  double c = 1.0;
  int n_pairs = 1;
  double L = 40.0;
  double h = 0.05;
  double dt = 0.01;
  double T = 1.0;
  int n_x = 256;
  double tol = 0.0;  // 0: experiment default
  bool psi_prefactor = false;
  std::uint64_t seed = 1;
  bool assert_checks = true;

  // roots, trace-matrix
  double tau_min = -10.0;
  double tau_max = 10.0;
  int tau_count = 201;
  // linear-ibvp
  std::string side = "right";
  double x0 = 8.0;
  double width = 2.0;
  double amplitude = 0.1;
  double frequency = 3.0;
  // evolve
  std::string solver = "fd";
  std::string initial = "UZ";
  std::string initial_csv;
  int store_every = 10;
  bool nonlinear = true;
  bool sponge = true;
  // spectrum, instability
  std::string variant = "AZ";
  std::string profile_source = "UZ";
  double coarse_h = 0.2;
  double delta = 1e-4;
  std::string direction = "unstable";
  // probes
  int samples = 64;
  double s = 1.0;
  double b = 7.0 / 16.0;
  double sigma = 0.55;

  json echo;  // the parsed document
};

// Strict parse: unknown keys, keys that do not apply to the experiment, wrong types and
// parameters outside their validity region raise ConfigError.
RunConfig parse_config(const json& doc);
RunConfig load_config(const std::filesystem::path& path);
json read_json_file(const std::filesystem::path& path);

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string note;
};

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string file;
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

struct RunResult {
  std::vector<Check> checks;
  json headline = json::object();
  std::vector<Table> tables;
  std::vector<std::pair<std::string, json>> documents;  // extra JSON outputs
  bool all_pass() const;
};

// Runs the configured experiment in memory.
RunResult execute(const RunConfig& cfg);

// Writes tables, documents and manifest.json (atomically) into out. Returns the exit code:
// 0 if every check passes or assertions are disabled, 1 otherwise.
int write_run(const RunConfig& cfg, const RunResult& res, const std::filesystem::path& out, double wall_seconds,
              const std::string& started, const std::string& finished);

// Full run: load, execute, write. Exit 2 on configuration errors before any output is created.
int run(const std::filesystem::path& config, const std::filesystem::path& out);
int run(const json& doc, const std::filesystem::path& out);

// Sweep: {"base": {...}, "grid": {"Z": [...], "beta": [...], "alpha": [...]}}.
struct SweepSpec {
  RunConfig base;
  std::vector<std::string> keys;
  std::vector<std::vector<double>> values;
  std::vector<std::string> warnings;
};
SweepSpec parse_sweep(const json& doc);
int sweep(const std::filesystem::path& config, const std::filesystem::path& out);
int sweep(const json& doc, const std::filesystem::path& out);

// Collates every manifest.json below dir into dir/report.
int report(const std::filesystem::path& dir, std::ostream& summary);

std::string format_double(double v);
void write_csv(const Table& t, const std::filesystem::path& path);
std::string timestamp();

}  // namespace graphkdv::cli
