#include "graphkdv_cli/cli.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace graphkdv::cli {

namespace {

const std::set<std::string> kCommon = {"experiment", "alpha", "beta", "Z", "L", "h", "tol", "seed", "assert", "n_pairs"};

const std::map<std::string, std::set<std::string>> kSpecific = {
    {"profiles", {}},
    {"roots", {"tau_min", "tau_max", "tau_count"}},
    {"trace-matrix", {"tau_min", "tau_max", "tau_count"}},
    {"linear-ibvp", {"side", "dt", "T", "x0", "width", "amplitude", "frequency"}},
    {"evolve",
     {"solver", "dt", "T", "c", "initial", "initial_csv", "amplitude", "x0", "width", "store_every", "nonlinear",
      "sponge", "psi_prefactor"}},
    {"spectrum", {"variant", "profile_source", "coarse_h"}},
    {"instability", {"variant", "coarse_h", "delta", "direction", "dt", "T", "store_every"}},
    {"probes", {"samples", "s", "b", "sigma", "n_x", "psi_prefactor"}},
};

template <class T>
void take(const json& doc, const char* key, T& dst) {
  if (!doc.contains(key)) return;
  try {
    dst = doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("key '") + key + "': " + e.what());
  }
}

void take_int(const json& doc, const char* key, int& dst) {
  if (!doc.contains(key)) return;
  const json& v = doc.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("key '") + key + "' must be an integer");
  dst = v.get<int>();
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw ConfigError(msg);
}

bool finite_all(std::initializer_list<double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

void one_of(const std::string& key, const std::string& v, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (v == a) return;
  std::ostringstream msg;
  msg << "key '" << key << "' has invalid value '" << v << "'";
  throw ConfigError(msg.str());
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

RunConfig parse_config(const json& doc) {
  require(doc.is_object(), "config must be a JSON object");
  require(doc.contains("experiment") && doc.at("experiment").is_string(), "config needs a string 'experiment'");
  RunConfig c;
  c.experiment = doc.at("experiment").get<std::string>();
  const auto spec = kSpecific.find(c.experiment);
  require(spec != kSpecific.end(), "unknown experiment '" + c.experiment + "'");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    require(kCommon.count(key) || spec->second.count(key), "unknown key '" + key + "' for experiment " + c.experiment);
  }
  take(doc, "alpha", c.alpha);
  take(doc, "beta", c.beta);
  take(doc, "Z", c.Z);
  take(doc, "c", c.c);
  take_int(doc, "n_pairs", c.n_pairs);
  take(doc, "L", c.L);
  if (c.experiment == "evolve") c.h = 0.025;
  if (c.experiment == "instability") c.T = 0.0;
  take(doc, "h", c.h);
  take(doc, "dt", c.dt);
  take(doc, "T", c.T);
  take_int(doc, "n_x", c.n_x);
  take(doc, "tol", c.tol);
  take(doc, "psi_prefactor", c.psi_prefactor);
  if (doc.contains("seed")) {
    const json& v = doc.at("seed");
    require(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0),
            "key 'seed' must be a non-negative integer");
    c.seed = doc.at("seed").get<std::uint64_t>();
  }
  take(doc, "assert", c.assert_checks);
  take(doc, "tau_min", c.tau_min);
  take(doc, "tau_max", c.tau_max);
  take_int(doc, "tau_count", c.tau_count);
  take(doc, "side", c.side);
  take(doc, "x0", c.x0);
  take(doc, "width", c.width);
  take(doc, "amplitude", c.amplitude);
  take(doc, "frequency", c.frequency);
  take(doc, "solver", c.solver);
  take(doc, "initial", c.initial);
  take(doc, "initial_csv", c.initial_csv);
  take_int(doc, "store_every", c.store_every);
  take(doc, "nonlinear", c.nonlinear);
  take(doc, "sponge", c.sponge);
  take(doc, "variant", c.variant);
  take(doc, "profile_source", c.profile_source);
  take(doc, "coarse_h", c.coarse_h);
  take(doc, "delta", c.delta);
  take(doc, "direction", c.direction);
  take_int(doc, "samples", c.samples);
  take(doc, "s", c.s);
  take(doc, "b", c.b);
  take(doc, "sigma", c.sigma);

  require(finite_all({c.alpha, c.beta, c.Z, c.c, c.L, c.h, c.dt, c.T, c.tol, c.tau_min, c.tau_max, c.x0, c.width,
                      c.amplitude, c.frequency, c.coarse_h, c.delta, c.s, c.b, c.sigma}),
          "all numeric parameters must be finite");
  require(c.alpha > 0.0, "alpha must be positive");
  require(c.beta < 0.0, "beta must be negative");
  require(c.n_pairs >= 1, "n_pairs must be >= 1");
  require(c.L > 0.0 && c.h > 0.0 && c.h < c.L, "need 0 < h < L");
  const double cells = c.L / c.h;
  require(std::abs(cells - std::round(cells)) <= 1e-9 * cells, "h must divide L");
  require(c.tol >= 0.0, "tol must be >= 0");
  const bool profile_params = c.experiment == "profiles" || c.experiment == "spectrum" || c.experiment == "instability" ||
                              (c.experiment == "evolve" && c.initial == "UZ");
  if (profile_params) {
    require(c.Z != 0.0, "Z must be nonzero");
    require(c.Z * c.Z / 4.0 < -c.beta / c.alpha, "need Z^2/4 < omega = -beta/alpha");
  }
  if (c.experiment == "roots" || c.experiment == "trace-matrix") {
    require(c.tau_count >= 1, "tau_count must be >= 1");
    require(c.tau_max >= c.tau_min, "need tau_max >= tau_min");
  }
  if (c.experiment == "linear-ibvp") {
    one_of("side", c.side, {"right", "left"});
    require(c.dt > 0.0 && c.T > 0.0, "need dt > 0 and T > 0");
    require(c.T / c.dt >= 15.0, "need at least 16 time samples");
    require(c.width > 0.0, "width must be positive");
  }
  if (c.experiment == "evolve") {
    one_of("solver", c.solver, {"fd", "picard", "group"});
    one_of("initial", c.initial, {"UZ", "gaussian", "csv", "traveling"});
    require(c.initial != "csv" || !c.initial_csv.empty(), "initial 'csv' needs initial_csv");
    require(c.dt > 0.0 && c.T > 0.0, "need dt > 0 and T > 0");
    require(c.store_every >= 1, "store_every must be >= 1");
    require(c.width > 0.0, "width must be positive");
    require(c.Z != 0.0 || c.solver == "fd", "Z = 0 is only supported by the fd solver");
    require(c.initial != "traveling" || c.c > c.beta, "traveling wave needs c > beta");
  }
  if (c.experiment == "spectrum" || c.experiment == "instability") {
    one_of("variant", c.variant, {"AZ", "energy"});
    require(c.coarse_h > 0.0, "coarse_h must be positive");
  }
  if (c.experiment == "spectrum") one_of("profile_source", c.profile_source, {"UZ", "zero"});
  if (c.experiment == "instability") {
    one_of("direction", c.direction, {"unstable", "stable_control"});
    require(c.delta > 0.0, "delta must be positive");
    require(c.dt > 0.0 && c.T >= 0.0, "need dt > 0 and T >= 0");
    require(c.store_every >= 1, "store_every must be >= 1");
  }
  if (c.experiment == "probes") {
    require(c.samples >= 1, "samples must be >= 1");
    require(c.n_x >= 16, "n_x must be >= 16");
    require(c.s >= 0.0 && c.b > 0.0 && c.b < 0.5 && c.sigma > 0.5 && c.sigma < 2.0 / 3.0,
            "need s >= 0, b in (0, 1/2), sigma in (1/2, 2/3)");
  }
  c.echo = doc;
  return c;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_json_file(path)); }

}  // namespace graphkdv::cli
