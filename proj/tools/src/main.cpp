#include "graphkdv_cli/cli.hpp"

#include "CLI11.hpp"

#include <iostream>

using graphkdv::cli::json;

int main(int argc, char** argv) {
  CLI::App app{"graphkdv: KdV on a balanced star graph with delta-type vertex coupling"};
  app.require_subcommand(1);

  std::string config, out = "out", dir;
  auto* run = app.add_subcommand("run", "run the experiment named in a config file");
  run->add_option("--config", config, "JSON config")->required();
  run->add_option("--out", out, "output directory");

  auto* sweep = app.add_subcommand("sweep", "run a base config over a parameter grid");
  sweep->add_option("--config", config, "JSON sweep config")->required();
  sweep->add_option("--out", out, "output directory");

  auto* report = app.add_subcommand("report", "collate manifests below a directory");
  report->add_option("--dir", dir, "directory holding run outputs")->required();

  // one subcommand per experiment: optional config plus overrides
  struct Overrides {
    std::string config;
    std::optional<double> Z, alpha, beta, T, dt, L, h;
    std::optional<std::string> solver, profile;
  };
  const std::vector<std::string> experiments = {"profiles",    "roots",    "trace-matrix", "linear-ibvp",
                                                "evolve",      "spectrum", "instability",  "probes"};
  std::vector<Overrides> ov(experiments.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < experiments.size(); ++i) {
    auto* s = app.add_subcommand(experiments[i], "run the " + experiments[i] + " experiment");
    s->set_help_flag("--help", "print this help and exit");
    s->add_option("--config", ov[i].config, "JSON config (the experiment key may be omitted)");
    s->add_option("--out", out, "output directory");
    s->add_option("--Z", ov[i].Z);
    s->add_option("--alpha", ov[i].alpha);
    s->add_option("--beta", ov[i].beta);
    s->add_option("--T", ov[i].T);
    s->add_option("--dt", ov[i].dt);
    s->add_option("--L", ov[i].L);
    s->add_option("--h", ov[i].h);
    if (experiments[i] == "evolve") {
      s->add_option("--solver", ov[i].solver, "fd, picard or group");
      s->add_option("--profile", ov[i].profile, "initial data: UZ, gaussian, traveling, or a GraphFunction CSV path");
    }
    subs.push_back(s);
  }

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return graphkdv::cli::run(std::filesystem::path(config), out);
  if (sweep->parsed()) return graphkdv::cli::sweep(std::filesystem::path(config), out);
  if (report->parsed()) return graphkdv::cli::report(dir, std::cout);
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    const Overrides& o = ov[i];
    json doc = json::object();
    if (!o.config.empty()) {
      try {
        doc = graphkdv::cli::read_json_file(o.config);
      } catch (const graphkdv::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
      }
      if (!doc.is_object()) {
        std::cerr << "config error: config must be a JSON object\n";
        return 2;
      }
    }
    if (doc.contains("experiment") && doc["experiment"] != experiments[i]) {
      std::cerr << "config error: config names experiment " << doc["experiment"] << "\n";
      return 2;
    }
    doc["experiment"] = experiments[i];
    auto set = [&](const char* key, const auto& v) {
      if (v) doc[key] = *v;
    };
    set("Z", o.Z);
    set("alpha", o.alpha);
    set("beta", o.beta);
    set("T", o.T);
    set("dt", o.dt);
    set("L", o.L);
    set("h", o.h);
    set("solver", o.solver);
    if (o.profile) {
      if (*o.profile == "UZ" || *o.profile == "gaussian" || *o.profile == "traveling") {
        doc["initial"] = *o.profile;
      } else {
        doc["initial"] = "csv";
        doc["initial_csv"] = *o.profile;
      }
    }
    return graphkdv::cli::run(doc, out);
  }
  return 2;
}
