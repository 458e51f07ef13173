#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "synccert/commands.hpp"
#include "synccert/error.hpp"

namespace {

using namespace synccert;

NetworkConfig load(const std::string& path, std::optional<std::uint64_t> seed) {
  NetworkConfig cfg = parse_config(path);
  if (const char* env = std::getenv("SYNC_CERT_SEED")) apply_seed(cfg, std::stoull(env));
  if (seed) apply_seed(cfg, *seed);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed synchronisation certificates for networks of heterogeneous Goodwin oscillators"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;

  auto* certify = app.add_subcommand("certify", "Evaluate the per-edge margin and the gain bound");
  CertifyOptions certify_opts;
  std::string certify_csv, certify_json;
  certify->add_option("config", config_path, "Network configuration (JSON)")->required()->check(CLI::ExistingFile);
  certify->add_option("--csv", certify_csv, "Write the margin report (edge,slack,verdict)");
  certify->add_option("--json", certify_json, "Write the edge certificates as JSON");

  auto* simulate = app.add_subcommand("simulate", "Simulate the closed network and write trace.csv");
  SimulateOptions sim_opts;
  std::string out_dir = ".";
  std::optional<double> dt, horizon, noise_scale;
  simulate->add_option("config", config_path, "Network configuration (JSON)")->required()->check(CLI::ExistingFile);
  simulate->add_option("-o,--out", out_dir, "Output directory")->required();
  simulate->add_flag("--full", sim_opts.full, "Add per-edge X, V, W columns");
  simulate->add_flag("--check-bound", sim_opts.check_bound, "Check ||D^T Y||_T <= rho ||W||_T + eps");
  simulate->add_flag("--check-lemma1", sim_opts.check_lemma1, "Check the network dissipativity inequality");
  simulate->add_option("--seed", seed, "Network-wide disturbance seed");
  simulate->add_option("--dt", dt, "Integration step");
  simulate->add_option("-T,--horizon", horizon, "Simulation horizon");
  simulate->add_option("--noise-scale", noise_scale, "Override the disturbance scale (0 disables it)");

  auto* search = app.add_subcommand("search", "Grid search over (theta, theta3)");
  SearchOptions search_opts;
  std::string theta_axis = "0.5:4:20", theta3_axis = "1.2:1.9:20", search_csv;
  std::vector<std::string> includes;
  search->add_option("config", config_path, "Network configuration (JSON)")->required()->check(CLI::ExistingFile);
  search->add_option("--theta", theta_axis, "lo:hi:n");
  search->add_option("--theta3", theta3_axis, "lo:hi:n");
  search->add_option("--include", includes, "Extra point theta:theta3 (repeatable)");
  search->add_option("--csv", search_csv, "Write the full grid (theta,theta3,min_slack,feasible)");

  auto* stats = app.add_subcommand("graph-stats", "Neighbour statistics and graph matrices");
  std::string stats_dir;
  stats->add_option("config", config_path, "Network configuration (JSON)")->required()->check(CLI::ExistingFile);
  stats->add_option("-o,--out", stats_dir, "Write incidence/laplacian/phi/phi_bar CSVs here");

  auto* reproduce = app.add_subcommand("reproduce-paper", "Run the bundled five-oscillator case study end to end");
  ReproduceOptions repro_opts;
  std::string repro_config, repro_out;
  reproduce->add_flag("--per-edge", repro_opts.per_edge, "Use per-edge heterogeneity instead of the uniform worst case");
  reproduce->add_option("--dt", dt, "Integration step");
  reproduce->add_option("-T,--horizon", horizon, "Simulation horizon");
  reproduce->add_option("--seed", seed, "Disturbance seed");
  reproduce->add_option("--config", repro_config, "Use this configuration instead of the bundled one");
  reproduce->add_option("-o,--out", repro_out, "Write trace CSVs here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*certify) {
      if (!certify_csv.empty()) certify_opts.csv = certify_csv;
      if (!certify_json.empty()) certify_opts.json = certify_json;
      return cmd_certify(load(config_path, std::nullopt), certify_opts, std::cout, std::cerr);
    }
    if (*simulate) {
      NetworkConfig cfg = load(config_path, seed);
      if (dt) cfg.sim.dt = *dt;
      if (horizon) cfg.sim.horizon = *horizon;
      if (noise_scale) set_noise_scale(cfg, *noise_scale);
      sim_opts.out_dir = out_dir;
      return cmd_simulate(cfg, sim_opts, std::cout, std::cerr);
    }
    if (*search) {
      search_opts.theta = parse_axis(theta_axis);
      search_opts.theta3 = parse_axis(theta3_axis);
      for (const auto& inc : includes) {
        const auto colon = inc.find(':');
        if (colon == std::string::npos) throw InadmissibleParams("--include expects theta:theta3, got '" + inc + "'");
        search_opts.include.push_back({std::stod(inc.substr(0, colon)), std::stod(inc.substr(colon + 1))});
      }
      if (!search_csv.empty()) search_opts.csv = search_csv;
      return cmd_search(load(config_path, std::nullopt), search_opts, std::cout, std::cerr);
    }
    if (*stats) {
      std::optional<std::filesystem::path> dir;
      if (!stats_dir.empty()) dir = stats_dir;
      return cmd_graph_stats(load(config_path, std::nullopt), dir, std::cout, std::cerr);
    }
    if (*reproduce) {
      repro_opts.dt = dt;
      repro_opts.horizon = horizon;
      repro_opts.seed = seed;
      if (const char* env = std::getenv("SYNC_CERT_SEED"); env && !seed) repro_opts.seed = std::stoull(env);
      if (!repro_config.empty()) repro_opts.config = repro_config;
      if (!repro_out.empty()) repro_opts.out_dir = repro_out;
      return cmd_reproduce_paper(repro_opts, std::cout, std::cerr);
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitInadmissible;
  } catch (const BlowUp& e) {
    std::cerr << "numerical blow-up at t = " << e.time() << "\n";
    return kExitBlowUp;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInadmissible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInadmissible;
  }
  return kExitOk;
}
