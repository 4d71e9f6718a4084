// mapcsim: command-line front end for the coordinated spatial-reuse simulator.
#include <unistd.h>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mapc/config.hpp"
#include "mapc/errors.hpp"
#include "mapc/experiment.hpp"
#include "mapc/protocol.hpp"
#include "mapc/rlenv.hpp"
#include "mapc/sched.hpp"

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

std::vector<std::string> split_names(const std::string& list) {
  if (list == "all") return {"mnp", "op", "tat"};
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

mapc::FileConfig config_or_default(const std::string& path) {
  return path.empty() ? mapc::FileConfig{} : mapc::load_config(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-AP coordinated spatial reuse scheduling simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string scheduler;
  std::size_t episodes = 0;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::size_t workers = 0;
  std::vector<std::size_t> sweep;

  auto* simulate = app.add_subcommand("simulate", "Run episodes and write results files");
  simulate->add_option("--config", config_path, "Config file (JSON)")->required()->check(CLI::ExistingFile);
  simulate->add_option("--scheduler", scheduler, "mnp | op | tat, a comma list, or 'all'")->required();
  auto* episodes_opt = simulate->add_option("--episodes", episodes, "Realizations per sweep point");
  auto* seed_opt = simulate->add_option("--seed", seed, "Base seed (u64)");
  simulate->add_option("--out", out_dir, "Output directory")->required();
  auto* workers_opt = simulate->add_option("--workers", workers, "Worker threads (0 = all cores)");
  auto* sweep_opt = simulate->add_option("--n-sweep", sweep, "Total STA counts to sweep");

  std::string socket_path;
  bool use_stdio = false;
  std::size_t max_connections = 0;
  auto* serve = app.add_subcommand("serve-env", "Expose the environment over the length-prefixed JSON protocol");
  serve->add_option("--config", config_path, "Config file (JSON)")->check(CLI::ExistingFile);
  auto* socket_opt = serve->add_option("--socket", socket_path, "Unix socket path");
  auto* stdio_flag = serve->add_flag("--stdio", use_stdio, "Serve one session on stdin/stdout");
  socket_opt->excludes(stdio_flag);
  serve->add_option("--max-connections", max_connections, "Exit after this many connections (0 = never)");

  std::string in_dir;
  auto* report = app.add_subcommand("report", "Rebuild summary tables and CSVs from a results directory");
  report->add_option("--in", in_dir, "Results directory")->required()->check(CLI::ExistingDirectory);

  std::string out_file;
  auto* catalog = app.add_subcommand("catalog", "Export the deployment and group catalog of one seed");
  catalog->add_option("--config", config_path, "Config file (JSON)")->check(CLI::ExistingFile);
  catalog->add_option("--seed", seed, "Episode seed")->required();
  catalog->add_option("--out", out_file, "Output file (default stdout)");

  auto* trace = app.add_subcommand("trace", "Run one episode and write its TXOP trace as JSON lines");
  trace->add_option("--config", config_path, "Config file (JSON)")->check(CLI::ExistingFile);
  trace->add_option("--scheduler", scheduler, "mnp | op | tat")->required();
  trace->add_option("--seed", seed, "Episode seed")->required();
  trace->add_option("--out", out_file, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      mapc::FileConfig file = mapc::load_config(config_path);
      mapc::ExperimentConfig cfg{file.env, file.experiment, out_dir};
      cfg.settings.schedulers = split_names(scheduler);
      if (*episodes_opt) cfg.settings.episodes = episodes;
      if (*seed_opt) cfg.settings.seed = seed;
      if (*workers_opt) cfg.settings.workers = workers;
      if (*sweep_opt) cfg.settings.sta_sweep = sweep;
      cfg.settings.validate();
      const auto results = mapc::run_experiment(cfg);
      std::cout << mapc::format_summary(mapc::summarize(results));
      return 0;
    }
    if (serve->parsed()) {
      const mapc::FileConfig file = config_or_default(config_path);
      if (use_stdio) {
        mapc::wire::serve_stream(STDIN_FILENO, STDOUT_FILENO, file.env);
        return 0;
      }
      if (socket_path.empty()) {
        std::cerr << "serve-env: give --socket <path> or --stdio\n";
        return 2;
      }
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::signal(SIGPIPE, SIG_IGN);
      std::cerr << "serve-env: listening on " << socket_path << '\n';
      mapc::wire::serve_unix_socket(socket_path, file.env, &g_stop, max_connections);
      return 0;
    }
    if (report->parsed()) {
      const auto results = mapc::read_results(in_dir);
      mapc::write_results(in_dir, results);
      std::cout << mapc::format_summary(mapc::summarize(results));
      return 0;
    }
    if (catalog->parsed() || trace->parsed()) {
      const mapc::FileConfig file = config_or_default(config_path);
      std::ofstream file_out;
      if (!out_file.empty()) {
        file_out.open(out_file);
        if (!file_out) throw std::runtime_error("cannot write " + out_file);
      }
      std::ostream& out = out_file.empty() ? std::cout : file_out;
      const auto scenario = mapc::make_scenario(file.env.sim, seed);
      if (catalog->parsed()) {
        nlohmann::json doc = {{"seed", seed},
                              {"deployment_seed", scenario->deployment_seed},
                              {"deployment", mapc::to_json(scenario->deployment)},
                              {"catalog", mapc::to_json(scenario->catalog)}};
        out << doc.dump(2) << '\n';
      } else {
        auto sim = mapc::make_episode(file.env.sim, scenario, seed);
        mapc::advance_episode(*sim, mapc::make_heuristic(scheduler));
        mapc::write_trace_jsonl(out, sim->trace());
      }
      return 0;
    }
  } catch (const mapc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
