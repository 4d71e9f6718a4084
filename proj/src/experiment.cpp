#include "mapc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "mapc/errors.hpp"
#include "mapc/rlenv.hpp"
#include "mapc/rng.hpp"
#include "mapc/sched.hpp"

namespace mapc {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double worst_or_inf(const EpisodeMetrics& m) { return m.worst_p99.value_or(kInf); }

json finite_or_null(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? json(*v) : json(nullptr);
}

std::optional<double> opt_double(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

EpisodeMetrics metrics_from_json(const json& j) {
  EpisodeMetrics m;
  m.starved = j.value("starved", false);
  m.worst_p99 = opt_double(j, "worst_p99");
  if (m.starved) m.worst_p99 = kInf;
  m.mean_delay = j.at("mean_delay").get<double>();
  for (const auto& v : j.at("sta_p99")) {
    m.sta_p99.push_back(v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
  }
  m.delivered = j.at("delivered").get<std::size_t>();
  m.dropped = j.at("dropped").get<std::size_t>();
  m.txops = j.at("txops").get<std::size_t>();
  m.collisions = j.at("collisions").get<std::size_t>();
  m.priority_histogram = j.at("priority_histogram").get<std::vector<double>>();
  return m;
}

std::string fmt_ms(const std::optional<double>& s) {
  if (!s) return "";
  if (!std::isfinite(*s)) return "inf";
  std::ostringstream os;
  os << std::setprecision(12) << *s * 1e3;
  return os.str();
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

}  // namespace

void ExperimentConfig::validate() const {
  env.validate();
  settings.validate();
  for (const auto& name : settings.schedulers) {
    if (name == "external") {
      throw ConfigError("scheduler 'external' is driven through serve-env, not simulate");
    }
    if (!is_heuristic(name)) throw ConfigError("unknown scheduler '" + name + "'");
  }
  for (std::size_t n : settings.sta_sweep) {
    if (n % env.sim.deployment.ap_count != 0) {
      throw ConfigError("N_sweep entry " + std::to_string(n) + " is not a multiple of J");
    }
  }
}

std::uint64_t episode_seed(std::uint64_t base, std::size_t episode) { return derive_seed(base, episode); }

SimConfig sweep_point_config(const ExperimentConfig& cfg, std::size_t sta_count) {
  SimConfig sim = cfg.env.sim;
  const std::size_t aps = sim.deployment.ap_count;
  if (sta_count == 0 || sta_count % aps != 0) {
    throw ConfigError("STA count " + std::to_string(sta_count) + " is not a positive multiple of J");
  }
  sim.deployment.stas_per_ap = sta_count / aps;
  if (cfg.settings.network_load) {
    const auto [lo, hi] =
        load_range_for_network(sta_count, cfg.settings.network_load->mean_mbps, cfg.settings.network_load->sd_mbps);
    sim.traffic.load_min_mbps = lo;
    sim.traffic.load_max_mbps = hi;
  }
  sim.validate();
  return sim;
}

EpisodeResult run_episode(const ExperimentConfig& cfg, std::size_t sta_count, std::size_t episode) {
  EpisodeResult res;
  res.sta_count = sta_count;
  res.episode = episode;
  res.seed = episode_seed(cfg.settings.seed, episode);
  const SimConfig sim_cfg = sweep_point_config(cfg, sta_count);
  try {
    const auto scenario = make_scenario(sim_cfg, res.seed);
    res.deployment_seed = scenario->deployment_seed;
    std::vector<double> worst;
    for (const auto& name : cfg.settings.schedulers) {
      auto sim = make_episode(sim_cfg, scenario, res.seed);
      advance_episode(*sim, make_heuristic(name));
      EpisodeMetrics m = compute_metrics(*sim, cfg.env.priority_bins);
      worst.push_back(worst_or_inf(m));
      res.metrics.emplace(name, std::move(m));
    }
    res.kept = !cfg.settings.apply_discard || keep_realization(worst, cfg.settings.discard_threshold_s);
  } catch (const ScenarioError& e) {
    res.error = e.what();
    res.kept = false;
    res.metrics.clear();
  }
  return res;
}

std::vector<EpisodeResult> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<std::size_t> points = cfg.settings.sta_sweep;
  if (points.empty()) points.push_back(cfg.env.sim.deployment.ap_count * cfg.env.sim.deployment.stas_per_ap);

  struct Job {
    std::size_t sta_count;
    std::size_t episode;
  };
  std::vector<Job> jobs;
  for (std::size_t n : points) {
    for (std::size_t e = 0; e < cfg.settings.episodes; ++e) jobs.push_back({n, e});
  }
  std::vector<EpisodeResult> results(jobs.size());

  std::size_t workers = cfg.settings.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, jobs.size());

  std::atomic<std::size_t> next{0};
  std::mutex log_mu;
  std::exception_ptr fatal;
  auto work = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      try {
        results[k] = run_episode(cfg, jobs[k].sta_count, jobs[k].episode);
        if (results[k].error) {
          std::lock_guard lock(log_mu);
          std::cerr << "episode " << jobs[k].episode << " (N=" << jobs[k].sta_count
                    << ") failed: " << *results[k].error << '\n';
        }
      } catch (...) {
        std::lock_guard lock(log_mu);
        if (!fatal) fatal = std::current_exception();
        next = jobs.size();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (fatal) std::rethrow_exception(fatal);

  std::sort(results.begin(), results.end(), [](const EpisodeResult& a, const EpisodeResult& b) {
    return std::tie(a.sta_count, a.episode) < std::tie(b.sta_count, b.episode);
  });
  if (!cfg.out_dir.empty()) write_results(cfg.out_dir, results);
  return results;
}

json to_json(const EpisodeResult& r) {
  json schedulers = json::object();
  for (const auto& [name, m] : r.metrics) schedulers[name] = to_json(m);
  json out = {{"N", r.sta_count},
              {"episode", r.episode},
              {"seed", r.seed},
              {"deployment_seed", r.deployment_seed},
              {"kept", r.kept},
              {"error", r.error ? json(*r.error) : json(nullptr)},
              {"schedulers", schedulers}};
  return out;
}

EpisodeResult episode_result_from_json(const json& j) {
  EpisodeResult r;
  r.sta_count = j.at("N").get<std::size_t>();
  r.episode = j.at("episode").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.deployment_seed = j.at("deployment_seed").get<std::uint64_t>();
  r.kept = j.at("kept").get<bool>();
  if (!j.at("error").is_null()) r.error = j.at("error").get<std::string>();
  for (const auto& [name, m] : j.at("schedulers").items()) r.metrics.emplace(name, metrics_from_json(m));
  return r;
}

std::vector<SchedulerSummary> summarize(const std::vector<EpisodeResult>& results) {
  // Keyed by (N, scheduler); scheduler order follows first appearance.
  std::vector<SchedulerSummary> rows;
  auto row_for = [&](std::size_t n, const std::string& name) -> SchedulerSummary& {
    for (auto& row : rows) {
      if (row.sta_count == n && row.scheduler == name) return row;
    }
    rows.push_back(SchedulerSummary{});
    rows.back().sta_count = n;
    rows.back().scheduler = name;
    return rows.back();
  };

  std::vector<std::string> names;
  for (const auto& r : results) {
    for (const auto& [name, m] : r.metrics) {
      if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
    }
  }
  std::sort(names.begin(), names.end());

  std::vector<std::size_t> points;
  for (const auto& r : results) points.push_back(r.sta_count);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  for (std::size_t n : points) {
    std::size_t failed = 0;
    for (const auto& r : results) failed += (r.sta_count == n && r.error) ? 1 : 0;
    for (const auto& name : names) {
      SchedulerSummary& row = row_for(n, name);
      row.failed = failed;
      std::vector<double> worst;
      double delay_sum = 0.0;
      std::vector<double> hist;
      for (const auto& r : results) {
        if (r.sta_count != n || r.error) continue;
        const auto it = r.metrics.find(name);
        if (it == r.metrics.end()) continue;
        ++row.episodes;
        if (!r.kept) continue;
        ++row.kept;
        worst.push_back(worst_or_inf(it->second));
        delay_sum += it->second.mean_delay;
        const auto& h = it->second.priority_histogram;
        if (hist.size() < h.size()) hist.resize(h.size(), 0.0);
        for (std::size_t b = 0; b < h.size(); ++b) hist[b] += h[b];
      }
      if (row.episodes > 0) {
        row.discard_fraction = static_cast<double>(row.episodes - row.kept) / static_cast<double>(row.episodes);
      }
      if (!worst.empty()) {
        const double k = static_cast<double>(worst.size());
        row.worst_p99_median = percentile(worst, 50.0);
        row.worst_p99_p10 = percentile(worst, 10.0);
        row.worst_p99_p90 = percentile(worst, 90.0);
        row.worst_p99_mean = std::accumulate(worst.begin(), worst.end(), 0.0) / k;
        row.mean_delay = delay_sum / k;
        for (double& v : hist) v /= k;
        row.priority_histogram = std::move(hist);
      }
    }
  }
  return rows;
}

json to_json(const SchedulerSummary& s) {
  return {{"N", s.sta_count},
          {"scheduler", s.scheduler},
          {"episodes", s.episodes},
          {"kept", s.kept},
          {"failed", s.failed},
          {"discard_fraction", s.discard_fraction},
          {"worst_p99_median", finite_or_null(s.worst_p99_median)},
          {"worst_p99_mean", finite_or_null(s.worst_p99_mean)},
          {"worst_p99_p10", finite_or_null(s.worst_p99_p10)},
          {"worst_p99_p90", finite_or_null(s.worst_p99_p90)},
          {"mean_delay", finite_or_null(s.mean_delay)},
          {"priority_histogram", s.priority_histogram}};
}

void write_results(const std::string& dir, const std::vector<EpisodeResult>& results) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path root(dir);

  std::ostringstream jsonl;
  for (const auto& r : results) jsonl << to_json(r).dump() << '\n';
  write_text(root / "results.jsonl", jsonl.str());

  const auto rows = summarize(results);
  json summary = json::array();
  for (const auto& row : rows) summary.push_back(to_json(row));
  write_text(root / "summary.json", summary.dump(2) + "\n");

  std::ostringstream csv;
  csv << "N,scheduler,episodes,kept,failed,discard_fraction,worst_p99_median_ms,worst_p99_mean_ms,"
         "worst_p99_p10_ms,worst_p99_p90_ms,mean_delay_ms\n";
  for (const auto& row : rows) {
    csv << row.sta_count << ',' << row.scheduler << ',' << row.episodes << ',' << row.kept << ',' << row.failed
        << ',' << std::setprecision(12) << row.discard_fraction << ',' << fmt_ms(row.worst_p99_median) << ','
        << fmt_ms(row.worst_p99_mean) << ',' << fmt_ms(row.worst_p99_p10) << ',' << fmt_ms(row.worst_p99_p90)
        << ',' << fmt_ms(row.mean_delay) << '\n';
  }
  write_text(root / "summary.csv", csv.str());

  std::ostringstream worst;
  worst << "N,episode,seed,scheduler,kept,worst_p99_ms,mean_delay_ms\n";
  for (const auto& r : results) {
    if (r.error) continue;
    for (const auto& [name, m] : r.metrics) {
      worst << r.sta_count << ',' << r.episode << ',' << r.seed << ',' << name << ',' << (r.kept ? 1 : 0) << ','
            << fmt_ms(worst_or_inf(m)) << ',' << fmt_ms(m.mean_delay) << '\n';
    }
  }
  write_text(root / "worst_p99.csv", worst.str());

  std::ostringstream hist;
  hist << "N,scheduler,bin,frequency\n";
  for (const auto& row : rows) {
    for (std::size_t b = 0; b < row.priority_histogram.size(); ++b) {
      hist << row.sta_count << ',' << row.scheduler << ',' << b << ',' << std::setprecision(12)
           << row.priority_histogram[b] << '\n';
    }
  }
  write_text(root / "priority_histogram.csv", hist.str());
}

std::vector<EpisodeResult> read_results(const std::string& dir) {
  const auto path = std::filesystem::path(dir) / "results.jsonl";
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<EpisodeResult> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(episode_result_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::string format_summary(const std::vector<SchedulerSummary>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(5) << "N" << std::setw(10) << "scheduler" << std::right << std::setw(6) << "runs"
     << std::setw(6) << "kept" << std::setw(9) << "discard" << std::setw(14) << "p99 med ms" << std::setw(14)
     << "p99 p10 ms" << std::setw(14) << "p99 p90 ms" << std::setw(14) << "mean ms" << '\n';
  for (const auto& r : rows) {
    auto cell = [](const std::optional<double>& v) {
      std::ostringstream c;
      if (!v) c << "-";
      else if (!std::isfinite(*v)) c << "inf";
      else c << std::fixed << std::setprecision(3) << *v * 1e3;
      return c.str();
    };
    std::ostringstream frac;
    frac << std::fixed << std::setprecision(1) << r.discard_fraction * 100.0 << '%';
    os << std::left << std::setw(5) << r.sta_count << std::setw(10) << r.scheduler << std::right << std::setw(6)
       << r.episodes << std::setw(6) << r.kept << std::setw(9) << frac.str() << std::setw(14)
       << cell(r.worst_p99_median) << std::setw(14) << cell(r.worst_p99_p10) << std::setw(14)
       << cell(r.worst_p99_p90) << std::setw(14) << cell(r.mean_delay) << '\n';
  }
  return os.str();
}

}  // namespace mapc
