#include "mapc/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "mapc/errors.hpp"

namespace mapc {

using nlohmann::json;

void ExperimentSettings::validate() const {
  if (episodes < 1) throw ConfigError("experiment.episodes must be >= 1");
  if (schedulers.empty()) throw ConfigError("experiment.schedulers must not be empty");
  for (std::size_t n : sta_sweep) {
    if (n < 1) throw ConfigError("experiment.N_sweep entries must be >= 1");
  }
  if (network_load && !(network_load->mean_mbps > 0.0 && network_load->sd_mbps >= 0.0)) {
    throw ConfigError("experiment.network_load needs mean > 0 and sd >= 0");
  }
  if (!(discard_threshold_s > 0.0)) throw ConfigError("experiment.discard_threshold_ms must be positive");
}

namespace {

// Reads keys out of one JSON object and remembers which were consumed.
class Reader {
 public:
  Reader(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw ConfigError(where_ + ": expected a JSON object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!obj_.contains(key)) return;
    try {
      out = obj_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(where_ + "." + key + ": " + e.what());
    }
  }

  // Scaled numeric field: stored value = file value * scale.
  void get_scaled(const char* key, double& out, double scale) {
    seen_.insert(key);
    if (!obj_.contains(key)) return;
    double v = 0.0;
    get(key, v);
    out = v * scale;
  }

  bool has(const char* key) {
    seen_.insert(key);
    return obj_.contains(key);
  }
  const json& at(const char* key) const { return obj_.at(key); }

  void finish() const {
    for (const auto& item : obj_.items()) {
      if (!seen_.count(item.key())) throw ConfigError(where_ + ": unknown key '" + item.key() + "'");
    }
  }

 private:
  const json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

void read_range(Reader& r, const char* key, double& lo, double& hi) {
  if (!r.has(key)) return;
  const json& v = r.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(std::string(key) + ": expected [min, max]");
  }
  lo = v[0].get<double>();
  hi = v[1].get<double>();
}

McsTable mcs_from_rows(const json& rows) {
  std::vector<McsRow> out;
  for (const auto& r : rows) {
    McsRow row;
    row.index = r.at("index").get<int>();
    row.bits_per_symbol = r.at("n_bps").get<int>();
    row.coding_rate_num = r.at("coding_rate_num").get<int>();
    row.coding_rate_den = r.at("coding_rate_den").get<int>();
    row.min_snr_db = r.at("min_snr_db").get<double>();
    out.push_back(row);
  }
  return McsTable(std::move(out));
}

void read_experiment(const json& obj, ExperimentSettings& ex) {
  Reader r(obj, "experiment");
  r.get("schedulers", ex.schedulers);
  r.get("episodes", ex.episodes);
  r.get("seed", ex.seed);
  r.get("N_sweep", ex.sta_sweep);
  if (r.has("network_load") && !r.at("network_load").is_null()) {
    Reader nl(r.at("network_load"), "experiment.network_load");
    NetworkLoad load;
    nl.get("mean", load.mean_mbps);
    nl.get("sd", load.sd_mbps);
    nl.finish();
    ex.network_load = load;
  }
  r.get("apply_discard", ex.apply_discard);
  r.get_scaled("discard_threshold_ms", ex.discard_threshold_s, 1e-3);
  r.get("workers", ex.workers);
  r.finish();
}

}  // namespace

FileConfig config_from_json(const json& doc, const std::string& base_dir) {
  FileConfig cfg;
  EnvConfig& env = cfg.env;
  SimConfig& sim = env.sim;
  DeploymentConfig& dep = sim.deployment;
  ChannelParams& ch = sim.link.channel;
  PhyParams& phy = sim.link.phy;
  MacParams& mac = sim.mac;
  TrafficSettings& tr = sim.traffic;

  Reader r(doc, "config");
  r.get("J", dep.ap_count);
  r.get("N_j", dep.stas_per_ap);
  r.get("inter_ap_distance", dep.inter_ap_distance);
  read_range(r, "d_STA", dep.sta_distance_min, dep.sta_distance_max);
  if (r.has("room_layout")) {
    dep.room_layout.clear();
    for (const auto& room : r.at("room_layout")) {
      if (!room.is_array() || room.size() != 4) throw ConfigError("room_layout: rooms are [x0, y0, x1, y1]");
      dep.room_layout.push_back(Room{{room[0].get<double>(), room[1].get<double>()},
                                     {room[2].get<double>(), room[3].get<double>()}});
    }
  }
  r.get("deployment_seed", dep.rng_seed);
  r.get("fixed_deployment", sim.fixed_deployment);

  r.get("B_p", ch.breakpoint_m);
  r.get("B", ch.bandwidth_mhz);
  r.get("f_c", ch.carrier_ghz);
  r.get("sigma", ch.shadowing_sigma_db);
  r.get("W", ch.noise_power_w);
  r.get("P_max", ch.tx_power_mw);
  r.get("CCA", ch.cca_threshold_dbm);

  r.get("N_SC", phy.subcarriers);
  r.get("N_SS", phy.spatial_streams);
  r.get_scaled("T_OFDM", phy.symbol_time_s, 1e-6);
  r.get_scaled("T_GI", phy.guard_interval_s, 1e-6);
  r.get("L", phy.frame_bits);
  r.get("PER", phy.per);

  const bool has_table = r.has("mcs_table");
  const bool has_rows = r.has("mcs_rows");
  if (has_table && has_rows) throw ConfigError("config: give either mcs_table or mcs_rows, not both");
  if (has_table) {
    std::filesystem::path p = r.at("mcs_table").get<std::string>();
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    sim.link.mcs = McsTable::from_csv_file(p.string());
  }
  if (has_rows) sim.link.mcs = mcs_from_rows(r.at("mcs_rows"));

  r.get_scaled("T_max", mac.txop_max_s, 1e-3);
  r.get_scaled("T_MAPC-ICF", mac.icf_s, 1e-6);
  r.get_scaled("T_MAPC-ICR", mac.icr_s, 1e-6);
  r.get_scaled("T_MAPC-TF", mac.tf_s, 1e-6);
  r.get_scaled("T_BACK", mac.back_s, 1e-6);
  r.get_scaled("T_SIFS", mac.sifs_s, 1e-6);
  r.get_scaled("T_DIFS", mac.difs_s, 1e-6);
  r.get_scaled("T_e", mac.slot_s, 1e-6);
  r.get("CW_min", mac.cw_min);
  r.get("CW_max", mac.cw_max);

  r.get("rho_max", sim.queue_capacity);
  r.get("h_max", env.h_max);
  r.get_scaled("T_sim", sim.sim_duration_s, 1.0);

  read_range(r, "omega", tr.load_min_mbps, tr.load_max_mbps);
  r.get("bursty_probability", tr.bursty_probability);
  r.get_scaled("T_ON", tr.on_mean_s, 1e-3);
  r.get_scaled("T_OFF", tr.off_mean_s, 1e-3);

  r.get("beta", env.beta);
  r.get("nu", env.nu);
  r.get("priority_bins", env.priority_bins);

  if (r.has("experiment")) read_experiment(r.at("experiment"), cfg.experiment);
  r.finish();

  env.validate();
  cfg.experiment.validate();
  return cfg;
}

FileConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json doc = json::parse(in, nullptr, false, /*ignore_comments=*/true);
  if (doc.is_discarded()) throw ConfigError("config file " + path + " is not valid JSON");
  const auto dir = std::filesystem::path(path).parent_path();
  return config_from_json(doc, dir.empty() ? "." : dir.string());
}

namespace {

// Undo the unit scaling, trimming the representation error it introduces.
double in_units(double value, double scale) { return std::round(value / scale * 1e9) / 1e9; }

}  // namespace

json config_to_json(const FileConfig& cfg) {
  const EnvConfig& env = cfg.env;
  const SimConfig& sim = env.sim;
  const DeploymentConfig& dep = sim.deployment;
  const ChannelParams& ch = sim.link.channel;
  const PhyParams& phy = sim.link.phy;
  const MacParams& mac = sim.mac;
  const TrafficSettings& tr = sim.traffic;
  const ExperimentSettings& ex = cfg.experiment;

  json rooms = json::array();
  for (const Room& room : dep.room_layout) rooms.push_back({room.lo.x, room.lo.y, room.hi.x, room.hi.y});
  json mcs = json::array();
  for (const McsRow& row : sim.link.mcs.rows()) {
    mcs.push_back({{"index", row.index},
                   {"n_bps", row.bits_per_symbol},
                   {"coding_rate_num", row.coding_rate_num},
                   {"coding_rate_den", row.coding_rate_den},
                   {"min_snr_db", row.min_snr_db}});
  }
  json experiment = {{"schedulers", ex.schedulers},
                     {"episodes", ex.episodes},
                     {"seed", ex.seed},
                     {"N_sweep", ex.sta_sweep},
                     {"network_load", nullptr},
                     {"apply_discard", ex.apply_discard},
                     {"discard_threshold_ms", in_units(ex.discard_threshold_s, 1e-3)},
                     {"workers", ex.workers}};
  if (ex.network_load) {
    experiment["network_load"] = {{"mean", ex.network_load->mean_mbps}, {"sd", ex.network_load->sd_mbps}};
  }

  return {{"J", dep.ap_count},
          {"N_j", dep.stas_per_ap},
          {"inter_ap_distance", dep.inter_ap_distance},
          {"d_STA", {dep.sta_distance_min, dep.sta_distance_max}},
          {"room_layout", rooms},
          {"deployment_seed", dep.rng_seed},
          {"fixed_deployment", sim.fixed_deployment},
          {"B_p", ch.breakpoint_m},
          {"B", ch.bandwidth_mhz},
          {"f_c", ch.carrier_ghz},
          {"sigma", ch.shadowing_sigma_db},
          {"W", ch.noise_power_w},
          {"P_max", ch.tx_power_mw},
          {"CCA", ch.cca_threshold_dbm},
          {"N_SC", phy.subcarriers},
          {"N_SS", phy.spatial_streams},
          {"T_OFDM", in_units(phy.symbol_time_s, 1e-6)},
          {"T_GI", in_units(phy.guard_interval_s, 1e-6)},
          {"L", phy.frame_bits},
          {"PER", phy.per},
          {"mcs_rows", mcs},
          {"T_max", in_units(mac.txop_max_s, 1e-3)},
          {"T_MAPC-ICF", in_units(mac.icf_s, 1e-6)},
          {"T_MAPC-ICR", in_units(mac.icr_s, 1e-6)},
          {"T_MAPC-TF", in_units(mac.tf_s, 1e-6)},
          {"T_BACK", in_units(mac.back_s, 1e-6)},
          {"T_SIFS", in_units(mac.sifs_s, 1e-6)},
          {"T_DIFS", in_units(mac.difs_s, 1e-6)},
          {"T_e", in_units(mac.slot_s, 1e-6)},
          {"CW_min", mac.cw_min},
          {"CW_max", mac.cw_max},
          {"rho_max", sim.queue_capacity},
          {"h_max", env.h_max},
          {"T_sim", sim.sim_duration_s},
          {"omega", {tr.load_min_mbps, tr.load_max_mbps}},
          {"bursty_probability", tr.bursty_probability},
          {"T_ON", in_units(tr.on_mean_s, 1e-3)},
          {"T_OFF", in_units(tr.off_mean_s, 1e-3)},
          {"beta", env.beta},
          {"nu", env.nu},
          {"priority_bins", env.priority_bins},
          {"experiment", experiment}};
}

}  // namespace mapc
