#include "mapc/channel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mapc/errors.hpp"
#include "mapc/rng.hpp"

namespace mapc {

void ChannelParams::validate() const {
  if (!(breakpoint_m >= 1.0)) throw ConfigError("breakpoint distance must be >= 1 m");
  if (!(bandwidth_mhz > 0.0 && carrier_ghz > 0.0 && noise_power_w > 0.0 && tx_power_mw > 0.0)) {
    throw ConfigError("channel parameters must be positive");
  }
  if (!(shadowing_sigma_db >= 0.0)) throw ConfigError("shadowing sigma must be non-negative");
}

double path_loss_db(double d, int walls, double shadow_db, const ChannelParams& p) {
  if (!(d >= 1.0)) throw std::domain_error("path_loss_db: distance must be >= 1 m");
  double loss = 40.05 + 20.0 * std::log10(std::min(d, p.breakpoint_m) * p.carrier_ghz / 2.4);
  if (d > p.breakpoint_m) loss += 35.0 * std::log10(d / p.breakpoint_m);
  return loss + 7.0 * walls + shadow_db;
}

double to_db(double linear) { return 10.0 * std::log10(linear); }
double from_db(double db) { return std::pow(10.0, db / 10.0); }

ChannelRealization::ChannelRealization(std::size_t nodes, std::vector<double> gains,
                                       std::vector<double> shadowing_db)
    : nodes_(nodes), gains_(std::move(gains)), shadow_(std::move(shadowing_db)) {
  if (gains_.size() != nodes * nodes || shadow_.size() != nodes * nodes) {
    throw ConfigError("channel matrices must be node_count x node_count");
  }
}

ChannelRealization realize_channel(const Deployment& dep, const ChannelParams& p, std::uint64_t seed) {
  p.validate();
  const std::size_t n = dep.node_count();
  Rng rng = make_rng(seed, stream::kChannel);
  std::normal_distribution<double> shadow(0.0, 1.0);

  std::vector<double> gains(n * n, 1.0);
  std::vector<double> shadows(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double x = p.shadowing_sigma_db * shadow(rng);
      const double d = std::max(distance(dep.node_position(a), dep.node_position(b)), 1.0);
      const double loss = path_loss_db(d, dep.walls_between(a, b), x, p);
      const double h = std::min(from_db(-loss), 1.0);
      gains[a * n + b] = gains[b * n + a] = h;
      shadows[a * n + b] = shadows[b * n + a] = x;
    }
  }
  return {n, std::move(gains), std::move(shadows)};
}

double sinr(std::size_t rx, std::size_t tx, std::span<const std::size_t> interferers,
            const ChannelRealization& ch, const ChannelParams& p) {
  const double power = p.tx_power_w();
  double interference = 0.0;
  for (std::size_t k : interferers) interference += power * ch.gain(rx, k);
  return power * ch.gain(rx, tx) / (p.noise_power_w + interference);
}

bool aps_share_contention_domain(const Deployment& dep, const ChannelRealization& ch,
                                 const ChannelParams& p) {
  for (std::size_t a = 0; a < dep.ap_count(); ++a) {
    for (std::size_t b = 0; b < dep.ap_count(); ++b) {
      if (a == b) continue;
      const double rx_dbm = 10.0 * std::log10(p.tx_power_mw) + to_db(ch.gain(a, b));
      if (rx_dbm < p.cca_threshold_dbm) return false;
    }
  }
  return true;
}

void PhyParams::validate() const {
  if (subcarriers <= 0 || spatial_streams <= 0 || frame_bits <= 0) {
    throw ConfigError("PHY counts must be positive");
  }
  if (!(symbol_time_s > 0.0 && guard_interval_s > 0.0)) {
    throw ConfigError("PHY durations must be positive");
  }
  if (!(per >= 0.0 && per < 1.0)) throw ConfigError("PER must lie in [0, 1)");
}

McsTable::McsTable(std::vector<McsRow> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw ConfigError("MCS table is empty");
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const McsRow& r = rows_[k];
    if (r.index != static_cast<McsIndex>(k)) throw ConfigError("MCS indices must be 0..K-1 ascending");
    if (r.bits_per_symbol <= 0 || r.coding_rate_num <= 0 || r.coding_rate_den <= 0 ||
        r.coding_rate_num > r.coding_rate_den) {
      throw ConfigError("MCS row " + std::to_string(k) + " has an invalid constellation/code rate");
    }
    if (k > 0) {
      const McsRow& prev = rows_[k - 1];
      if (!(r.min_snr_db > prev.min_snr_db)) throw ConfigError("MCS thresholds must strictly increase");
      if (!(r.bits_per_symbol * r.coding_rate() > prev.bits_per_symbol * prev.coding_rate())) {
        throw ConfigError("MCS data rates must strictly increase");
      }
    }
  }
}

McsTable McsTable::ieee80211be() {
  // Sensitivity (dBm, 80 MHz): -76 -73 -71 -68 -64 -60 -59 -57 -52 -50 -47 -44 -41 -38.
  return McsTable({
      {0, 1, 1, 2, 0.0},    {1, 2, 1, 2, 3.0},    {2, 2, 3, 4, 5.0},    {3, 4, 1, 2, 8.0},
      {4, 4, 3, 4, 12.0},   {5, 6, 2, 3, 16.0},   {6, 6, 3, 4, 17.0},   {7, 6, 5, 6, 19.0},
      {8, 8, 3, 4, 24.0},   {9, 8, 5, 6, 26.0},   {10, 10, 3, 4, 29.0}, {11, 10, 5, 6, 32.0},
      {12, 12, 3, 4, 35.0}, {13, 12, 5, 6, 38.0},
  });
}

McsTable McsTable::from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("MCS CSV: missing header");
  auto trim = [](std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    return s;
  };
  if (trim(line) != "index,n_bps,coding_rate_num,coding_rate_den,min_snr_db") {
    throw ConfigError("MCS CSV: unexpected header '" + line + "'");
  }
  std::vector<McsRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    McsRow r;
    if (!(fields >> r.index >> r.bits_per_symbol >> r.coding_rate_num >> r.coding_rate_den >>
          r.min_snr_db)) {
      throw ConfigError("MCS CSV: malformed line " + std::to_string(lineno));
    }
    rows.push_back(r);
  }
  return McsTable(std::move(rows));
}

McsTable McsTable::from_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open MCS table '" + path + "'");
  return from_csv(in);
}

std::string McsTable::to_csv() const {
  std::ostringstream out;
  out << "index,n_bps,coding_rate_num,coding_rate_den,min_snr_db\n";
  for (const McsRow& r : rows_) {
    out << r.index << ',' << r.bits_per_symbol << ',' << r.coding_rate_num << ','
        << r.coding_rate_den << ',' << r.min_snr_db << '\n';
  }
  return out.str();
}

std::optional<McsIndex> select_mcs(double sinr_db, const McsTable& table) {
  std::optional<McsIndex> best;
  for (const McsRow& r : table.rows()) {
    if (r.min_snr_db <= sinr_db) best = r.index;
    else break;
  }
  return best;
}

double data_rate(McsIndex mcs, const McsTable& table, const PhyParams& phy) {
  const McsRow& r = table.row(mcs);
  return r.bits_per_symbol * r.coding_rate() * phy.subcarriers * phy.spatial_streams /
         (phy.symbol_time_s + phy.guard_interval_s);
}

}  // namespace mapc
