#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mapc/topology.hpp"

namespace mapc {

struct ChannelParams {
  double breakpoint_m = 10.0;
  double bandwidth_mhz = 80.0;
  double carrier_ghz = 6.0;
  double shadowing_sigma_db = 5.0;
  double noise_power_w = 3.2e-13;
  double tx_power_mw = 200.0;
  double cca_threshold_dbm = -82.0;

  double tx_power_w() const { return tx_power_mw * 1e-3; }
  void validate() const;
};

/// TGax enterprise path loss in dB. Throws std::domain_error for d < 1 m.
double path_loss_db(double d, int walls, double shadow_db, const ChannelParams& p);

/// 10 log10(linear).
double to_db(double linear);
/// Linear power ratio of a dB value.
double from_db(double db);

/// Frozen per-episode channel: one shadowing draw per unordered node pair,
/// shared by both directions.
class ChannelRealization {
 public:
  ChannelRealization() = default;
  ChannelRealization(std::size_t nodes, std::vector<double> gains, std::vector<double> shadowing_db);

  std::size_t node_count() const { return nodes_; }
  /// Linear gain seen at receiver `rx` from transmitter `tx`.
  double gain(std::size_t rx, std::size_t tx) const { return gains_.at(rx * nodes_ + tx); }
  double shadowing_db(std::size_t a, std::size_t b) const { return shadow_.at(a * nodes_ + b); }

  bool operator==(const ChannelRealization&) const = default;

 private:
  std::size_t nodes_ = 0;
  std::vector<double> gains_;
  std::vector<double> shadow_;
};

/// Node pairs closer than 1 m (only possible between STAs) are evaluated at 1 m.
ChannelRealization realize_channel(const Deployment& dep, const ChannelParams& p, std::uint64_t seed);

/// SINR (linear) at `rx` for the transmission from `tx` with every node in
/// `interferers` transmitting concurrently. All transmitters use P_max.
double sinr(std::size_t rx, std::size_t tx, std::span<const std::size_t> interferers,
            const ChannelRealization& ch, const ChannelParams& p);

/// True if every AP pair decodes each other above the CCA threshold, i.e. all
/// APs share one contention domain.
bool aps_share_contention_domain(const Deployment& dep, const ChannelRealization& ch,
                                 const ChannelParams& p);

using McsIndex = int;

struct McsRow {
  McsIndex index = 0;
  int bits_per_symbol = 1;
  int coding_rate_num = 1;
  int coding_rate_den = 2;
  double min_snr_db = 0.0;

  double coding_rate() const { return static_cast<double>(coding_rate_num) / coding_rate_den; }
};

struct PhyParams {
  int subcarriers = 980;
  int spatial_streams = 2;
  double symbol_time_s = 12.8e-6;
  double guard_interval_s = 0.8e-6;
  int frame_bits = 12000;
  // Frame error rate at the selected MCS; the threshold table guarantees
  // PER < 1e-2, so the operating point is PER = 1e-2.
  double per = 1e-2;

  void validate() const;
};

class McsTable {
 public:
  McsTable() = default;
  /// Throws ConfigError unless indices are 0..K-1, thresholds strictly
  /// increase and N_bps * R_c strictly increases.
  explicit McsTable(std::vector<McsRow> rows);

  /// IEEE 802.11be MCS 0-13 with replaceable SNR thresholds: the minimum
  /// receiver sensitivity steps for 80 MHz, shifted so MCS 0 requires 0 dB.
  static McsTable ieee80211be();
  /// CSV `index,n_bps,coding_rate_num,coding_rate_den,min_snr_db` with header.
  static McsTable from_csv(std::istream& in);
  static McsTable from_csv_file(const std::string& path);

  const std::vector<McsRow>& rows() const { return rows_; }
  const McsRow& row(McsIndex i) const { return rows_.at(static_cast<std::size_t>(i)); }
  std::size_t size() const { return rows_.size(); }
  McsIndex top() const { return static_cast<McsIndex>(rows_.size()) - 1; }

  std::string to_csv() const;

 private:
  std::vector<McsRow> rows_;
};

/// Highest MCS whose threshold is <= sinr_db (inclusive); nullopt if none.
std::optional<McsIndex> select_mcs(double sinr_db, const McsTable& table);

/// N_bps R_c N_sc N_ss / (T_OFDM + T_GI), in bits per second.
double data_rate(McsIndex mcs, const McsTable& table, const PhyParams& phy);

/// Everything needed to turn a channel realization into link rates.
struct LinkModel {
  ChannelParams channel;
  PhyParams phy;
  McsTable mcs = McsTable::ieee80211be();
};

}  // namespace mapc
