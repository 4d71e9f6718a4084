#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "mapc/channel.hpp"
#include "mapc/topology.hpp"

namespace mapc {

/// Downlink AP -> STA pair. `sta` is the STA index (not the node index).
struct Link {
  std::size_t ap = 0;
  std::size_t sta = 0;
  auto operator<=>(const Link&) const = default;
};

using ActionId = std::uint32_t;

struct GroupMember {
  Link link;
  McsIndex mcs_cosr = 0;
  double rate_cosr = 0.0;    // bits/s under intra-group interference
  McsIndex mcs_single = 0;
  double rate_single = 0.0;  // bits/s when served alone
};

/// Links admitted to transmit concurrently, ordered by AP.
struct SrGroup {
  std::vector<GroupMember> members;

  std::size_t size() const { return members.size(); }
  bool contains(std::size_t sta) const;
  std::vector<Link> links() const;
};

struct SingleLinkRate {
  McsIndex mcs = 0;
  double rate = 0.0;
};

/// Interference-free MCS/rate of a STA's serving link. Throws ScenarioError
/// when no MCS is usable.
SingleLinkRate single_tx_rate(std::size_t sta, const Deployment& dep, const ChannelRealization& ch,
                              const LinkModel& model);

/// Every nonempty choice of at most one STA per AP, each sorted by AP, in
/// lexicographic order of the (ap, sta) sequences.
std::vector<std::vector<Link>> enumerate_candidates(const Deployment& dep);

/// Applies the admission rule |M| R_cosr / R_single >= 1 for every member.
/// `single` holds the per-STA interference-free rates.
std::optional<SrGroup> admit_group(std::span<const Link> members, const Deployment& dep,
                                   const ChannelRealization& ch, const LinkModel& model,
                                   std::span<const SingleLinkRate> single);
std::optional<SrGroup> admit_group(std::span<const Link> members, const Deployment& dep,
                                   const ChannelRealization& ch, const LinkModel& model);

/// Fixed action catalog of one deployment realization. Action id z indexes groups().
class GroupCatalog {
 public:
  GroupCatalog() = default;
  GroupCatalog(std::vector<SrGroup> groups, std::size_t sta_count);

  std::size_t size() const { return groups_.size(); }
  const SrGroup& operator[](ActionId z) const { return groups_.at(z); }
  const std::vector<SrGroup>& groups() const { return groups_; }
  std::size_t sta_count() const { return by_sta_.size(); }
  /// Action ids whose group serves `sta`, ascending.
  const std::vector<ActionId>& groups_of(std::size_t sta) const { return by_sta_.at(sta); }
  /// Singleton action serving `sta`.
  ActionId singleton_of(std::size_t sta) const;

 private:
  std::vector<SrGroup> groups_;
  std::vector<std::vector<ActionId>> by_sta_;
};

GroupCatalog build_catalog(const Deployment& dep, const ChannelRealization& ch, const LinkModel& model);

nlohmann::json to_json(const GroupCatalog& catalog);

}  // namespace mapc
