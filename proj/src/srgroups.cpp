#include "mapc/srgroups.hpp"

#include <algorithm>
#include <string>

#include "mapc/errors.hpp"

namespace mapc {

bool SrGroup::contains(std::size_t sta) const {
  return std::any_of(members.begin(), members.end(),
                     [sta](const GroupMember& m) { return m.link.sta == sta; });
}

std::vector<Link> SrGroup::links() const {
  std::vector<Link> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(m.link);
  return out;
}

SingleLinkRate single_tx_rate(std::size_t sta, const Deployment& dep, const ChannelRealization& ch,
                              const LinkModel& model) {
  const std::size_t ap = dep.serving_ap(sta);
  const double snr = sinr(dep.sta_node(sta), dep.ap_node(ap), {}, ch, model.channel);
  const auto mcs = select_mcs(to_db(snr), model.mcs);
  if (!mcs) {
    throw ScenarioError("STA " + std::to_string(sta) + " cannot reach its AP at any MCS (SNR " +
                        std::to_string(to_db(snr)) + " dB)");
  }
  return {*mcs, data_rate(*mcs, model.mcs, model.phy)};
}

std::vector<std::vector<Link>> enumerate_candidates(const Deployment& dep) {
  std::vector<std::vector<Link>> out;
  std::vector<Link> current;
  // Depth-first over APs; at each AP either skip it or pick one of its STAs.
  // Emitting the prefix before extending it yields lexicographic order.
  auto recurse = [&](auto&& self, std::size_t ap) -> void {
    for (std::size_t j = ap; j < dep.ap_count(); ++j) {
      for (std::size_t sta : dep.stas_of(j)) {
        current.push_back({j, sta});
        out.push_back(current);
        self(self, j + 1);
        current.pop_back();
      }
    }
  };
  recurse(recurse, 0);
  return out;
}

std::optional<SrGroup> admit_group(std::span<const Link> members, const Deployment& dep,
                                   const ChannelRealization& ch, const LinkModel& model,
                                   std::span<const SingleLinkRate> single) {
  SrGroup group;
  std::vector<std::size_t> interferers;
  const double size = static_cast<double>(members.size());
  for (const Link& link : members) {
    interferers.clear();
    for (const Link& other : members) {
      if (other.ap != link.ap) interferers.push_back(dep.ap_node(other.ap));
    }
    const double s = sinr(dep.sta_node(link.sta), dep.ap_node(link.ap), interferers, ch, model.channel);
    const auto mcs = select_mcs(to_db(s), model.mcs);
    if (!mcs) return std::nullopt;
    const double rate = data_rate(*mcs, model.mcs, model.phy);
    const SingleLinkRate& alone = single[link.sta];
    if (size * rate / alone.rate < 1.0) return std::nullopt;
    group.members.push_back({link, *mcs, rate, alone.mcs, alone.rate});
  }
  return group;
}

std::optional<SrGroup> admit_group(std::span<const Link> members, const Deployment& dep,
                                   const ChannelRealization& ch, const LinkModel& model) {
  std::vector<SingleLinkRate> single(dep.sta_count());
  for (const Link& link : members) single[link.sta] = single_tx_rate(link.sta, dep, ch, model);
  return admit_group(members, dep, ch, model, single);
}

GroupCatalog::GroupCatalog(std::vector<SrGroup> groups, std::size_t sta_count)
    : groups_(std::move(groups)), by_sta_(sta_count) {
  for (std::size_t z = 0; z < groups_.size(); ++z) {
    for (const auto& m : groups_[z].members) by_sta_.at(m.link.sta).push_back(static_cast<ActionId>(z));
  }
}

ActionId GroupCatalog::singleton_of(std::size_t sta) const {
  for (ActionId z : groups_of(sta)) {
    if (groups_[z].size() == 1) return z;
  }
  throw ScenarioError("catalog has no singleton for STA " + std::to_string(sta));
}

GroupCatalog build_catalog(const Deployment& dep, const ChannelRealization& ch, const LinkModel& model) {
  std::vector<SingleLinkRate> single;
  single.reserve(dep.sta_count());
  for (std::size_t i = 0; i < dep.sta_count(); ++i) single.push_back(single_tx_rate(i, dep, ch, model));

  std::vector<SrGroup> admitted;
  for (const auto& candidate : enumerate_candidates(dep)) {
    if (auto g = admit_group(candidate, dep, ch, model, single)) admitted.push_back(std::move(*g));
  }
  return {std::move(admitted), dep.sta_count()};
}

nlohmann::json to_json(const GroupCatalog& catalog) {
  nlohmann::json groups = nlohmann::json::array();
  for (std::size_t z = 0; z < catalog.size(); ++z) {
    nlohmann::json members = nlohmann::json::array();
    for (const auto& m : catalog[static_cast<ActionId>(z)].members) {
      members.push_back({{"ap", m.link.ap},
                         {"sta", m.link.sta},
                         {"mcs_cosr", m.mcs_cosr},
                         {"rate_cosr", m.rate_cosr},
                         {"mcs_single", m.mcs_single},
                         {"rate_single", m.rate_single}});
    }
    groups.push_back({{"id", z}, {"members", std::move(members)}});
  }
  return {{"z", catalog.size()}, {"n", catalog.sta_count()}, {"groups", std::move(groups)}};
}

}  // namespace mapc
