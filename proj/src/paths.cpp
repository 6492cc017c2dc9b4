#include "mlstream/paths.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>

#include "mlstream/error.hpp"

namespace mls {

bool is_valid_path(const MultilayerStreamGraph& g, const TemporalPath& path, Tick gamma) {
  if (path.hops.empty()) throw Error(Errc::InvalidArgument, "path must have at least one hop");
  const auto links = g.links();
  for (std::size_t i = 0; i < path.hops.size(); ++i) {
    const Hop& hop = path.hops[i];
    if (i > 0) {
      const Hop& prev = path.hops[i - 1];
      if (prev.to != hop.from) return false;
      if (hop.time < prev.time + gamma) return false;
    }
    if (hop.from == hop.to) return false;
    const auto [lo, hi] = canonical_pair(hop.from, hop.to);
    auto range = std::equal_range(links.begin(), links.end(), NodeLayerPair{lo, hi},
                                  [](const auto& x, const auto& y) {
                                    auto key = [](const auto& v) {
                                      if constexpr (std::is_same_v<std::decay_t<decltype(v)>, TemporalLink>) {
                                        return NodeLayerPair{v.a, v.b};
                                      } else {
                                        return v;
                                      }
                                    };
                                    return key(x) < key(y);
                                  });
    const bool present = std::any_of(range.first, range.second,
                                     [&](const TemporalLink& l) { return l.time.contains(hop.time); });
    if (!present) return false;
  }
  return true;
}

bool reachable(const MultilayerStreamGraph& g, TimedNodeLayer from, TimedNodeLayer to, Tick gamma) {
  if (to.time < from.time) throw Error(Errc::InvalidArgument, "reachability window ends before it starts");
  if (gamma < 0) throw Error(Errc::InvalidArgument, "gamma must be non-negative");
  if (from.at == to.at) return true;

  // ready[x]: earliest instant a hop may leave x.
  std::map<NodeLayer, Tick> ready{{from.at, from.time}};
  using Entry = std::pair<Tick, NodeLayer>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  queue.emplace(from.time, from.at);
  const auto links = g.links();

  while (!queue.empty()) {
    auto [r, x] = queue.top();
    queue.pop();
    if (r > ready[x]) continue;
    const auto incident = g.incident_links(x);
    auto first = std::lower_bound(incident.begin(), incident.end(), r,
                                  [&](std::uint32_t i, Tick v) { return links[i].time.end < v; });
    for (auto it = first; it != incident.end(); ++it) {
      const TemporalLink& l = links[*it];
      const Tick hop = std::max(l.time.start, r);
      if (hop > to.time) continue;
      const NodeLayer next = l.a == x ? l.b : l.a;
      if (next == to.at) return true;
      const Tick next_ready = hop + gamma;
      if (next_ready > to.time) continue;
      auto [slot, inserted] = ready.try_emplace(next, next_ready);
      if (inserted || next_ready < slot->second) {
        slot->second = next_ready;
        queue.emplace(next_ready, next);
      }
    }
  }
  return false;
}

}  // namespace mls
