#pragma once

#include <vector>

#include "mlstream/model.hpp"

namespace mls {

struct Hop {
  Tick time = 0;
  NodeLayer from;
  NodeLayer to;

  friend bool operator==(const Hop&, const Hop&) = default;
};

/// Sequence of link traversals; each hop is instantaneous.
struct TemporalPath {
  std::vector<Hop> hops;

  bool empty() const noexcept { return hops.empty(); }
};

/// Each hop must be a link record present at its time, hops must chain on
/// node-layers, and consecutive times must satisfy t[i+1] >= t[i] + gamma.
bool is_valid_path(const MultilayerStreamGraph& g, const TemporalPath& path, Tick gamma);

struct TimedNodeLayer {
  Tick time = 0;
  NodeLayer at;
};

/// True iff a gamma-path leaves `from.at` no earlier than from.time and
/// reaches `to.at` no later than to.time. The empty path counts when the
/// endpoints coincide. Earliest-arrival search over node-layers.
bool reachable(const MultilayerStreamGraph& g, TimedNodeLayer from, TimedNodeLayer to, Tick gamma);

}  // namespace mls
