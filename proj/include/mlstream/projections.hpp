#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mlstream/model.hpp"
#include "mlstream/time_set.hpp"

namespace mls {

/// Static multilayer graph (V_M, E_M, V, L).
struct MultilayerGraph {
  std::size_t node_count = 0;
  std::size_t layer_count = 0;
  std::set<NodeLayer> node_layers;
  std::set<NodeLayerPair> edges;
  /// Set when the inducing window was empty.
  bool empty_window = false;
};

/// Plain graph (V, E) on node ids.
struct SimpleGraph {
  std::set<NodeId> nodes;
  std::set<std::pair<NodeId, NodeId>> edges;
};

/// Stream graph (T, W, V, E). Vertices are indexed 0..n-1 with labels.
struct StreamGraph {
  TimeSet study;
  std::vector<std::string> labels;
  std::vector<TimeSet> presence;
  /// Keyed by (i, j) with i < j.
  std::map<std::pair<std::size_t, std::size_t>, TimeSet> links;
};

/// Interlayer stream graph between two groups of layers. Every vertex is a
/// node-layer; side[i] is 0 for the first group and 1 for the second. When
/// both groups are the same the graph is an intralayer stream graph and
/// every side is 0.
struct BipartiteStreamGraph {
  StreamGraph stream;
  std::vector<NodeLayer> vertices;
  std::vector<std::uint8_t> side;
  std::vector<LayerId> alpha;
  std::vector<LayerId> beta;

  bool intralayer() const noexcept { return alpha == beta; }
};

MultilayerGraph induced_multilayer(const MultilayerStreamGraph& g, const TimeSet& window);
/// Multilayer graph at instant t; throws OutOfStudyInterval when t is not in T.
MultilayerGraph snapshot(const MultilayerStreamGraph& g, Tick t);
/// Drops layers: node u ~ v iff some node-layers of u and v are linked.
SimpleGraph collapse_to_nodes(const MultilayerGraph& m);

BipartiteStreamGraph interlayer_stream(const MultilayerStreamGraph& g, LayerId alpha, LayerId beta);
/// Group form: groups must be equal (after sorting) or disjoint.
BipartiteStreamGraph interlayer_stream(const MultilayerStreamGraph& g, std::vector<LayerId> alpha,
                                       std::vector<LayerId> beta);
StreamGraph intralayer_stream(const MultilayerStreamGraph& g, LayerId alpha);
StreamGraph aggregated_stream(const MultilayerStreamGraph& g);

/// Layers whose coordinate along `aspect` equals `value`. Throws
/// MissingAspect / UnknownAspectCoordinate.
std::vector<LayerId> layers_with(const MultilayerStreamGraph& g, std::string_view aspect, std::string_view value);

/// Clips every time set and link to `window` (also the new study interval).
/// Links that only touch the window at a boundary instant are dropped.
MultilayerStreamGraph restrict_to_window(const MultilayerStreamGraph& g, TimeInterval window);
/// Keeps only node-layers, presence and links whose layers satisfy `keep`.
MultilayerStreamGraph restrict_layers(const MultilayerStreamGraph& g, const std::function<bool(LayerId)>& keep);

/// Wraps a stream graph as a one-layer multilayer stream graph so it can go
/// through the interchange writer.
MultilayerStreamGraph as_multilayer(const StreamGraph& s, Resolution resolution = {});

}  // namespace mls
