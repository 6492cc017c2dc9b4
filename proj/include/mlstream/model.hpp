#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mlstream/time_set.hpp"

namespace mls {

using NodeId = std::uint32_t;
using LayerId = std::uint32_t;

/// One dimension of the layer structure, e.g. "gender" = {M, F}.
struct Aspect {
  std::string name;
  std::vector<std::string> elementary_layers;

  friend bool operator==(const Aspect&, const Aspect&) = default;
};

/// A layer picks one elementary layer per aspect, stored as indices in
/// aspect order.
struct Layer {
  std::vector<std::uint32_t> coordinates;

  friend auto operator<=>(const Layer&, const Layer&) = default;
};

/// Cartesian product of the aspects. Layers are addressed by a dense mixed
/// radix id, first aspect most significant.
class LayerSpace {
 public:
  LayerSpace() = default;
  explicit LayerSpace(std::vector<Aspect> aspects);

  const std::vector<Aspect>& aspects() const noexcept { return aspects_; }
  std::size_t layer_count() const noexcept { return layer_count_; }

  LayerId id(const Layer& layer) const;
  LayerId id(std::span<const std::string> coordinates) const;
  LayerId id(std::initializer_list<std::string_view> coordinates) const;
  Layer layer(LayerId id) const;

  std::optional<std::size_t> aspect_index(std::string_view name) const;
  /// Elementary coordinate of `id` along aspect `aspect`.
  std::uint32_t coordinate(LayerId id, std::size_t aspect) const;
  /// Joined with '|', e.g. "face2face|M|MP".
  std::string name(LayerId id) const;

  friend bool operator==(const LayerSpace& a, const LayerSpace& b) { return a.aspects_ == b.aspects_; }

 private:
  std::vector<Aspect> aspects_;
  std::vector<std::size_t> strides_;
  std::size_t layer_count_ = 0;
};

struct NodeLayer {
  NodeId node = 0;
  LayerId layer = 0;

  friend auto operator<=>(const NodeLayer&, const NodeLayer&) = default;
};

using NodeLayerPair = std::pair<NodeLayer, NodeLayer>;

/// Unordered pair with the smaller node-layer first.
inline NodeLayerPair canonical_pair(NodeLayer a, NodeLayer b) {
  return a < b ? NodeLayerPair{a, b} : NodeLayerPair{b, a};
}

/// One interaction. Endpoints are stored canonically (a < b).
struct TemporalLink {
  TimeInterval time;
  NodeLayer a;
  NodeLayer b;

  friend auto operator<=>(const TemporalLink&, const TemporalLink&) = default;
};

TemporalLink make_link(TimeInterval time, NodeLayer a, NodeLayer b);

/// Raw constituents of a graph, used by builders and readers.
struct GraphParts {
  TimeInterval study;
  Resolution resolution;
  std::vector<std::string> nodes;
  std::vector<Aspect> aspects;
  /// Indexed by LayerId; missing entries default to the whole study interval.
  std::vector<TimeSet> layer_presence;
  std::map<NodeLayer, TimeSet> node_layer_presence;
  std::vector<TemporalLink> links;
};

/// The multilayer stream graph (T, V, aspects, L_M, V_M, W_M, E_M).
///
/// Construction normalizes every time set, sorts the links and builds the
/// lookup indexes. It does not enforce the closure constraints: use
/// GraphBuilder (which validates on finish) or call validate() explicitly.
class MultilayerStreamGraph {
 public:
  MultilayerStreamGraph() = default;
  explicit MultilayerStreamGraph(GraphParts parts);

  TimeInterval study_interval() const noexcept { return study_; }
  Resolution resolution() const noexcept { return resolution_; }
  const LayerSpace& layers() const noexcept { return layers_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t layer_count() const noexcept { return layers_.layer_count(); }

  const std::vector<std::string>& node_names() const noexcept { return nodes_; }
  const std::string& node_name(NodeId u) const;
  std::optional<NodeId> find_node(std::string_view name) const;
  NodeId node(std::string_view name) const;

  const TimeSet& layer_presence(LayerId layer) const;
  const std::map<NodeLayer, TimeSet>& node_layer_presence() const noexcept { return presence_; }
  /// Presence of a node-layer; throws UnknownNodeLayer outside V_M.
  const TimeSet& presence(NodeLayer x) const;
  bool has_node_layer(NodeLayer x) const { return presence_.contains(x); }
  std::vector<NodeLayer> node_layers() const;
  std::span<const NodeLayer> node_layers_of(NodeId u) const;

  std::span<const TemporalLink> links() const noexcept { return links_; }

  /// T_u: union of the node's presence over all layers.
  TimeSet node_presence(NodeId u) const;
  /// Union of the times of all links between a and b, in either order.
  TimeSet link_presence(NodeLayer a, NodeLayer b) const;
  /// Every distinct linked node-layer pair with its unioned link times.
  const std::map<NodeLayerPair, TimeSet>& pair_presence() const noexcept { return pair_presence_; }

  /// Indices into links() of records incident to x, ordered by end time.
  std::span<const std::uint32_t> incident_links(NodeLayer x) const;
  /// Indices into links() of records incident to any node-layer of u, ordered by end time.
  std::span<const std::uint32_t> incident_links(NodeId u) const;

  GraphParts parts() const;

 private:
  TimeInterval study_{};
  Resolution resolution_{};
  std::vector<std::string> nodes_;
  std::unordered_map<std::string, NodeId> node_index_;
  LayerSpace layers_;
  std::vector<TimeSet> layer_presence_;
  std::map<NodeLayer, TimeSet> presence_;
  std::vector<std::vector<NodeLayer>> node_layers_by_node_;
  std::vector<TemporalLink> links_;
  std::map<NodeLayerPair, TimeSet> pair_presence_;
  std::map<NodeLayer, std::vector<std::uint32_t>> incident_by_node_layer_;
  std::vector<std::vector<std::uint32_t>> incident_by_node_;
};

enum class ViolationKind {
  LinkOutsideNodeLayer,   // closure 1
  NodeLayerOutsideLayer,  // closure 2
  OutsideStudyInterval,
  UnknownNodeLayer,
};

struct Violation {
  ViolationKind kind;
  std::optional<TemporalLink> link;
  std::optional<NodeLayer> node_layer;
  std::optional<LayerId> layer;
  /// The part of the offending set left uncovered.
  TimeSet uncovered;
  std::string message;
};

/// Empty iff both closure constraints hold and everything lies inside T.
std::vector<Violation> validate(const MultilayerStreamGraph& g);

enum class BuildMode { Strict, AutoMaterialize };

struct BuildOptions {
  BuildMode mode = BuildMode::AutoMaterialize;
  bool intralayer_only = false;
  Resolution resolution{};
};

/// Single-owner accumulator for a MultilayerStreamGraph.
///
/// In Strict mode presence must be declared before links that need it; in
/// AutoMaterialize mode node-layer and layer presence are grown to cover
/// every link so the closure constraints hold by construction.
class GraphBuilder {
 public:
  GraphBuilder(TimeInterval study, std::vector<Aspect> aspects, BuildOptions options = {});

  const LayerSpace& layers() const noexcept { return layers_; }
  TimeInterval study_interval() const noexcept { return study_; }

  NodeId add_node(std::string_view name);
  LayerId layer(std::initializer_list<std::string_view> coordinates) const { return layers_.id(coordinates); }
  LayerId layer(std::span<const std::string> coordinates) const { return layers_.id(coordinates); }

  /// Replaces the default (whole study interval) lifetime of a layer.
  GraphBuilder& set_layer_presence(LayerId layer, TimeSet presence);
  GraphBuilder& add_presence(NodeLayer x, TimeInterval time);
  GraphBuilder& add_link(TimeInterval time, NodeLayer a, NodeLayer b);
  GraphBuilder& add_link(TimeInterval time, std::string_view u, LayerId alpha,
                         std::string_view v, LayerId beta);

  std::size_t link_count() const noexcept { return links_.size(); }

  /// Normalizes, validates and hands over the graph. Throws ClosureViolation
  /// if validation fails.
  MultilayerStreamGraph finish() &&;

 private:
  void check_in_study(TimeInterval time, const char* what) const;
  const TimeSet& normalized_presence(NodeLayer x);

  TimeInterval study_;
  LayerSpace layers_;
  BuildOptions options_;
  std::vector<std::string> nodes_;
  std::unordered_map<std::string, NodeId> node_index_;
  std::vector<TimeSet> layer_presence_;
  std::map<NodeLayer, std::vector<TimeInterval>> pending_presence_;
  std::map<NodeLayer, TimeSet> presence_cache_;
  std::vector<TemporalLink> links_;
};

}  // namespace mls
