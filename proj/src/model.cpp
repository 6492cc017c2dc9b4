#include "mlstream/model.hpp"

#include <algorithm>
#include <set>

#include "mlstream/error.hpp"

namespace mls {
namespace {

std::string interval_text(TimeInterval iv) {
  return "[" + std::to_string(iv.start) + "," + std::to_string(iv.end) + "]";
}

}  // namespace

// ---------------------------------------------------------------- LayerSpace

LayerSpace::LayerSpace(std::vector<Aspect> aspects) : aspects_(std::move(aspects)) {
  for (const auto& aspect : aspects_) {
    if (aspect.elementary_layers.empty()) {
      throw Error(Errc::InvalidArgument, "aspect '" + aspect.name + "' has no elementary layers");
    }
    std::set<std::string> seen(aspect.elementary_layers.begin(), aspect.elementary_layers.end());
    if (seen.size() != aspect.elementary_layers.size()) {
      throw Error(Errc::InvalidArgument, "duplicate elementary layer in aspect '" + aspect.name + "'");
    }
  }
  strides_.assign(aspects_.size(), 1);
  layer_count_ = aspects_.empty() ? 0 : 1;
  for (std::size_t i = aspects_.size(); i-- > 0;) {
    strides_[i] = layer_count_;
    layer_count_ *= aspects_[i].elementary_layers.size();
  }
}

LayerId LayerSpace::id(const Layer& layer) const {
  if (layer.coordinates.size() != aspects_.size()) {
    throw Error(Errc::UnknownAspectCoordinate, "layer arity " + std::to_string(layer.coordinates.size()) +
                                                   " != " + std::to_string(aspects_.size()));
  }
  std::size_t id = 0;
  for (std::size_t i = 0; i < aspects_.size(); ++i) {
    if (layer.coordinates[i] >= aspects_[i].elementary_layers.size()) {
      throw Error(Errc::UnknownAspectCoordinate, "coordinate out of range for aspect '" + aspects_[i].name + "'");
    }
    id += layer.coordinates[i] * strides_[i];
  }
  return static_cast<LayerId>(id);
}

LayerId LayerSpace::id(std::span<const std::string> coordinates) const {
  if (coordinates.size() != aspects_.size()) {
    throw Error(Errc::UnknownAspectCoordinate, "expected " + std::to_string(aspects_.size()) + " coordinates");
  }
  Layer layer;
  for (std::size_t i = 0; i < aspects_.size(); ++i) {
    const auto& names = aspects_[i].elementary_layers;
    auto it = std::find(names.begin(), names.end(), coordinates[i]);
    if (it == names.end()) {
      throw Error(Errc::UnknownAspectCoordinate, "'" + coordinates[i] + "' is not in aspect '" + aspects_[i].name + "'");
    }
    layer.coordinates.push_back(static_cast<std::uint32_t>(it - names.begin()));
  }
  return id(layer);
}

LayerId LayerSpace::id(std::initializer_list<std::string_view> coordinates) const {
  std::vector<std::string> owned(coordinates.begin(), coordinates.end());
  return id(std::span<const std::string>(owned));
}

Layer LayerSpace::layer(LayerId id) const {
  if (id >= layer_count_) throw Error(Errc::UnknownLayer, std::to_string(id));
  Layer out;
  for (std::size_t i = 0; i < aspects_.size(); ++i) {
    out.coordinates.push_back(static_cast<std::uint32_t>((id / strides_[i]) % aspects_[i].elementary_layers.size()));
  }
  return out;
}

std::optional<std::size_t> LayerSpace::aspect_index(std::string_view name) const {
  for (std::size_t i = 0; i < aspects_.size(); ++i) {
    if (aspects_[i].name == name) return i;
  }
  return std::nullopt;
}

std::uint32_t LayerSpace::coordinate(LayerId id, std::size_t aspect) const {
  if (id >= layer_count_) throw Error(Errc::UnknownLayer, std::to_string(id));
  return static_cast<std::uint32_t>((id / strides_.at(aspect)) % aspects_[aspect].elementary_layers.size());
}

std::string LayerSpace::name(LayerId id) const {
  Layer l = layer(id);
  std::string out;
  for (std::size_t i = 0; i < aspects_.size(); ++i) {
    if (i) out += '|';
    out += aspects_[i].elementary_layers[l.coordinates[i]];
  }
  return out;
}

TemporalLink make_link(TimeInterval time, NodeLayer a, NodeLayer b) {
  if (a == b) throw Error(Errc::InvalidArgument, "a link needs two distinct node-layers");
  auto [lo, hi] = canonical_pair(a, b);
  return {make_interval(time.start, time.end), lo, hi};
}

// ---------------------------------------------------- MultilayerStreamGraph

MultilayerStreamGraph::MultilayerStreamGraph(GraphParts parts)
    : study_(make_interval(parts.study.start, parts.study.end)),
      resolution_(parts.resolution),
      nodes_(std::move(parts.nodes)),
      layers_(std::move(parts.aspects)) {
  for (NodeId u = 0; u < nodes_.size(); ++u) {
    if (!node_index_.emplace(nodes_[u], u).second) {
      throw Error(Errc::InvalidArgument, "duplicate node name '" + nodes_[u] + "'");
    }
  }

  layer_presence_.resize(layers_.layer_count(), TimeSet::single(study_, resolution_));
  if (parts.layer_presence.size() > layers_.layer_count()) {
    throw Error(Errc::UnknownLayer, "more layer presence entries than layers");
  }
  for (std::size_t i = 0; i < parts.layer_presence.size(); ++i) {
    const auto& ts = parts.layer_presence[i];
    layer_presence_[i] = TimeSet::normalize({ts.intervals().begin(), ts.intervals().end()}, resolution_);
  }

  node_layers_by_node_.resize(nodes_.size());
  for (auto& [x, ts] : parts.node_layer_presence) {
    if (x.node >= nodes_.size()) throw Error(Errc::UnknownNode, std::to_string(x.node));
    if (x.layer >= layers_.layer_count()) throw Error(Errc::UnknownLayer, std::to_string(x.layer));
    presence_.emplace(x, TimeSet::normalize({ts.intervals().begin(), ts.intervals().end()}, resolution_));
    node_layers_by_node_[x.node].push_back(x);
  }

  links_ = std::move(parts.links);
  for (auto& l : links_) l = make_link(l.time, l.a, l.b);
  std::sort(links_.begin(), links_.end(), [](const TemporalLink& x, const TemporalLink& y) {
    return std::tie(x.a, x.b, x.time) < std::tie(y.a, y.b, y.time);
  });

  std::map<NodeLayerPair, std::vector<TimeInterval>> by_pair;
  incident_by_node_.resize(nodes_.size());
  for (std::uint32_t i = 0; i < links_.size(); ++i) {
    const auto& l = links_[i];
    if (l.a.node >= nodes_.size() || l.b.node >= nodes_.size()) {
      throw Error(Errc::UnknownNode, "link endpoint outside V");
    }
    if (l.a.layer >= layers_.layer_count() || l.b.layer >= layers_.layer_count()) {
      throw Error(Errc::UnknownLayer, "link endpoint outside L");
    }
    by_pair[{l.a, l.b}].push_back(l.time);
    incident_by_node_layer_[l.a].push_back(i);
    incident_by_node_layer_[l.b].push_back(i);
    incident_by_node_[l.a.node].push_back(i);
    if (l.b.node != l.a.node) incident_by_node_[l.b.node].push_back(i);
  }
  for (auto& [pair, ivs] : by_pair) {
    pair_presence_.emplace(pair, TimeSet::normalize(std::move(ivs), resolution_));
  }

  auto by_end = [this](std::uint32_t x, std::uint32_t y) {
    return std::tie(links_[x].time.end, x) < std::tie(links_[y].time.end, y);
  };
  for (auto& [x, idx] : incident_by_node_layer_) std::sort(idx.begin(), idx.end(), by_end);
  for (auto& idx : incident_by_node_) std::sort(idx.begin(), idx.end(), by_end);
}

const std::string& MultilayerStreamGraph::node_name(NodeId u) const {
  if (u >= nodes_.size()) throw Error(Errc::UnknownNode, std::to_string(u));
  return nodes_[u];
}

std::optional<NodeId> MultilayerStreamGraph::find_node(std::string_view name) const {
  auto it = node_index_.find(std::string(name));
  if (it == node_index_.end()) return std::nullopt;
  return it->second;
}

NodeId MultilayerStreamGraph::node(std::string_view name) const {
  auto u = find_node(name);
  if (!u) throw Error(Errc::UnknownNode, std::string(name));
  return *u;
}

const TimeSet& MultilayerStreamGraph::layer_presence(LayerId layer) const {
  if (layer >= layer_presence_.size()) throw Error(Errc::UnknownLayer, std::to_string(layer));
  return layer_presence_[layer];
}

const TimeSet& MultilayerStreamGraph::presence(NodeLayer x) const {
  auto it = presence_.find(x);
  if (it == presence_.end()) {
    throw Error(Errc::UnknownNodeLayer, "(" + std::to_string(x.node) + "," + std::to_string(x.layer) + ")");
  }
  return it->second;
}

std::vector<NodeLayer> MultilayerStreamGraph::node_layers() const {
  std::vector<NodeLayer> out;
  out.reserve(presence_.size());
  for (const auto& [x, ts] : presence_) out.push_back(x);
  return out;
}

std::span<const NodeLayer> MultilayerStreamGraph::node_layers_of(NodeId u) const {
  if (u >= nodes_.size()) throw Error(Errc::UnknownNode, std::to_string(u));
  return node_layers_by_node_[u];
}

TimeSet MultilayerStreamGraph::node_presence(NodeId u) const {
  std::vector<TimeInterval> all;
  for (const auto& x : node_layers_of(u)) {
    auto ivs = presence_.at(x).intervals();
    all.insert(all.end(), ivs.begin(), ivs.end());
  }
  return TimeSet::normalize(std::move(all), resolution_);
}

TimeSet MultilayerStreamGraph::link_presence(NodeLayer a, NodeLayer b) const {
  if (!has_node_layer(a)) presence(a);
  if (!has_node_layer(b)) presence(b);
  auto it = pair_presence_.find(canonical_pair(a, b));
  if (it == pair_presence_.end()) return TimeSet(resolution_);
  return it->second;
}

std::span<const std::uint32_t> MultilayerStreamGraph::incident_links(NodeLayer x) const {
  auto it = incident_by_node_layer_.find(x);
  if (it == incident_by_node_layer_.end()) return {};
  return it->second;
}

std::span<const std::uint32_t> MultilayerStreamGraph::incident_links(NodeId u) const {
  if (u >= nodes_.size()) throw Error(Errc::UnknownNode, std::to_string(u));
  return incident_by_node_[u];
}

GraphParts MultilayerStreamGraph::parts() const {
  return {study_, resolution_, nodes_, layers_.aspects(), layer_presence_, presence_, links_};
}

// ----------------------------------------------------------------- validate

std::vector<Violation> validate(const MultilayerStreamGraph& g) {
  std::vector<Violation> out;
  const auto res = g.resolution();
  const TimeSet study = TimeSet::single(g.study_interval(), res);

  for (LayerId a = 0; a < g.layer_count(); ++a) {
    const auto& lp = g.layer_presence(a);
    if (!lp.is_subset_of(study)) {
      out.push_back({ViolationKind::OutsideStudyInterval, std::nullopt, std::nullopt, a, subtract(lp, study),
                     "layer " + g.layers().name(a) + " exists outside T"});
    }
  }

  for (const auto& [x, ts] : g.node_layer_presence()) {
    if (!ts.is_subset_of(study)) {
      out.push_back({ViolationKind::OutsideStudyInterval, std::nullopt, x, std::nullopt, subtract(ts, study),
                     "node-layer (" + g.node_name(x.node) + "," + g.layers().name(x.layer) + ") present outside T"});
    }
    const auto& lp = g.layer_presence(x.layer);
    if (!ts.is_subset_of(lp)) {
      out.push_back({ViolationKind::NodeLayerOutsideLayer, std::nullopt, x, x.layer, subtract(ts, lp),
                     "node-layer (" + g.node_name(x.node) + "," + g.layers().name(x.layer) +
                         ") present while its layer is absent"});
    }
  }

  for (const auto& l : g.links()) {
    auto describe = [&] {
      return "link " + interval_text(l.time) + " (" + g.node_name(l.a.node) + "," + g.layers().name(l.a.layer) +
             ")-(" + g.node_name(l.b.node) + "," + g.layers().name(l.b.layer) + ")";
    };
    const TimeSet lt = TimeSet::single(l.time, res);
    if (!g.study_interval().contains(l.time)) {
      out.push_back({ViolationKind::OutsideStudyInterval, l, std::nullopt, std::nullopt, subtract(lt, study),
                     describe() + " lies outside T"});
    }
    for (const NodeLayer& end : {l.a, l.b}) {
      if (!g.has_node_layer(end)) {
        out.push_back({ViolationKind::UnknownNodeLayer, l, end, std::nullopt, lt,
                       describe() + " has an endpoint outside V_M"});
        continue;
      }
      const auto& p = g.presence(end);
      if (!lt.is_subset_of(p)) {
        out.push_back({ViolationKind::LinkOutsideNodeLayer, l, end, std::nullopt, subtract(lt, p),
                       describe() + " exists while (" + g.node_name(end.node) + "," + g.layers().name(end.layer) +
                           ") is absent"});
      }
    }
  }
  return out;
}

// ------------------------------------------------------------- GraphBuilder

GraphBuilder::GraphBuilder(TimeInterval study, std::vector<Aspect> aspects, BuildOptions options)
    : study_(make_interval(study.start, study.end)), layers_(std::move(aspects)), options_(options) {
  layer_presence_.assign(layers_.layer_count(), TimeSet::single(study_, options_.resolution));
}

NodeId GraphBuilder::add_node(std::string_view name) {
  auto [it, inserted] = node_index_.emplace(std::string(name), static_cast<NodeId>(nodes_.size()));
  if (inserted) nodes_.emplace_back(name);
  return it->second;
}

void GraphBuilder::check_in_study(TimeInterval time, const char* what) const {
  if (!study_.contains(time)) {
    throw Error(Errc::OutOfStudyInterval, std::string(what) + " " + interval_text(time) + " not inside T=" +
                                              interval_text(study_));
  }
}

GraphBuilder& GraphBuilder::set_layer_presence(LayerId layer, TimeSet presence) {
  if (layer >= layers_.layer_count()) throw Error(Errc::UnknownLayer, std::to_string(layer));
  for (const auto& iv : presence.intervals()) check_in_study(iv, "layer presence");
  layer_presence_[layer] = TimeSet::normalize({presence.intervals().begin(), presence.intervals().end()},
                                              options_.resolution);
  return *this;
}

const TimeSet& GraphBuilder::normalized_presence(NodeLayer x) {
  auto& pending = pending_presence_[x];
  auto& cached = presence_cache_[x];
  if (!pending.empty()) {
    auto ivs = cached.intervals();
    pending.insert(pending.end(), ivs.begin(), ivs.end());
    cached = TimeSet::normalize(std::move(pending), options_.resolution);
    pending.clear();
  } else if (cached.resolution() != options_.resolution) {
    cached = TimeSet(options_.resolution);
  }
  return cached;
}

GraphBuilder& GraphBuilder::add_presence(NodeLayer x, TimeInterval time) {
  if (x.node >= nodes_.size()) throw Error(Errc::UnknownNode, std::to_string(x.node));
  if (x.layer >= layers_.layer_count()) throw Error(Errc::UnknownLayer, std::to_string(x.layer));
  time = make_interval(time.start, time.end);
  check_in_study(time, "node-layer presence");
  if (options_.mode == BuildMode::Strict &&
      !TimeSet::single(time, options_.resolution).is_subset_of(layer_presence_[x.layer])) {
    throw Error(Errc::ClosureViolation, "presence " + interval_text(time) + " of node-layer while layer " +
                                            layers_.name(x.layer) + " is absent");
  }
  pending_presence_[x].push_back(time);
  presence_cache_.try_emplace(x, TimeSet(options_.resolution));
  return *this;
}

GraphBuilder& GraphBuilder::add_link(TimeInterval time, NodeLayer a, NodeLayer b) {
  for (const auto& x : {a, b}) {
    if (x.node >= nodes_.size()) throw Error(Errc::UnknownNode, std::to_string(x.node));
    if (x.layer >= layers_.layer_count()) throw Error(Errc::UnknownLayer, std::to_string(x.layer));
  }
  TemporalLink link = make_link(time, a, b);
  check_in_study(link.time, "link");
  if (options_.intralayer_only && a.layer != b.layer) {
    throw Error(Errc::InterlayerLinkRejected, layers_.name(a.layer) + " vs " + layers_.name(b.layer));
  }

  if (options_.mode == BuildMode::Strict) {
    const TimeSet lt = TimeSet::single(link.time, options_.resolution);
    for (const auto& x : {a, b}) {
      if (!lt.is_subset_of(normalized_presence(x))) {
        throw Error(Errc::ClosureViolation, "link " + interval_text(link.time) + " exceeds presence of (" +
                                                nodes_[x.node] + "," + layers_.name(x.layer) + ")");
      }
    }
  } else {
    for (const auto& x : {a, b}) {
      pending_presence_[x].push_back(link.time);
      presence_cache_.try_emplace(x, TimeSet(options_.resolution));
      if (!TimeSet::single(link.time, options_.resolution).is_subset_of(layer_presence_[x.layer])) {
        layer_presence_[x.layer] = unite(layer_presence_[x.layer], TimeSet::single(link.time, options_.resolution));
      }
    }
  }
  links_.push_back(link);
  return *this;
}

GraphBuilder& GraphBuilder::add_link(TimeInterval time, std::string_view u, LayerId alpha, std::string_view v,
                                     LayerId beta) {
  NodeId nu = add_node(u);
  NodeId nv = add_node(v);
  return add_link(time, {nu, alpha}, {nv, beta});
}

MultilayerStreamGraph GraphBuilder::finish() && {
  GraphParts parts;
  parts.study = study_;
  parts.resolution = options_.resolution;
  parts.nodes = std::move(nodes_);
  parts.aspects = layers_.aspects();
  parts.layer_presence = std::move(layer_presence_);
  std::vector<NodeLayer> keys;
  for (const auto& [x, ts] : presence_cache_) keys.push_back(x);
  for (const auto& x : keys) parts.node_layer_presence.emplace(x, normalized_presence(x));
  parts.links = std::move(links_);

  MultilayerStreamGraph g(std::move(parts));
  auto violations = validate(g);
  if (!violations.empty()) {
    throw Error(Errc::ClosureViolation, violations.front().message + " (" + std::to_string(violations.size()) +
                                            " violation(s))");
  }
  return g;
}

}  // namespace mls
