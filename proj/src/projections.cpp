#include "mlstream/projections.hpp"

#include <algorithm>

#include "mlstream/error.hpp"

namespace mls {
namespace {

bool touches(const TimeSet& a, const TimeSet& b) { return !intersect(a, b).empty(); }

TimeSet union_of_layers(const MultilayerStreamGraph& g, const std::vector<LayerId>& group) {
  TimeSet out(g.resolution());
  for (LayerId a : group) out = unite(out, g.layer_presence(a));
  return out;
}

std::vector<LayerId> sorted_unique(std::vector<LayerId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::string label(const MultilayerStreamGraph& g, NodeLayer x) {
  return g.node_name(x.node) + "|" + g.layers().name(x.layer);
}

}  // namespace

MultilayerGraph induced_multilayer(const MultilayerStreamGraph& g, const TimeSet& window) {
  MultilayerGraph m;
  m.node_count = g.node_count();
  m.layer_count = g.layer_count();
  if (window.empty()) {
    m.empty_window = true;
    return m;
  }
  for (const auto& [x, ts] : g.node_layer_presence()) {
    if (touches(ts, window)) m.node_layers.insert(x);
  }
  for (const auto& [pair, ts] : g.pair_presence()) {
    if (touches(ts, window)) m.edges.insert(pair);
  }
  return m;
}

MultilayerGraph snapshot(const MultilayerStreamGraph& g, Tick t) {
  if (!g.study_interval().contains(t)) {
    throw Error(Errc::OutOfStudyInterval, "t=" + std::to_string(t));
  }
  return induced_multilayer(g, TimeSet::single({t, t}, g.resolution()));
}

SimpleGraph collapse_to_nodes(const MultilayerGraph& m) {
  SimpleGraph s;
  for (const auto& x : m.node_layers) s.nodes.insert(x.node);
  for (const auto& [a, b] : m.edges) {
    if (a.node == b.node) continue;
    s.edges.emplace(std::min(a.node, b.node), std::max(a.node, b.node));
  }
  return s;
}

BipartiteStreamGraph interlayer_stream(const MultilayerStreamGraph& g, LayerId alpha, LayerId beta) {
  return interlayer_stream(g, std::vector<LayerId>{alpha}, std::vector<LayerId>{beta});
}

BipartiteStreamGraph interlayer_stream(const MultilayerStreamGraph& g, std::vector<LayerId> alpha,
                                       std::vector<LayerId> beta) {
  alpha = sorted_unique(std::move(alpha));
  beta = sorted_unique(std::move(beta));
  for (const auto& group : {alpha, beta}) {
    if (group.empty()) throw Error(Errc::UnknownLayer, "empty layer group");
    for (LayerId a : group) {
      if (a >= g.layer_count()) throw Error(Errc::UnknownLayer, std::to_string(a));
    }
  }
  const bool same = alpha == beta;
  if (!same) {
    std::vector<LayerId> common;
    std::set_intersection(alpha.begin(), alpha.end(), beta.begin(), beta.end(), std::back_inserter(common));
    if (!common.empty()) throw Error(Errc::InvalidArgument, "layer groups must be equal or disjoint");
  }

  std::vector<std::int8_t> side_of(g.layer_count(), -1);
  for (LayerId a : alpha) side_of[a] = 0;
  for (LayerId b : beta) side_of[b] = same ? 0 : 1;

  BipartiteStreamGraph out;
  out.alpha = alpha;
  out.beta = beta;
  const TimeSet window = same ? union_of_layers(g, alpha)
                              : intersect(union_of_layers(g, alpha), union_of_layers(g, beta));
  out.stream.study = window;

  std::map<NodeLayer, std::size_t> index;
  for (const auto& [x, ts] : g.node_layer_presence()) {
    if (side_of[x.layer] < 0) continue;
    index.emplace(x, out.vertices.size());
    out.vertices.push_back(x);
    out.side.push_back(static_cast<std::uint8_t>(side_of[x.layer]));
    out.stream.labels.push_back(label(g, x));
    out.stream.presence.push_back(intersect(ts, window));
  }

  for (const auto& [pair, ts] : g.pair_presence()) {
    const auto sa = side_of[pair.first.layer];
    const auto sb = side_of[pair.second.layer];
    if (sa < 0 || sb < 0) continue;
    if (!same && sa == sb) continue;
    auto ia = index.find(pair.first);
    auto ib = index.find(pair.second);
    if (ia == index.end() || ib == index.end()) {
      throw Error(Errc::UnknownNodeLayer, "link endpoint outside V_M");
    }
    TimeSet clipped = intersect(ts, window);
    if (clipped.empty()) continue;
    auto key = std::minmax(ia->second, ib->second);
    out.stream.links.emplace(std::pair{key.first, key.second}, std::move(clipped));
  }
  return out;
}

StreamGraph intralayer_stream(const MultilayerStreamGraph& g, LayerId alpha) {
  return interlayer_stream(g, alpha, alpha).stream;
}

StreamGraph aggregated_stream(const MultilayerStreamGraph& g) {
  StreamGraph s;
  s.study = TimeSet::single(g.study_interval(), g.resolution());
  s.labels = g.node_names();
  for (NodeId u = 0; u < g.node_count(); ++u) s.presence.push_back(g.node_presence(u));

  std::map<std::pair<std::size_t, std::size_t>, std::vector<TimeInterval>> merged;
  for (const auto& [pair, ts] : g.pair_presence()) {
    if (pair.first.node == pair.second.node) continue;
    const std::size_t a = pair.first.node;
    const std::size_t b = pair.second.node;
    auto& ivs = merged[{std::min(a, b), std::max(a, b)}];
    ivs.insert(ivs.end(), ts.intervals().begin(), ts.intervals().end());
  }
  for (auto& [key, ivs] : merged) s.links.emplace(key, TimeSet::normalize(std::move(ivs), g.resolution()));
  return s;
}

std::vector<LayerId> layers_with(const MultilayerStreamGraph& g, std::string_view aspect, std::string_view value) {
  auto ai = g.layers().aspect_index(aspect);
  if (!ai) throw Error(Errc::MissingAspect, std::string(aspect));
  const auto& names = g.layers().aspects()[*ai].elementary_layers;
  auto it = std::find(names.begin(), names.end(), value);
  if (it == names.end()) {
    throw Error(Errc::UnknownAspectCoordinate, std::string(value) + " in aspect " + std::string(aspect));
  }
  const auto coord = static_cast<std::uint32_t>(it - names.begin());
  std::vector<LayerId> out;
  for (LayerId l = 0; l < g.layer_count(); ++l) {
    if (g.layers().coordinate(l, *ai) == coord) out.push_back(l);
  }
  return out;
}

MultilayerStreamGraph restrict_to_window(const MultilayerStreamGraph& g, TimeInterval window) {
  const TimeInterval t = g.study_interval();
  const TimeInterval w{std::max(t.start, window.start), std::min(t.end, window.end)};
  if (w.end < w.start) throw Error(Errc::OutOfStudyInterval, "window does not meet the study interval");

  GraphParts parts = g.parts();
  parts.study = w;
  for (auto& lp : parts.layer_presence) lp = lp.clipped(w);
  for (auto& [x, ts] : parts.node_layer_presence) ts = ts.clipped(w);
  std::vector<TemporalLink> kept;
  for (const auto& l : parts.links) {
    const Tick s = std::max(l.time.start, w.start);
    const Tick e = std::min(l.time.end, w.end);
    if (e < s) continue;
    if (s == e && l.time.length() > 0) continue;
    kept.push_back({{s, e}, l.a, l.b});
  }
  parts.links = std::move(kept);
  return MultilayerStreamGraph(std::move(parts));
}

MultilayerStreamGraph restrict_layers(const MultilayerStreamGraph& g, const std::function<bool(LayerId)>& keep) {
  GraphParts parts = g.parts();
  std::erase_if(parts.node_layer_presence, [&](const auto& kv) { return !keep(kv.first.layer); });
  std::erase_if(parts.links, [&](const TemporalLink& l) { return !keep(l.a.layer) || !keep(l.b.layer); });
  return MultilayerStreamGraph(std::move(parts));
}

MultilayerStreamGraph as_multilayer(const StreamGraph& s, Resolution resolution) {
  GraphParts parts;
  parts.study = s.study.empty() ? TimeInterval{} : s.study.hull();
  parts.resolution = resolution;
  parts.nodes = s.labels;
  parts.aspects = {Aspect{"layer", {"all"}}};
  for (std::size_t i = 0; i < s.presence.size(); ++i) {
    parts.node_layer_presence.emplace(NodeLayer{static_cast<NodeId>(i), 0},
                                      TimeSet::normalize({s.presence[i].intervals().begin(),
                                                          s.presence[i].intervals().end()},
                                                         resolution));
  }
  for (const auto& [key, ts] : s.links) {
    for (const auto& iv : ts.intervals()) {
      parts.links.push_back(make_link(iv, {static_cast<NodeId>(key.first), 0}, {static_cast<NodeId>(key.second), 0}));
    }
  }
  return MultilayerStreamGraph(std::move(parts));
}

}  // namespace mls
