#include "mlstream/walks.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "mlstream/csv.hpp"
#include "mlstream/detail/parallel.hpp"
#include "mlstream/error.hpp"

namespace mls {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent substream per (seed, walk, purpose).
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t walk, std::uint64_t purpose) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(walk * 4 + purpose)));
}

constexpr std::uint64_t kWalkStream = 0;
constexpr std::uint64_t kStartStream = 1;

struct Traversal {
  std::uint32_t link;
  Tick time;
  NodeLayer from;
  NodeLayer to;
};

std::size_t draw(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

std::vector<Traversal> run_walk(const MultilayerStreamGraph& g, Tick start_time, NodeId start,
                                const WalkPolicy& policy, std::mt19937_64& rng) {
  std::vector<Traversal> out;
  const auto links = g.links();
  Tick ready = start_time;
  bool at_node = true;  // before the first hop the walker sits on a node
  NodeLayer here{start, 0};
  std::vector<std::uint32_t> feasible;

  while (out.size() < policy.max_hops && ready <= policy.t_max) {
    const bool node_level = at_node || policy.mobility == Mobility::Node;
    const auto incident = node_level ? g.incident_links(here.node) : g.incident_links(here);
    auto first = std::lower_bound(incident.begin(), incident.end(), ready,
                                  [&](std::uint32_t i, Tick v) { return links[i].time.end < v; });
    const auto n = static_cast<std::size_t>(incident.end() - first);
    if (n == 0) break;

    std::uint32_t chosen = first[draw(rng, n)];
    if (links[chosen].time.start > policy.t_max) {
      feasible.clear();
      for (auto it = first; it != incident.end(); ++it) {
        if (links[*it].time.start <= policy.t_max) feasible.push_back(*it);
      }
      if (feasible.empty()) break;
      chosen = feasible[draw(rng, feasible.size())];
    }

    const TemporalLink& l = links[chosen];
    NodeLayer from;
    if (node_level) {
      from = l.a.node == here.node ? l.a : l.b;
    } else {
      from = here;
    }
    const NodeLayer to = l.a == from ? l.b : l.a;
    const Tick hop = std::max(l.time.start, ready);
    out.push_back({chosen, hop, from, to});
    here = to;
    at_node = false;
    ready = hop + policy.gamma;
  }
  return out;
}

Tick sample_instant(const TimeSet& presence, std::mt19937_64& rng) {
  const Tick total = presence.measure();
  const auto ivs = presence.intervals();
  if (total == 0) return ivs[draw(rng, ivs.size())].start;
  Tick offset = std::uniform_int_distribution<Tick>(0, total)(rng);
  for (const auto& iv : ivs) {
    if (offset <= iv.length()) return iv.start + offset;
    offset -= iv.length();
  }
  return ivs.back().end;
}

template <typename F>
void for_each_column(const LayerGrouping& columns, const TemporalLink& l, F f) {
  const int ca = columns.column_of_layer.at(l.a.layer);
  const int cb = columns.column_of_layer.at(l.b.layer);
  if (ca >= 0) f(static_cast<Eigen::Index>(ca));
  if (cb >= 0 && cb != ca) f(static_cast<Eigen::Index>(cb));
}

void normalize_rows(Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double s = m.row(i).sum();
    if (s > 0) m.row(i) /= s;
  }
}

}  // namespace

std::string_view to_string(ExposureWeighting w) {
  return w == ExposureWeighting::Indicator ? "indicator" : "linear-horizon";
}

std::string_view to_string(Mobility m) { return m == Mobility::NodeLayer ? "node-layer" : "node"; }

void check_policy(const MultilayerStreamGraph& g, const WalkPolicy& policy) {
  if (policy.num_walks < 1) throw Error(Errc::InvalidArgument, "num_walks must be >= 1");
  if (policy.gamma < 0) throw Error(Errc::InvalidArgument, "gamma must be >= 0");
  if (policy.t_max > g.study_interval().end) throw Error(Errc::InvalidArgument, "t_max beyond the end of T");
  if (policy.batches < 1) throw Error(Errc::InvalidArgument, "batches must be >= 1");
}

LayerGrouping LayerGrouping::per_layer(const MultilayerStreamGraph& g) {
  LayerGrouping out;
  for (LayerId l = 0; l < g.layer_count(); ++l) {
    out.names.push_back(g.layers().name(l));
    out.column_of_layer.push_back(static_cast<int>(l));
  }
  return out;
}

LayerGrouping LayerGrouping::by_aspect(const MultilayerStreamGraph& g, std::string_view aspect) {
  auto ai = g.layers().aspect_index(aspect);
  if (!ai) throw Error(Errc::MissingAspect, std::string(aspect));
  LayerGrouping out;
  out.names = g.layers().aspects()[*ai].elementary_layers;
  for (LayerId l = 0; l < g.layer_count(); ++l) {
    out.column_of_layer.push_back(static_cast<int>(g.layers().coordinate(l, *ai)));
  }
  return out;
}

TemporalPath sample_walk(const MultilayerStreamGraph& g, Tick start_time, NodeId start, const WalkPolicy& policy,
                         std::uint64_t walk_index) {
  if (start >= g.node_count()) throw Error(Errc::UnknownNode, std::to_string(start));
  auto rng = substream(policy.seed, walk_index, kWalkStream);
  TemporalPath path;
  for (const auto& t : run_walk(g, start_time, start, policy, rng)) path.hops.push_back({t.time, t.from, t.to});
  return path;
}

ExposureMatrix layer_exposure(const MultilayerStreamGraph& g, const LayerGrouping& columns,
                              const StartSampling& starts, const WalkPolicy& policy) {
  check_policy(g, policy);
  if (columns.column_of_layer.size() != g.layer_count()) {
    throw Error(Errc::InvalidArgument, "layer grouping does not match the graph");
  }
  const auto rows = static_cast<Eigen::Index>(g.node_count());
  const auto cols = static_cast<Eigen::Index>(columns.size());
  const std::size_t batches = std::min(policy.batches, policy.num_walks);

  ExposureMatrix x;
  x.row_labels = g.node_names();
  x.column_labels = columns.names;
  x.policy = policy;
  x.starts = starts;
  // Raw per-batch sums; converted to estimates below.
  std::vector<Eigen::MatrixXd> sums(batches, Eigen::MatrixXd::Zero(rows, cols));
  std::vector<std::size_t> walks_in_batch(batches, 0);
  for (std::size_t w = 0; w < policy.num_walks; ++w) ++walks_in_batch[w % batches];

  const auto links = g.links();
  detail::parallel_for(g.node_count(), [&](std::size_t u) {
    const TimeSet presence = g.node_presence(static_cast<NodeId>(u));
    if (starts.kind == StartSampling::Kind::UniformPresence && presence.empty()) return;
    Eigen::VectorXd seen(cols);
    for (std::size_t w = 0; w < policy.num_walks; ++w) {
      const std::uint64_t index = u * policy.num_walks + w;
      Tick t0 = starts.time;
      if (starts.kind == StartSampling::Kind::UniformPresence) {
        auto start_rng = substream(policy.seed, index, kStartStream);
        t0 = sample_instant(presence, start_rng);
      }
      auto rng = substream(policy.seed, index, kWalkStream);
      seen.setZero();
      for (const auto& t : run_walk(g, t0, static_cast<NodeId>(u), policy, rng)) {
        for_each_column(columns, links[t.link], [&](Eigen::Index c) {
          if (policy.weighting == ExposureWeighting::Indicator) {
            seen(c) = 1.0;
          } else {
            seen(c) += static_cast<double>(policy.t_max - t.time);
          }
        });
      }
      sums[w % batches].row(static_cast<Eigen::Index>(u)) += seen.transpose();
    }
  });

  x.values = Eigen::MatrixXd::Zero(rows, cols);
  for (std::size_t b = 0; b < batches; ++b) {
    x.values += sums[b];
    Eigen::MatrixXd est = sums[b] / static_cast<double>(walks_in_batch[b]);
    if (policy.weighting == ExposureWeighting::LinearHorizon) normalize_rows(est);
    x.batch_values.push_back(std::move(est));
  }
  x.values /= static_cast<double>(policy.num_walks);
  if (policy.weighting == ExposureWeighting::LinearHorizon) normalize_rows(x.values);
  return x;
}

ExposureMatrix direct_exposure(const MultilayerStreamGraph& g, const LayerGrouping& columns, Tick t0, Tick t_max) {
  if (columns.column_of_layer.size() != g.layer_count()) {
    throw Error(Errc::InvalidArgument, "layer grouping does not match the graph");
  }
  ExposureMatrix x;
  x.row_labels = g.node_names();
  x.column_labels = columns.names;
  x.policy.t_max = t_max;
  x.policy.weighting = ExposureWeighting::LinearHorizon;
  x.starts = StartSampling::fixed(t0);
  x.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.node_count()),
                                   static_cast<Eigen::Index>(columns.size()));
  for (const auto& l : g.links()) {
    if (l.time.start < t0 || l.time.start > t_max) continue;
    const double weight = static_cast<double>(t_max - l.time.start);
    for_each_column(columns, l, [&](Eigen::Index c) {
      x.values(l.a.node, c) += weight;
      if (l.b.node != l.a.node) x.values(l.b.node, c) += weight;
    });
  }
  normalize_rows(x.values);
  return x;
}

CoverageReport layer_coverage(const MultilayerStreamGraph& g, const LayerGrouping& columns,
                              const StartSampling& starts, const WalkPolicy& policy) {
  check_policy(g, policy);
  if (columns.column_of_layer.size() != g.layer_count()) {
    throw Error(Errc::InvalidArgument, "layer grouping does not match the graph");
  }
  const auto cols = static_cast<Eigen::Index>(columns.size());
  CoverageReport r;
  r.names = columns.names;
  r.raw = Eigen::VectorXd::Zero(cols);
  r.normalized = Eigen::VectorXd::Zero(cols);
  r.std_error = Eigen::VectorXd::Zero(cols);
  if (g.node_count() == 0) return r;

  std::vector<TimeSet> presence;
  std::vector<Tick> cumulative;  // prefix sums of |T_u| for (node, time) sampling
  Tick total = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    presence.push_back(g.node_presence(u));
    total += presence.back().measure();
    cumulative.push_back(total);
  }

  const auto links = g.links();
  const double n_nodes = static_cast<double>(g.node_count());
  Eigen::MatrixXd per_walk = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(policy.num_walks), cols);
  detail::parallel_for(policy.num_walks, [&](std::size_t w) {
    auto start_rng = substream(policy.seed, w, kStartStream);
    NodeId u = 0;
    Tick t0 = starts.time;
    if (starts.kind == StartSampling::Kind::Fixed) {
      u = static_cast<NodeId>(draw(start_rng, g.node_count()));
    } else if (total > 0) {
      const Tick pick = std::uniform_int_distribution<Tick>(0, total - 1)(start_rng);
      u = static_cast<NodeId>(std::upper_bound(cumulative.begin(), cumulative.end(), pick) - cumulative.begin());
      t0 = sample_instant(presence[u], start_rng);
    } else {
      std::vector<NodeId> present;
      for (NodeId v = 0; v < g.node_count(); ++v) {
        if (!presence[v].empty()) present.push_back(v);
      }
      if (present.empty()) return;
      u = present[draw(start_rng, present.size())];
      t0 = sample_instant(presence[u], start_rng);
    }
    auto rng = substream(policy.seed, w, kWalkStream);
    std::vector<std::vector<NodeId>> touched(static_cast<std::size_t>(cols));
    for (const auto& t : run_walk(g, t0, u, policy, rng)) {
      for_each_column(columns, links[t.link], [&](Eigen::Index c) {
        touched[static_cast<std::size_t>(c)].push_back(t.from.node);
        touched[static_cast<std::size_t>(c)].push_back(t.to.node);
      });
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      auto& nodes = touched[static_cast<std::size_t>(c)];
      std::sort(nodes.begin(), nodes.end());
      const auto distinct = std::unique(nodes.begin(), nodes.end()) - nodes.begin();
      per_walk(static_cast<Eigen::Index>(w), c) = static_cast<double>(distinct) / n_nodes;
    }
  });

  const double walks = static_cast<double>(policy.num_walks);
  r.raw = per_walk.colwise().mean().transpose();
  for (Eigen::Index c = 0; c < cols; ++c) {
    const double var = (per_walk.col(c).array() - r.raw(c)).square().sum() / walks;
    r.std_error(c) = std::sqrt(var / walks);
  }
  const double sum = r.raw.sum();
  if (sum > 0) r.normalized = r.raw / sum;
  return r;
}

void write_csv(std::ostream& os, const ExposureMatrix& x) {
  os << "node";
  for (const auto& c : x.column_labels) os << ',' << c;
  os << '\n';
  for (Eigen::Index i = 0; i < x.values.rows(); ++i) {
    os << x.row_labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < x.values.cols(); ++j) os << ',' << format_number(x.values(i, j));
    os << '\n';
  }
}

}  // namespace mls
