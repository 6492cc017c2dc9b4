#include "mlstream/measures.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>

#include "mlstream/csv.hpp"
#include "mlstream/detail/parallel.hpp"
#include "mlstream/error.hpp"

namespace mls {

Density Density::ratio(std::int64_t num, std::int64_t den) {
  Density d;
  d.numerator = num;
  d.denominator = den;
  if (den == 0) {
    d.flagged = true;
    return d;
  }
  d.value = static_cast<double>(num) / static_cast<double>(den);
  return d;
}

std::string_view to_string(DenominatorMode mode) {
  switch (mode) {
    case DenominatorMode::AllPairs: return "all-pairs";
    case DenominatorMode::IntralayerPairs: return "intralayer-pairs";
    case DenominatorMode::LinkedLayerPairs: return "linked-layer-pairs";
  }
  return "all-pairs";
}

DenominatorMode parse_denominator_mode(std::string_view text) {
  if (text == "all-pairs") return DenominatorMode::AllPairs;
  if (text == "intralayer-pairs") return DenominatorMode::IntralayerPairs;
  if (text == "linked-layer-pairs") return DenominatorMode::LinkedLayerPairs;
  throw Error(Errc::InvalidArgument, "unknown denominator mode '" + std::string(text) + "'");
}

double number_of_links(std::span<const TemporalLink> links, TimeInterval study) {
  if (study.length() <= 0) throw Error(Errc::ZeroStudyInterval, "|T| = 0");
  Tick total = 0;
  for (const auto& l : links) total += l.time.length();
  return static_cast<double>(total) / static_cast<double>(study.length());
}

namespace {

template <typename Pred>
DegreeReport degree_where(const MultilayerStreamGraph& g, Pred incident) {
  std::vector<TemporalLink> mine;
  for (const auto& l : g.links()) {
    if (incident(l)) mine.push_back(l);
  }
  DegreeReport r;
  r.count_degree = mine.size();
  r.duration_degree = g.study_interval().length() > 0 ? number_of_links(mine, g.study_interval()) : 0.0;
  return r;
}

}  // namespace

DegreeReport degree(const MultilayerStreamGraph& g, NodeId u) {
  if (u >= g.node_count()) throw Error(Errc::UnknownNode, std::to_string(u));
  return degree_where(g, [u](const TemporalLink& l) { return l.a.node == u || l.b.node == u; });
}

DegreeReport degree_node_layer(const MultilayerStreamGraph& g, NodeLayer x) {
  if (!g.has_node_layer(x)) g.presence(x);  // throws UnknownNodeLayer
  return degree_where(g, [x](const TemporalLink& l) { return l.a == x || l.b == x; });
}

Density density_graph(std::size_t vertices, std::size_t edges) {
  if (vertices < 2) {
    Density d;
    d.flagged = true;
    return d;
  }
  const auto n = static_cast<std::int64_t>(vertices);
  return Density::ratio(2 * static_cast<std::int64_t>(edges), n * (n - 1));
}

Density density_graph(const MultilayerGraph& m) { return density_graph(m.node_layers.size(), m.edges.size()); }

Density density_graph(const SimpleGraph& s) { return density_graph(s.nodes.size(), s.edges.size()); }

std::int64_t pairwise_copresence(std::span<const TimeSet> presence, std::span<const std::uint8_t> side) {
  const bool two_sided = !side.empty();
  struct Event {
    Tick at;
    int delta;
    std::uint8_t side;
  };
  std::vector<Event> events;
  for (std::size_t i = 0; i < presence.size(); ++i) {
    const std::uint8_t s = two_sided ? side[i] : 0;
    for (const auto& iv : presence[i].intervals()) {
      if (iv.length() == 0) continue;
      events.push_back({iv.start, +1, s});
      events.push_back({iv.end, -1, s});
    }
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.at < b.at; });

  std::int64_t count[2] = {0, 0};
  std::int64_t total = 0;
  for (std::size_t i = 0; i < events.size();) {
    const Tick at = events[i].at;
    for (; i < events.size() && events[i].at == at; ++i) count[events[i].side] += events[i].delta;
    if (i == events.size()) break;
    const Tick len = events[i].at - at;
    const std::int64_t pairs = two_sided ? count[0] * count[1] : count[0] * (count[0] - 1) / 2;
    total += pairs * len;
  }
  return total;
}

Density density_stream(const StreamGraph& s) {
  std::int64_t num = 0;
  for (const auto& [key, ts] : s.links) num += ts.measure();
  return Density::ratio(num, pairwise_copresence(s.presence));
}

Density density_stream(const BipartiteStreamGraph& s) {
  if (s.intralayer()) return density_stream(s.stream);
  std::int64_t num = 0;
  for (const auto& [key, ts] : s.stream.links) num += ts.measure();
  return Density::ratio(num, pairwise_copresence(s.stream.presence, s.side));
}

Density density_mls(const MultilayerStreamGraph& g, DenominatorMode mode) {
  std::vector<TimeSet> all;
  std::map<LayerId, std::vector<TimeSet>> by_layer;
  for (const auto& [x, ts] : g.node_layer_presence()) {
    if (mode == DenominatorMode::AllPairs) {
      all.push_back(ts);
    } else {
      by_layer[x.layer].push_back(ts);
    }
  }

  std::int64_t num = 0;
  std::set<std::pair<LayerId, LayerId>> linked_layers;
  for (const auto& [pair, ts] : g.pair_presence()) {
    if (mode == DenominatorMode::IntralayerPairs && pair.first.layer != pair.second.layer) continue;
    num += ts.measure();
    linked_layers.emplace(std::min(pair.first.layer, pair.second.layer),
                          std::max(pair.first.layer, pair.second.layer));
  }

  std::int64_t den = 0;
  switch (mode) {
    case DenominatorMode::AllPairs:
      den = pairwise_copresence(all);
      break;
    case DenominatorMode::IntralayerPairs:
      for (const auto& [layer, sets] : by_layer) den += pairwise_copresence(sets);
      break;
    case DenominatorMode::LinkedLayerPairs:
      for (const auto& [a, b] : linked_layers) {
        if (a == b) {
          den += pairwise_copresence(by_layer[a]);
          continue;
        }
        std::vector<TimeSet> both = by_layer[a];
        std::vector<std::uint8_t> side(both.size(), 0);
        for (const auto& ts : by_layer[b]) {
          both.push_back(ts);
          side.push_back(1);
        }
        den += pairwise_copresence(both, side);
      }
      break;
  }
  return Density::ratio(num, den);
}

Density interlayer_density(const MultilayerStreamGraph& g, LayerId alpha, LayerId beta) {
  return density_stream(interlayer_stream(g, alpha, beta));
}

Density group_density(const MultilayerStreamGraph& g, const std::vector<LayerId>& alpha,
                      const std::vector<LayerId>& beta) {
  return density_stream(interlayer_stream(g, alpha, beta));
}

DensityMatrix density_matrix(const MultilayerStreamGraph& g, const std::vector<LayerId>& layers) {
  std::vector<std::vector<LayerId>> groups;
  std::vector<std::string> labels;
  for (LayerId a : layers) {
    groups.push_back({a});
    labels.push_back(g.layers().name(a));
  }
  return density_matrix(g, groups, std::move(labels));
}

DensityMatrix density_matrix(const MultilayerStreamGraph& g, const std::vector<std::vector<LayerId>>& groups,
                             std::vector<std::string> labels) {
  const auto k = static_cast<Eigen::Index>(groups.size());
  if (labels.size() != groups.size()) throw Error(Errc::InvalidArgument, "one label per layer group");
  DensityMatrix m;
  m.labels = std::move(labels);
  m.values = Eigen::MatrixXd::Zero(k, k);
  m.flagged.setConstant(k, k, false);

  std::vector<std::pair<Eigen::Index, Eigen::Index>> cells;
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i; j < k; ++j) cells.emplace_back(i, j);
  }
  std::vector<Density> results(cells.size());
  detail::parallel_for(cells.size(), [&](std::size_t c) {
    results[c] = group_density(g, groups[cells[c].first], groups[cells[c].second]);
  });
  for (std::size_t c = 0; c < cells.size(); ++c) {
    auto [i, j] = cells[c];
    m.values(i, j) = m.values(j, i) = results[c].value;
    m.flagged(i, j) = m.flagged(j, i) = results[c].flagged;
  }
  return m;
}

namespace {

template <typename Cell>
void write_matrix(std::ostream& os, const DensityMatrix& m, Cell cell) {
  os << "layer";
  for (const auto& l : m.labels) os << ',' << l;
  os << '\n';
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    os << m.labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) os << ',' << cell(m.values(i, j));
    os << '\n';
  }
}

// Accepts plain decimals and exact fractions such as "1/7".
std::optional<double> parse_real(std::string_view text) {
  auto one = [](std::string_view t) -> std::optional<double> {
    t = trim(t);
    if (t.empty()) return std::nullopt;
    std::string owned(t);
    std::size_t used = 0;
    try {
      double v = std::stod(owned, &used);
      if (used != owned.size()) return std::nullopt;
      return v;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return one(text);
  auto num = one(text.substr(0, slash));
  auto den = one(text.substr(slash + 1));
  if (!num || !den || *den == 0.0) return std::nullopt;
  return *num / *den;
}

}  // namespace

void write_csv(std::ostream& os, const DensityMatrix& m) {
  write_matrix(os, m, [](double x) { return format_number(x); });
}

void write_log_csv(std::ostream& os, const DensityMatrix& m) {
  write_matrix(os, m, [](double x) { return x == 0.0 ? std::string("inf") : format_number(std::abs(std::log10(x))); });
}

DensityMatrix read_density_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(Errc::SchemaError, "empty density matrix file");
  auto header = split_csv_line(trim(line));
  if (header.size() < 2) throw Error(Errc::SchemaError, "density matrix header needs at least one layer");
  DensityMatrix m;
  m.labels.assign(header.begin() + 1, header.end());
  const auto k = static_cast<Eigen::Index>(m.labels.size());
  m.values.resize(k, k);
  m.flagged.setConstant(k, k, false);
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!std::getline(is, line)) throw Error(Errc::SchemaError, "expected " + std::to_string(k) + " matrix rows");
    auto cells = split_csv_line(trim(line));
    if (static_cast<Eigen::Index>(cells.size()) != k + 1) {
      throw Error(Errc::SchemaError, "row " + std::to_string(i + 1) + " has " + std::to_string(cells.size()) + " cells");
    }
    for (Eigen::Index j = 0; j < k; ++j) {
      const std::string& cell = cells[static_cast<std::size_t>(j + 1)];
      auto v = parse_real(trim(cell));
      if (!v) {
        throw Error(Errc::SchemaError, "cell (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") = '" +
                                           cell + "' is not a number");
      }
      m.values(i, j) = *v;
    }
  }
  return m;
}

}  // namespace mls
