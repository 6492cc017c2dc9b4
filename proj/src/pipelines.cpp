#include "mlstream/pipelines.hpp"

#include <algorithm>
#include <ostream>

#include "mlstream/csv.hpp"
#include "mlstream/error.hpp"
#include "mlstream/projections.hpp"

namespace mls {
namespace {

std::vector<LayerId> keep_only(std::vector<LayerId> layers, const std::vector<LayerId>& allowed) {
  if (allowed.empty()) return layers;
  std::erase_if(layers, [&](LayerId l) { return std::find(allowed.begin(), allowed.end(), l) == allowed.end(); });
  return layers;
}

Tick floor_div(Tick a, Tick b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); }

}  // namespace

std::vector<LayerId> layers_where(const MultilayerStreamGraph& g, std::string_view aspect, std::string_view value) {
  if (!g.layers().aspect_index(aspect)) {
    std::vector<LayerId> all(g.layer_count());
    for (LayerId l = 0; l < g.layer_count(); ++l) all[l] = l;
    return all;
  }
  return layers_with(g, aspect, value);
}

std::vector<WindowRow> gender_density_by_window(const MultilayerStreamGraph& g, Tick window,
                                                std::optional<Tick> origin, const std::vector<LayerId>& restrict_to) {
  if (window <= 0) throw Error(Errc::InvalidArgument, "window must be positive");
  const auto men = keep_only(layers_with(g, "gender", "M"), restrict_to);
  const auto women = keep_only(layers_with(g, "gender", "F"), restrict_to);
  auto everyone = men;
  everyone.insert(everyone.end(), women.begin(), women.end());
  std::sort(everyone.begin(), everyone.end());
  if (men.empty() || women.empty()) throw Error(Errc::MissingAspect, "no layer left for one of the genders");

  const TimeInterval t = g.study_interval();
  const Tick day = 86400 * g.resolution().ticks_per_second;
  const Tick o = origin ? *origin : floor_div(t.start, day) * day;
  // first window whose end reaches past T.start
  Tick k = floor_div(t.start - o, window);
  if (o + (k + 1) * window <= t.start && t.start != t.end) ++k;

  std::vector<WindowRow> rows;
  for (Tick s = o + k * window; s <= t.end; s += window) {
    if (s == t.end && !rows.empty()) break;  // a window touching T in one instant adds nothing
    const TimeInterval w{s, s + window};
    const auto part = restrict_to_window(g, w);
    WindowRow r;
    r.index = rows.size();
    r.window = w;
    r.intra_m = group_density(part, men, men);
    r.intra_f = group_density(part, women, women);
    r.inter_mf = group_density(part, men, women);
    r.global = group_density(part, everyone, everyone);
    rows.push_back(r);
  }
  return rows;
}

void write_csv(std::ostream& os, const std::vector<WindowRow>& rows) {
  os << "day,window_start,window_end,intra_M,intra_F,inter_MF,global,"
        "intra_M_empty,intra_F_empty,inter_MF_empty,global_empty\n";
  for (const auto& r : rows) {
    os << r.index + 1 << ',' << r.window.start << ',' << r.window.end << ',' << format_number(r.intra_m.value) << ','
       << format_number(r.intra_f.value) << ',' << format_number(r.inter_mf.value) << ','
       << format_number(r.global.value) << ',' << r.intra_m.flagged << ',' << r.intra_f.flagged << ','
       << r.inter_mf.flagged << ',' << r.global.flagged << '\n';
  }
}

DensityMatrix aspect_density_matrix(const MultilayerStreamGraph& g, std::string_view aspect,
                                    const std::vector<LayerId>& restrict_to) {
  const auto ai = g.layers().aspect_index(aspect);
  if (!ai) throw Error(Errc::MissingAspect, std::string(aspect));
  const auto& values = g.layers().aspects()[*ai].elementary_layers;
  std::vector<std::vector<LayerId>> groups;
  for (const auto& v : values) groups.push_back(keep_only(layers_with(g, aspect, v), restrict_to));
  return density_matrix(g, groups, values);
}

ExposureMatrix averaged_exposure(const MultilayerStreamGraph& g, const LayerGrouping& columns,
                                 const StartSampling& starts, const WalkPolicy& policy, std::size_t repeats) {
  if (repeats == 0) throw Error(Errc::InvalidArgument, "repeats must be at least 1");
  WalkPolicy p = policy;
  ExposureMatrix total = layer_exposure(g, columns, starts, p);
  for (std::size_t r = 1; r < repeats; ++r) {
    p.seed = policy.seed + r;
    const auto next = layer_exposure(g, columns, starts, p);
    total.values += next.values;
    for (std::size_t b = 0; b < total.batch_values.size(); ++b) total.batch_values[b] += next.batch_values[b];
  }
  const double n = static_cast<double>(repeats);
  total.values /= n;
  for (auto& b : total.batch_values) b /= n;
  total.policy = policy;
  return total;
}

RankComparison compare_coverage_and_centrality(const MultilayerStreamGraph& g, const LayerGrouping& columns,
                                               const StartSampling& starts, const WalkPolicy& policy,
                                               std::size_t repeats, const SolverOptions& solver) {
  if (columns.size() < 2) throw Error(Errc::FewerThanTwoLayers, std::to_string(columns.size()) + " column(s)");
  RankComparison out;
  out.layers = columns.names;
  out.coverage = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(columns.size()));
  WalkPolicy p = policy;
  for (std::size_t r = 0; r < repeats; ++r) {
    p.seed = policy.seed + r;
    out.coverage += layer_coverage(g, columns, starts, p).raw;
  }
  out.coverage /= static_cast<double>(repeats);
  out.report = superimposed_centrality(averaged_exposure(g, columns, starts, policy, repeats), solver);
  out.centrality = out.report.scores;
  out.coverage_rank = average_ranks(out.coverage);
  out.centrality_rank = average_ranks(out.centrality);
  out.rho = spearman_rho(out.coverage, out.centrality);
  return out;
}

void write_csv(std::ostream& os, const RankComparison& r) {
  os << "layer,coverage,coverage_rank,centrality,centrality_rank\n";
  for (std::size_t i = 0; i < r.layers.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    os << r.layers[i] << ',' << format_number(r.coverage(k)) << ',' << format_number(r.coverage_rank(k)) << ','
       << format_number(r.centrality(k)) << ',' << format_number(r.centrality_rank(k)) << '\n';
  }
}

}  // namespace mls
