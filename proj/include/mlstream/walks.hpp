#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "mlstream/model.hpp"
#include "mlstream/paths.hpp"

namespace mls {

enum class ExposureWeighting {
  /// 1 if the walk crosses at least one link of the column, else 0.
  Indicator,
  /// Each crossed link weighs (t_max - hop time); rows normalized to sum 1.
  LinearHorizon,
};

/// Where a walker may continue after a hop.
enum class Mobility {
  /// Only links incident to the node-layer it arrived on.
  NodeLayer,
  /// Any link incident to the node it arrived at, on any layer.
  Node,
};

std::string_view to_string(ExposureWeighting w);
std::string_view to_string(Mobility m);

/// Walker dynamics: at each step pick uniformly among the incident link
/// records still usable (end >= ready, start <= t_max), wait until the link
/// starts if needed, traverse instantly, then become ready again gamma
/// later. Absorbed at dead ends, past t_max, or after max_hops.
struct WalkPolicy {
  Tick gamma = 0;
  std::size_t num_walks = 1000;
  std::uint64_t seed = 0;
  Tick t_max = 0;
  ExposureWeighting weighting = ExposureWeighting::Indicator;
  Mobility mobility = Mobility::NodeLayer;
  std::size_t max_hops = 10000;
  /// Walks are split round-robin into this many batches for spread estimates.
  std::size_t batches = 4;
};

/// Throws InvalidArgument if the policy does not fit the graph.
void check_policy(const MultilayerStreamGraph& g, const WalkPolicy& policy);

struct StartSampling {
  enum class Kind { UniformPresence, Fixed };
  Kind kind = Kind::UniformPresence;
  Tick time = 0;

  static StartSampling uniform() { return {}; }
  static StartSampling fixed(Tick t) { return {Kind::Fixed, t}; }
};

/// Columns of an exposure matrix: each layer maps to at most one column.
struct LayerGrouping {
  std::vector<std::string> names;
  std::vector<int> column_of_layer;

  std::size_t size() const noexcept { return names.size(); }

  static LayerGrouping per_layer(const MultilayerStreamGraph& g);
  /// One column per elementary layer of `aspect`. Throws MissingAspect.
  static LayerGrouping by_aspect(const MultilayerStreamGraph& g, std::string_view aspect);
};

/// Deterministic given (policy.seed, walk_index).
TemporalPath sample_walk(const MultilayerStreamGraph& g, Tick start_time, NodeId start, const WalkPolicy& policy,
                         std::uint64_t walk_index);

struct ExposureMatrix {
  std::vector<std::string> row_labels;
  std::vector<std::string> column_labels;
  Eigen::MatrixXd values;
  /// Same estimator restricted to each batch of walks.
  std::vector<Eigen::MatrixXd> batch_values;
  WalkPolicy policy;
  StartSampling starts;
};

/// Rows are nodes, columns the grouping; walks start from every node.
ExposureMatrix layer_exposure(const MultilayerStreamGraph& g, const LayerGrouping& columns,
                              const StartSampling& starts, const WalkPolicy& policy);

/// Walk-free estimator: for every node, sum (t_max - t) over incident
/// links of each column starting in [t0, t_max], rows normalized to 1.
ExposureMatrix direct_exposure(const MultilayerStreamGraph& g, const LayerGrouping& columns, Tick t0, Tick t_max);

struct CoverageReport {
  std::vector<std::string> names;
  /// Mean fraction of V touched through each column per walk.
  Eigen::VectorXd raw;
  Eigen::VectorXd normalized;
  /// Standard error of `raw`.
  Eigen::VectorXd std_error;
};

/// Walk starts: UniformPresence draws (node, time) uniformly from W;
/// Fixed uses the given instant with a uniformly drawn node.
CoverageReport layer_coverage(const MultilayerStreamGraph& g, const LayerGrouping& columns,
                              const StartSampling& starts, const WalkPolicy& policy);

void write_csv(std::ostream& os, const ExposureMatrix& x);

}  // namespace mls
