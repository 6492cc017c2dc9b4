#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mlstream/model.hpp"
#include "mlstream/projections.hpp"

namespace mls {

/// A density kept as its exact integer ratio. `flagged` marks a defined-as-
/// zero result: empty denominator for streams, fewer than two vertices for
/// static graphs.
struct Density {
  double value = 0.0;
  std::int64_t numerator = 0;
  std::int64_t denominator = 0;
  bool flagged = false;

  static Density ratio(std::int64_t num, std::int64_t den);
};

struct DegreeReport {
  std::size_t count_degree = 0;
  double duration_degree = 0.0;
};

/// Which node-layer pairs enter the denominator (and numerator) of the
/// multilayer stream density.
enum class DenominatorMode {
  AllPairs,
  IntralayerPairs,
  LinkedLayerPairs,
};

std::string_view to_string(DenominatorMode mode);
DenominatorMode parse_denominator_mode(std::string_view text);

/// Sum of link durations divided by |T|. Throws ZeroStudyInterval if |T| = 0.
double number_of_links(std::span<const TemporalLink> links, TimeInterval study);

DegreeReport degree(const MultilayerStreamGraph& g, NodeId u);
DegreeReport degree_node_layer(const MultilayerStreamGraph& g, NodeLayer x);

Density density_graph(std::size_t vertices, std::size_t edges);
Density density_graph(const MultilayerGraph& m);
Density density_graph(const SimpleGraph& s);

Density density_stream(const StreamGraph& s);
/// Cross-side pairs only, unless the graph is intralayer.
Density density_stream(const BipartiteStreamGraph& s);

Density density_mls(const MultilayerStreamGraph& g, DenominatorMode mode = DenominatorMode::AllPairs);

Density interlayer_density(const MultilayerStreamGraph& g, LayerId alpha, LayerId beta);
Density group_density(const MultilayerStreamGraph& g, const std::vector<LayerId>& alpha,
                      const std::vector<LayerId>& beta);

/// Sum over unordered vertex pairs of |T_i ∩ T_j| by a sweep over interval
/// endpoints. With `side`, only pairs on different sides count.
std::int64_t pairwise_copresence(std::span<const TimeSet> presence, std::span<const std::uint8_t> side = {});

/// Symmetric matrix of interlayer densities between layer groups.
struct DensityMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd values;
  /// Entries whose density was defined-as-zero.
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> flagged;
};

DensityMatrix density_matrix(const MultilayerStreamGraph& g, const std::vector<LayerId>& layers);
DensityMatrix density_matrix(const MultilayerStreamGraph& g, const std::vector<std::vector<LayerId>>& groups,
                             std::vector<std::string> labels);

/// Header row and column of labels, then k x k values.
void write_csv(std::ostream& os, const DensityMatrix& m);
/// Same layout with |log10(x)|; zero entries are written as "inf".
void write_log_csv(std::ostream& os, const DensityMatrix& m);
DensityMatrix read_density_csv(std::istream& is);

}  // namespace mls
