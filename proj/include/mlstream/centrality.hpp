#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mlstream/eigen_solver.hpp"
#include "mlstream/measures.hpp"
#include "mlstream/walks.hpp"

namespace mls {

struct CovarianceMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd values;
};

/// Population covariance of the exposure columns, rows weighted uniformly.
/// Throws InsufficientRows below two rows.
CovarianceMatrix covariance_of_exposures(const Eigen::MatrixXd& x, std::vector<std::string> labels = {});
CovarianceMatrix covariance_of_exposures(const ExposureMatrix& x);

enum class CentralityKind { Superimposed, Juxtaposed };

struct CentralityReport {
  CentralityKind kind = CentralityKind::Juxtaposed;
  std::vector<std::string> layers;
  Eigen::VectorXd scores;
  /// Scalar centrality: the largest eigenvalue.
  double dominant_eigenvalue = 0.0;
  /// Layer indices by decreasing score; ties by layer name.
  std::vector<std::size_t> ranking;
  int iterations = 0;
  double residual = 0.0;

  /// Juxtaposed: Δ split into non-interacting blocks; scores are only
  /// comparable inside a block.
  bool reducible = false;
  std::vector<int> block_of_layer;
  /// Superimposed: covariance was the zero matrix, scores set equal.
  bool degenerate = false;
  /// Superimposed: spread of the scores across walk batches.
  Eigen::VectorXd score_sigma;
  std::string tie_break = "layer name, lexicographic";
};

/// Descending by score, ties by name.
std::vector<std::size_t> rank_layers(const Eigen::VectorXd& scores, const std::vector<std::string>& names);

/// Perron vector of a symmetric non-negative Δ. Reducible matrices are split
/// into connected blocks, each solved on its own; the concatenated vector is
/// rescaled to unit norm.
CentralityReport juxtaposed_centrality(const DensityMatrix& delta, const SolverOptions& options = {});

/// Scores are |v| for the dominant eigenvector v of the exposure covariance.
CentralityReport superimposed_centrality(const ExposureMatrix& x, const SolverOptions& options = {});
CentralityReport superimposed_centrality(const MultilayerStreamGraph& g, const LayerGrouping& columns,
                                         const StartSampling& starts, const WalkPolicy& policy,
                                         const SolverOptions& options = {});

/// layer,score,rank
void write_csv(std::ostream& os, const CentralityReport& r);
void write_json(std::ostream& os, const CentralityReport& r);

/// Average ranks (1 = largest), ties share the mean of their positions.
Eigen::VectorXd average_ranks(const Eigen::VectorXd& values);
/// Pearson correlation of the average ranks.
double spearman_rho(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace mls
