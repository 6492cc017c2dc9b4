#include "mlstream/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "json.hpp"
#include "mlstream/csv.hpp"
#include "mlstream/error.hpp"

namespace mls {

CovarianceMatrix covariance_of_exposures(const Eigen::MatrixXd& x, std::vector<std::string> labels) {
  if (x.rows() < 2) throw Error(Errc::InsufficientRows, std::to_string(x.rows()) + " row(s)");
  if (labels.empty()) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) labels.push_back(std::to_string(j));
  }
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  CovarianceMatrix c;
  c.labels = std::move(labels);
  c.values = (centered.transpose() * centered) / static_cast<double>(x.rows());
  // Exact symmetry for the solver's check.
  c.values = (0.5 * (c.values + c.values.transpose())).eval();
  return c;
}

CovarianceMatrix covariance_of_exposures(const ExposureMatrix& x) {
  return covariance_of_exposures(x.values, x.column_labels);
}

std::vector<std::size_t> rank_layers(const Eigen::VectorXd& scores, const std::vector<std::string>& names) {
  std::vector<std::size_t> order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double sa = scores(static_cast<Eigen::Index>(a));
    const double sb = scores(static_cast<Eigen::Index>(b));
    if (sa != sb) return sa > sb;
    return names[a] < names[b];
  });
  return order;
}

namespace {

void check_delta(const Eigen::MatrixXd& m) {
  detail::check_square_symmetric<double>(m);
  if ((m.array() < 0.0).any()) throw Error(Errc::NegativeEntry, "density matrix has a negative entry");
  if ((m.array() == 0.0).all()) throw Error(Errc::ZeroMatrix, "density matrix is zero");
}

// Connected components of the graph with an edge wherever Δ(i,j) > 0.
std::vector<int> blocks_of(const Eigen::MatrixXd& m) {
  const Eigen::Index k = m.rows();
  std::vector<int> block(static_cast<std::size_t>(k), -1);
  int next = 0;
  for (Eigen::Index s = 0; s < k; ++s) {
    if (block[static_cast<std::size_t>(s)] >= 0) continue;
    std::vector<Eigen::Index> stack{s};
    block[static_cast<std::size_t>(s)] = next;
    while (!stack.empty()) {
      const Eigen::Index i = stack.back();
      stack.pop_back();
      for (Eigen::Index j = 0; j < k; ++j) {
        if (j != i && m(i, j) > 0.0 && block[static_cast<std::size_t>(j)] < 0) {
          block[static_cast<std::size_t>(j)] = next;
          stack.push_back(j);
        }
      }
    }
    ++next;
  }
  return block;
}

struct ScoredPair {
  double value;
  Eigen::VectorXd scores;
  int iterations;
  double residual;
};

ScoredPair covariance_scores(const Eigen::MatrixXd& sigma, const SolverOptions& options, bool& degenerate) {
  const auto k = sigma.rows();
  if (sigma.cwiseAbs().maxCoeff() == 0.0) {
    degenerate = true;
    return {0.0, Eigen::VectorXd::Constant(k, 1.0 / std::sqrt(static_cast<double>(k))), 0, 0.0};
  }
  auto pair = dominant_eigenpair_psd<double>(sigma, options);
  return {pair.value, pair.vector.cwiseAbs(), pair.iterations, pair.residual};
}

}  // namespace

CentralityReport juxtaposed_centrality(const DensityMatrix& delta, const SolverOptions& options) {
  const Eigen::MatrixXd& m = delta.values;
  check_delta(m);
  if (delta.labels.size() != static_cast<std::size_t>(m.rows())) {
    throw Error(Errc::InvalidArgument, "one label per density matrix row");
  }

  CentralityReport r;
  r.kind = CentralityKind::Juxtaposed;
  r.layers = delta.labels;
  r.block_of_layer = blocks_of(m);
  const int n_blocks = *std::max_element(r.block_of_layer.begin(), r.block_of_layer.end()) + 1;
  r.reducible = n_blocks > 1;
  r.scores = Eigen::VectorXd::Zero(m.rows());
  r.dominant_eigenvalue = -std::numeric_limits<double>::infinity();

  for (int b = 0; b < n_blocks; ++b) {
    std::vector<Eigen::Index> members;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (r.block_of_layer[static_cast<std::size_t>(i)] == b) members.push_back(i);
    }
    const auto size = static_cast<Eigen::Index>(members.size());
    Eigen::MatrixXd sub(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
      for (Eigen::Index j = 0; j < size; ++j) sub(i, j) = m(members[static_cast<std::size_t>(i)], members[static_cast<std::size_t>(j)]);
    }
    auto pair = dominant_eigenpair<double>(sub, options);
    for (Eigen::Index i = 0; i < size; ++i) r.scores(members[static_cast<std::size_t>(i)]) = std::abs(pair.vector(i));
    r.dominant_eigenvalue = std::max(r.dominant_eigenvalue, pair.value);
    r.iterations += pair.iterations;
    r.residual = std::max(r.residual, pair.residual);
  }
  if (r.reducible) r.scores /= std::sqrt(static_cast<double>(n_blocks));
  r.ranking = rank_layers(r.scores, r.layers);
  return r;
}

CentralityReport superimposed_centrality(const ExposureMatrix& x, const SolverOptions& options) {
  if (x.values.cols() < 2) throw Error(Errc::FewerThanTwoLayers, std::to_string(x.values.cols()) + " column(s)");
  CentralityReport r;
  r.kind = CentralityKind::Superimposed;
  r.layers = x.column_labels;

  const auto sigma = covariance_of_exposures(x);
  auto main = covariance_scores(sigma.values, options, r.degenerate);
  r.scores = main.scores;
  r.dominant_eigenvalue = main.value;
  r.iterations = main.iterations;
  r.residual = main.residual;
  r.ranking = rank_layers(r.scores, r.layers);

  r.score_sigma = Eigen::VectorXd::Zero(x.values.cols());
  if (x.batch_values.size() >= 2) {
    Eigen::MatrixXd per_batch(static_cast<Eigen::Index>(x.batch_values.size()), x.values.cols());
    for (std::size_t b = 0; b < x.batch_values.size(); ++b) {
      bool ignored = false;
      auto batch = covariance_scores(covariance_of_exposures(x.batch_values[b]).values, options, ignored);
      per_batch.row(static_cast<Eigen::Index>(b)) = batch.scores.transpose();
    }
    const Eigen::RowVectorXd mean = per_batch.colwise().mean();
    const double dof = static_cast<double>(per_batch.rows() - 1);
    r.score_sigma = ((per_batch.rowwise() - mean).array().square().colwise().sum() / dof).sqrt().transpose();
  }
  return r;
}

CentralityReport superimposed_centrality(const MultilayerStreamGraph& g, const LayerGrouping& columns,
                                         const StartSampling& starts, const WalkPolicy& policy,
                                         const SolverOptions& options) {
  if (columns.size() < 2) throw Error(Errc::FewerThanTwoLayers, std::to_string(columns.size()) + " column(s)");
  return superimposed_centrality(layer_exposure(g, columns, starts, policy), options);
}

void write_csv(std::ostream& os, const CentralityReport& r) {
  std::vector<std::size_t> rank_of(r.layers.size());
  for (std::size_t pos = 0; pos < r.ranking.size(); ++pos) rank_of[r.ranking[pos]] = pos + 1;
  os << "layer,score,rank\n";
  for (std::size_t i = 0; i < r.layers.size(); ++i) {
    os << r.layers[i] << ',' << format_number(r.scores(static_cast<Eigen::Index>(i))) << ',' << rank_of[i] << '\n';
  }
}

void write_json(std::ostream& os, const CentralityReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["kind"] = r.kind == CentralityKind::Superimposed ? "superimposed" : "juxtaposed";
  j["dominant_eigenvalue"] = format_number(r.dominant_eigenvalue);
  ordered_json layers = ordered_json::array();
  std::vector<std::size_t> rank_of(r.layers.size());
  for (std::size_t pos = 0; pos < r.ranking.size(); ++pos) rank_of[r.ranking[pos]] = pos + 1;
  for (std::size_t i = 0; i < r.layers.size(); ++i) {
    ordered_json l;
    l["layer"] = r.layers[i];
    l["score"] = format_number(r.scores(static_cast<Eigen::Index>(i)));
    l["rank"] = rank_of[i];
    if (!r.block_of_layer.empty()) l["block"] = r.block_of_layer[i];
    if (r.score_sigma.size() == r.scores.size()) l["sigma"] = format_number(r.score_sigma(static_cast<Eigen::Index>(i)));
    layers.push_back(std::move(l));
  }
  j["layers"] = std::move(layers);
  ordered_json ranking = ordered_json::array();
  for (auto i : r.ranking) ranking.push_back(r.layers[i]);
  j["ranking"] = std::move(ranking);
  j["tie_break"] = r.tie_break;
  j["reducible"] = r.reducible;
  j["degenerate"] = r.degenerate;
  j["solver"] = {{"iterations", r.iterations}, {"residual", format_number(r.residual)}};
  os << j.dump(2) << '\n';
}

Eigen::VectorXd average_ranks(const Eigen::VectorXd& values) {
  const auto n = values.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values(a) > values(b); });
  Eigen::VectorXd ranks(n);
  for (Eigen::Index i = 0; i < n;) {
    Eigen::Index j = i;
    while (j + 1 < n && values(order[static_cast<std::size_t>(j + 1)]) == values(order[static_cast<std::size_t>(i)])) ++j;
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Eigen::Index p = i; p <= j; ++p) ranks(order[static_cast<std::size_t>(p)]) = shared;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw Error(Errc::InvalidArgument, "rank vectors differ in length");
  if (a.size() < 2) throw Error(Errc::FewerThanTwoLayers, std::to_string(a.size()) + " layer(s)");
  const Eigen::VectorXd ra = average_ranks(a);
  const Eigen::VectorXd rb = average_ranks(b);
  const Eigen::VectorXd da = ra.array() - ra.mean();
  const Eigen::VectorXd db = rb.array() - rb.mean();
  const double denom = std::sqrt(da.squaredNorm() * db.squaredNorm());
  if (denom == 0.0) return 0.0;
  return da.dot(db) / denom;
}

}  // namespace mls
