#pragma once

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "mlstream/error.hpp"

namespace mls {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct EigenPair {
  Scalar value{};
  DenseVector<Scalar> vector;
  int iterations = 0;
  /// ||M v - lambda v||_2 at the returned pair.
  Scalar residual{};
};

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 100000;
};

/// Power iteration gave up; carries the last iterate.
class NotConverged : public Error {
 public:
  NotConverged(int iterations, double value, Eigen::VectorXd vector, double residual)
      : Error(Errc::NotConverged, "no convergence after " + std::to_string(iterations) +
                                      " iterations (residual " + std::to_string(residual) + ")"),
        value_(value),
        vector_(std::move(vector)),
        residual_(residual) {}

  double value() const noexcept { return value_; }
  const Eigen::VectorXd& vector() const noexcept { return vector_; }
  double residual() const noexcept { return residual_; }

 private:
  double value_;
  Eigen::VectorXd vector_;
  double residual_;
};

/// Flips v so its largest-magnitude entry (first one on ties) is positive.
template <typename Derived>
void normalize_sign(Eigen::MatrixBase<Derived>& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(best))) best = i;
  }
  if (v.size() > 0 && v(best) < 0) v = -v;
}

namespace detail {

template <typename Scalar>
void check_square_symmetric(const DenseMatrix<Scalar>& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(Errc::InvalidArgument, "matrix must be square and non-empty");
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - m(j, i)) > Scalar(1e-12)) {
        throw Error(Errc::NonSymmetric, "entries (" + std::to_string(i) + "," + std::to_string(j) + ") differ");
      }
    }
  }
}

/// Power iteration on (M + shift I). Convergence requires both successive
/// Rayleigh quotients within tol and residual ||Mv - lambda v|| <= tol.
template <typename Scalar>
EigenPair<Scalar> power_iteration(const DenseMatrix<Scalar>& m, DenseVector<Scalar> v, Scalar shift,
                                  const SolverOptions& options) {
  const Scalar tol = static_cast<Scalar>(options.tol);
  v.normalize();
  DenseVector<Scalar> mv = m * v;
  Scalar lambda = v.dot(mv);
  Scalar residual = (mv - lambda * v).norm();
  if (residual <= tol) return {lambda, v, 0, residual};

  for (int it = 1; it <= options.max_iter; ++it) {
    DenseVector<Scalar> next = mv + shift * v;
    const Scalar norm = next.norm();
    if (norm == Scalar(0)) {
      // v lies in the kernel of M + shift I; only possible for the zero matrix
      return {Scalar(0), v, it, mv.norm()};
    }
    v = next / norm;
    mv = m * v;
    const Scalar previous = lambda;
    lambda = v.dot(mv);
    residual = (mv - lambda * v).norm();
    if (std::abs(lambda - previous) < tol && residual <= tol) return {lambda, v, it, residual};
  }
  throw NotConverged(options.max_iter, static_cast<double>(lambda), v.template cast<double>(),
                     static_cast<double>(residual));
}

}  // namespace detail

/// Dominant eigenpair of a symmetric non-negative matrix.
///
/// Power iteration from the all-ones vector, applied to M + s I with s half
/// the largest row sum. For a non-negative matrix the Perron root rho is the
/// largest eigenvalue and every eigenvalue lies in [-rho, rho]; the shift
/// makes rho strictly dominant in magnitude even when -rho is also an
/// eigenvalue (bipartite patterns such as [[0,1],[1,0]]).
template <typename Scalar>
EigenPair<Scalar> dominant_eigenpair(const DenseMatrix<Scalar>& m, const SolverOptions& options = {}) {
  detail::check_square_symmetric(m);
  if ((m.array() < Scalar(0)).any()) throw Error(Errc::NegativeEntry, "matrix has a negative entry");
  const Scalar shift = m.rowwise().sum().maxCoeff() / Scalar(2);
  auto pair = detail::power_iteration<Scalar>(m, DenseVector<Scalar>::Ones(m.rows()), shift, options);
  normalize_sign(pair.vector);
  return pair;
}

/// Dominant eigenpair of a symmetric positive semi-definite matrix such as a
/// covariance. No shift is needed (the spectrum is non-negative). The start
/// vector carries an index ramp because row-normalized data puts the
/// all-ones vector in the kernel of its covariance.
template <typename Scalar>
EigenPair<Scalar> dominant_eigenpair_psd(const DenseMatrix<Scalar>& m, const SolverOptions& options = {}) {
  detail::check_square_symmetric(m);
  const Eigen::Index n = m.rows();
  DenseVector<Scalar> start(n);
  for (Eigen::Index i = 0; i < n; ++i) start(i) = Scalar(1) + Scalar(i + 1) / Scalar(n + 1);
  auto pair = detail::power_iteration<Scalar>(m, start, Scalar(0), options);
  normalize_sign(pair.vector);
  return pair;
}

}  // namespace mls
