#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "spinit/signals.hpp"

namespace spinit {

/// lambda = sqrt(pi/2) * mean(y); a consistent estimate of ||x||_2 in the noiseless model.
struct NormEstimate {
  double lambda;
};

NormEstimate estimate_norm(const Vector& y);

/// Amplitude window (l, u) in units of lambda. `u` may be +infinity.
class TruncationBand {
 public:
  TruncationBand(double l, double u);

  static TruncationBand standard() { return {1.0, 5.0}; }
  static TruncationBand unbounded() {
    return {std::numeric_limits<double>::min(), std::numeric_limits<double>::infinity()};
  }

  double l() const { return l_; }
  double u() const { return u_; }

  /// Strict window test l*lambda < y < u*lambda.
  bool admits(double y, double lambda) const { return l_ * lambda < y && y < u_ * lambda; }

 private:
  double l_;
  double u_;
};

enum class Representation { automatic, dense, matrix_free };

/// Symmetric operator V = sum_i w_i a_i a_i^T over a sensing matrix, or an
/// explicit symmetric matrix. The dense form is materialized once; the
/// matrix-free form applies A^T diag(w) A on the rows with nonzero weight.
class SpectralOperator {
 public:
  /// Wraps an explicit symmetric matrix (used for baselines and tests).
  static SpectralOperator from_dense(Matrix symmetric);

  /// Weighted outer-product sum. Rows with zero weight are dropped.
  static SpectralOperator from_weights(MatrixHandle A, Vector weights, Representation rep);

  Index dim() const { return n_; }
  Representation representation() const { return rep_; }
  Index active_count() const { return static_cast<Index>(active_.size()); }
  const Vector& weights() const { return weights_; }
  const std::vector<Index>& active_rows() const { return active_; }
  bool is_zero() const;

  Vector apply(const Vector& w) const;
  double quadratic_form(const Vector& w) const;
  Vector diagonal() const;
  Vector column(Index j) const;
  Matrix principal_submatrix(std::span<const Index> idx) const;
  Matrix to_dense() const;

  /// Same operator multiplied by c (exact for powers of two).
  SpectralOperator scaled(double c) const;

 private:
  SpectralOperator() = default;

  Index n_ = 0;
  Representation rep_ = Representation::dense;
  MatrixHandle matrix_;
  Vector weights_;
  std::vector<Index> active_;
  RowMatrix active_rows_;  // gathered rows with nonzero weight (matrix-free path)
  Vector active_weights_;
  Matrix dense_;
};

/// Operator paired with the lambda used to truncate it.
struct WeightedOperator {
  SpectralOperator op;
  double lambda;
};

/// V = (1/m) sum_i y_i a_i a_i^T 1{l*lambda < y_i < u*lambda}.
WeightedOperator build_truncated_operator(const MatrixHandle& A, const Vector& y, const TruncationBand& band,
                                          Representation rep = Representation::automatic);

/// V~ = (1/m) sum_i y_i a_i a_i^T; negative y_i keep their sign.
WeightedOperator build_untruncated_operator(const MatrixHandle& A, const Vector& y,
                                            Representation rep = Representation::automatic);

inline Vector apply(const SpectralOperator& op, const Vector& w) { return op.apply(w); }
inline double quadratic_form(const SpectralOperator& op, const Vector& w) { return op.quadratic_form(w); }

/// Gaussian truncated moments over l < |g| < u:
///   gamma0 = E[|g| 1], beta0 = E[|g|^3 1] - gamma0,
///   gamma_check = E[1], beta_check = E[g^2 1] - gamma_check.
/// E[V] = ||x|| (gamma0 I + beta0 xbar xbar^T) in the noiseless model.
struct PopulationCoefficients {
  double gamma0 = 0.0;
  double beta0 = 0.0;
  double gamma_check = 0.0;
  double beta_check = 0.0;
};

/// Closed-form coefficients. l == u gives all zeros; l > u or l < 0 throws.
PopulationCoefficients population_coefficients(double l, double u);
inline PopulationCoefficients population_coefficients(const TruncationBand& band) {
  return population_coefficients(band.l(), band.u());
}

/// Dimension up to which `automatic` materializes V densely.
inline constexpr Index kDenseThreshold = 2048;

}  // namespace spinit
