#include "spinit/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spinit {

namespace {

double std_normal_pdf(double t) {
  if (std::isinf(t)) return 0.0;
  return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
}

// P(a < g < b) for a <= b, computed from the upper tail to keep precision for large a.
double std_normal_mass(double a, double b) {
  const auto upper = [](double t) { return 0.5 * std::erfc(t / std::numbers::sqrt2); };
  return upper(a) - upper(b);
}

// t * phi(t), with the limit 0 at infinity.
double t_pdf(double t) { return std::isinf(t) ? 0.0 : t * std_normal_pdf(t); }

// t^2 * phi(t), with the limit 0 at infinity.
double t2_pdf(double t) { return std::isinf(t) ? 0.0 : t * t * std_normal_pdf(t); }

void check_dims(const MatrixHandle& A, const Vector& y) {
  if (!A) throw std::invalid_argument("spectral: null matrix");
  if (y.size() != A->rows()) throw std::invalid_argument("spectral: y length != A.rows");
}

Representation resolve(Representation rep, Index n) {
  if (rep != Representation::automatic) return rep;
  return n <= kDenseThreshold ? Representation::dense : Representation::matrix_free;
}

}  // namespace

NormEstimate estimate_norm(const Vector& y) {
  if (y.size() == 0) throw std::invalid_argument("estimate_norm: empty measurement vector");
  return {std::sqrt(std::numbers::pi / 2.0) * y.mean()};
}

TruncationBand::TruncationBand(double l, double u) : l_(l), u_(u) {
  if (!(l > 0.0) || !(l < u) || std::isnan(u))
    throw std::invalid_argument("TruncationBand: need 0 < l < u");
}

SpectralOperator SpectralOperator::from_dense(Matrix symmetric) {
  if (symmetric.rows() != symmetric.cols() || symmetric.rows() < 1)
    throw std::invalid_argument("SpectralOperator: matrix must be square and nonempty");
  const double scale = symmetric.cwiseAbs().maxCoeff();
  if ((symmetric - symmetric.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("SpectralOperator: matrix is not symmetric");
  SpectralOperator op;
  op.n_ = symmetric.rows();
  op.rep_ = Representation::dense;
  op.dense_ = std::move(symmetric);
  return op;
}

SpectralOperator SpectralOperator::from_weights(MatrixHandle A, Vector weights, Representation rep) {
  if (!A) throw std::invalid_argument("SpectralOperator: null matrix");
  if (weights.size() != A->rows()) throw std::invalid_argument("SpectralOperator: weights length != A.rows");
  SpectralOperator op;
  op.n_ = A->cols();
  op.rep_ = resolve(rep, op.n_);
  op.matrix_ = std::move(A);
  op.weights_ = std::move(weights);

  for (Index i = 0; i < op.weights_.size(); ++i)
    if (op.weights_[i] != 0.0) op.active_.push_back(i);

  const auto k = static_cast<Index>(op.active_.size());
  op.active_rows_.resize(k, op.n_);
  op.active_weights_.resize(k);
  for (Index r = 0; r < k; ++r) {
    const Index i = op.active_[static_cast<std::size_t>(r)];
    op.active_rows_.row(r) = op.matrix_->row(i);
    op.active_weights_[r] = op.weights_[i];
  }

  if (op.rep_ == Representation::dense) {
    // V = P^T P - N^T N with P, N the sqrt(|w|)-scaled rows of each sign.
    Index kp = 0;
    for (Index r = 0; r < k; ++r) kp += op.active_weights_[r] > 0.0 ? 1 : 0;
    RowMatrix pos(kp, op.n_);
    RowMatrix neg(k - kp, op.n_);
    Index ip = 0;
    Index in = 0;
    for (Index r = 0; r < k; ++r) {
      const double w = op.active_weights_[r];
      if (w > 0.0) {
        pos.row(ip++) = std::sqrt(w) * op.active_rows_.row(r);
      } else {
        neg.row(in++) = std::sqrt(-w) * op.active_rows_.row(r);
      }
    }
    op.dense_ = Matrix::Zero(op.n_, op.n_);
    if (kp > 0) op.dense_.selfadjointView<Eigen::Lower>().rankUpdate(pos.transpose(), 1.0);
    if (k - kp > 0) op.dense_.selfadjointView<Eigen::Lower>().rankUpdate(neg.transpose(), -1.0);
    op.dense_.triangularView<Eigen::StrictlyUpper>() = op.dense_.transpose();
    op.active_rows_.resize(0, 0);
    op.active_weights_.resize(0);
  }
  return op;
}

bool SpectralOperator::is_zero() const {
  if (matrix_) return active_.empty();
  return dense_.isZero(0.0);
}

Vector SpectralOperator::apply(const Vector& w) const {
  if (w.size() != n_) throw std::invalid_argument("apply: dimension mismatch");
  if (rep_ == Representation::dense) return dense_ * w;
  if (active_rows_.rows() == 0) return Vector::Zero(n_);
  const Vector t = active_weights_.cwiseProduct(active_rows_ * w);
  return active_rows_.transpose() * t;
}

double SpectralOperator::quadratic_form(const Vector& w) const {
  if (w.size() != n_) throw std::invalid_argument("quadratic_form: dimension mismatch");
  if (rep_ == Representation::dense) return w.dot(dense_ * w);
  if (active_rows_.rows() == 0) return 0.0;
  const Vector t = active_rows_ * w;
  return active_weights_.dot(t.cwiseAbs2());
}

Vector SpectralOperator::diagonal() const {
  if (rep_ == Representation::dense) return dense_.diagonal();
  if (active_rows_.rows() == 0) return Vector::Zero(n_);
  return active_rows_.cwiseAbs2().transpose() * active_weights_;
}

Vector SpectralOperator::column(Index j) const {
  if (j < 0 || j >= n_) throw std::out_of_range("column: index out of range");
  if (rep_ == Representation::dense) return dense_.col(j);
  if (active_rows_.rows() == 0) return Vector::Zero(n_);
  const Vector t = active_weights_.cwiseProduct(active_rows_.col(j));
  return active_rows_.transpose() * t;
}

Matrix SpectralOperator::principal_submatrix(std::span<const Index> idx) const {
  const auto k = static_cast<Index>(idx.size());
  for (Index j : idx)
    if (j < 0 || j >= n_) throw std::out_of_range("principal_submatrix: index out of range");
  Matrix sub(k, k);
  if (rep_ == Representation::dense) {
    for (Index a = 0; a < k; ++a)
      for (Index b = 0; b < k; ++b) sub(a, b) = dense_(idx[a], idx[b]);
    return sub;
  }
  Matrix cols(active_rows_.rows(), k);
  for (Index b = 0; b < k; ++b) cols.col(b) = active_rows_.col(idx[b]);
  sub.noalias() = cols.transpose() * active_weights_.asDiagonal() * cols;
  return sub;
}

Matrix SpectralOperator::to_dense() const {
  if (rep_ == Representation::dense) return dense_;
  if (active_rows_.rows() == 0) return Matrix::Zero(n_, n_);
  return active_rows_.transpose() * active_weights_.asDiagonal() * active_rows_;
}

SpectralOperator SpectralOperator::scaled(double c) const {
  SpectralOperator op = *this;
  op.weights_ *= c;
  op.active_weights_ *= c;
  op.dense_ *= c;
  return op;
}

WeightedOperator build_truncated_operator(const MatrixHandle& A, const Vector& y, const TruncationBand& band,
                                          Representation rep) {
  check_dims(A, y);
  const double lambda = estimate_norm(y).lambda;
  const auto m = static_cast<double>(y.size());
  Vector w = Vector::Zero(y.size());
  for (Index i = 0; i < y.size(); ++i)
    if (band.admits(y[i], lambda)) w[i] = y[i] / m;
  return {SpectralOperator::from_weights(A, std::move(w), rep), lambda};
}

WeightedOperator build_untruncated_operator(const MatrixHandle& A, const Vector& y, Representation rep) {
  check_dims(A, y);
  const double lambda = estimate_norm(y).lambda;
  Vector w = y / static_cast<double>(y.size());
  return {SpectralOperator::from_weights(A, std::move(w), rep), lambda};
}

PopulationCoefficients population_coefficients(double l, double u) {
  if (std::isnan(l) || std::isnan(u) || l < 0.0 || l > u)
    throw std::invalid_argument("population_coefficients: need 0 <= l <= u");
  if (l == u) return {};
  // Two-sided integrals over l < |g| < u; each one-sided antiderivative doubled.
  const double mass = 2.0 * std_normal_mass(l, u);                                 // E[1]
  const double m1 = 2.0 * (std_normal_pdf(l) - std_normal_pdf(u));                 // E[|g|]
  const double m2 = mass + 2.0 * (t_pdf(l) - t_pdf(u));                            // E[g^2]
  const double m3 = 2.0 * (t2_pdf(l) - t2_pdf(u)) + 2.0 * m1;                      // E[|g|^3]
  PopulationCoefficients c;
  c.gamma0 = m1;
  c.beta0 = m3 - m1;
  c.gamma_check = mass;
  c.beta_check = m2 - mass;
  return c;
}

}  // namespace spinit
