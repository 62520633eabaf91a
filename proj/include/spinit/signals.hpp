#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spinit/rng.hpp"

namespace spinit {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Ground-truth s-sparse vector with its support stored explicitly (sorted, 0-based).
class SparseSignal {
 public:
  SparseSignal(Vector values, std::vector<Index> support);

  const Vector& values() const { return values_; }
  const std::vector<Index>& support() const { return support_; }
  Index n() const { return values_.size(); }
  Index s() const { return static_cast<Index>(support_.size()); }
  double norm() const { return values_.norm(); }
  Vector direction() const { return values_ / values_.norm(); }

  SparseSignal negated() const;

 private:
  Vector values_;
  std::vector<Index> support_;
};

/// Dense row-major Gaussian sensing matrix. Row i is drawn from its own
/// sub-seed, so any prefix of rows is reproducible on its own and the
/// first m' rows of an (m, n, seed) matrix equal the (m', n, seed) matrix.
class SensingMatrix {
 public:
  SensingMatrix(RowMatrix entries, std::uint64_t seed);

  static SensingMatrix generate(Index m, Index n, std::uint64_t seed);

  Index rows() const { return entries_.rows(); }
  Index cols() const { return entries_.cols(); }
  std::uint64_t seed() const { return seed_; }
  const RowMatrix& entries() const { return entries_; }
  auto row(Index i) const { return entries_.row(i); }

 private:
  RowMatrix entries_;
  std::uint64_t seed_;
};

using MatrixHandle = std::shared_ptr<const SensingMatrix>;

/// Streaming access to the rows of gen_sensing_matrix(m, n, seed) without
/// materializing the matrix.
class SensingRowGenerator {
 public:
  SensingRowGenerator(Index n, std::uint64_t seed) : n_(n), seed_(seed) {}
  Vector row(Index i) const;
  Index cols() const { return n_; }

 private:
  Index n_;
  std::uint64_t seed_;
};

struct NoiseSpec {
  explicit NoiseSpec(double sigma_ = 0.0);
  double sigma;
};

/// Amplitudes y = |A x| + eta together with the stored noise draw.
class MeasurementSet {
 public:
  /// Builds y from (A, x, eta) and checks the measurement identity.
  MeasurementSet(MatrixHandle matrix, const Vector& x, Vector eta);

  const Vector& y() const { return y_; }
  const Vector& eta() const { return eta_; }
  const MatrixHandle& matrix_ref() const { return matrix_; }
  const SensingMatrix& matrix() const { return *matrix_; }
  Index m() const { return y_.size(); }

 private:
  MatrixHandle matrix_;
  Vector y_;
  Vector eta_;
};

SparseSignal gen_sparse_signal(Index n, Index s, Rng& rng);

MatrixHandle gen_sensing_matrix(Index m, Index n, std::uint64_t seed);

/// Draws eta ~ N(0, sigma^2 ||x||^2 I_m) from `rng` and forms y = |Ax| + eta.
/// The standard-normal draws are taken even when sigma = 0, so a fixed rng
/// yields nested noise across sigma values.
MeasurementSet measure(const MatrixHandle& A, const Vector& x, NoiseSpec noise, Rng& rng);
MeasurementSet measure(const MatrixHandle& A, const SparseSignal& x, NoiseSpec noise, Rng& rng);

/// Regression fixture: (x, A, y, eta) in a little-endian binary file.
struct Fixture {
  Vector x;
  std::uint64_t seed = 0;
  RowMatrix A;
  Vector y;
  Vector eta;
};

void save_fixture(const std::filesystem::path& path, const Vector& x, const MeasurementSet& ms);
Fixture load_fixture(const std::filesystem::path& path);

}  // namespace spinit
