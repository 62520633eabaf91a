#include "spinit/signals.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>

namespace spinit {

namespace {

constexpr std::array<char, 8> kFixtureMagic = {'S', 'P', 'I', 'N', 'I', 'T', 'F', 'X'};

void write_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((v >> (8 * b)) & 0xffU);
  out.write(bytes.data(), bytes.size());
}

std::uint64_t read_u64(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw std::runtime_error("fixture: truncated file");
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
  return v;
}

void write_f64(std::ostream& out, double v) { write_u64(out, std::bit_cast<std::uint64_t>(v)); }
double read_f64(std::istream& in) { return std::bit_cast<double>(read_u64(in)); }

}  // namespace

SparseSignal::SparseSignal(Vector values, std::vector<Index> support)
    : values_(std::move(values)), support_(std::move(support)) {
  const Index n = values_.size();
  if (n < 1) throw std::invalid_argument("SparseSignal: empty vector");
  if (support_.empty()) throw std::invalid_argument("SparseSignal: empty support");
  std::sort(support_.begin(), support_.end());
  if (std::adjacent_find(support_.begin(), support_.end()) != support_.end())
    throw std::invalid_argument("SparseSignal: duplicate support index");
  if (support_.front() < 0 || support_.back() >= n)
    throw std::invalid_argument("SparseSignal: support index out of range");

  std::vector<bool> in_support(static_cast<std::size_t>(n), false);
  for (Index j : support_) in_support[static_cast<std::size_t>(j)] = true;
  for (Index j = 0; j < n; ++j) {
    if (!in_support[static_cast<std::size_t>(j)] && values_[j] != 0.0)
      throw std::invalid_argument("SparseSignal: nonzero entry outside support");
    if (!std::isfinite(values_[j])) throw std::invalid_argument("SparseSignal: non-finite entry");
  }
  const double nrm = values_.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw std::invalid_argument("SparseSignal: zero norm");
}

SparseSignal SparseSignal::negated() const { return SparseSignal(-values_, support_); }

SensingMatrix::SensingMatrix(RowMatrix entries, std::uint64_t seed)
    : entries_(std::move(entries)), seed_(seed) {
  if (entries_.rows() < 1 || entries_.cols() < 1)
    throw std::invalid_argument("SensingMatrix: zero dimension");
}

namespace {

void fill_row(std::uint64_t seed, Index i, double* out, Index n) {
  SplitMix64 rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
  StandardNormal normal(0.0, 1.0);
  for (Index j = 0; j < n; ++j) out[j] = normal(rng);
}

}  // namespace

Vector SensingRowGenerator::row(Index i) const {
  Vector r(n_);
  fill_row(seed_, i, r.data(), n_);
  return r;
}

SensingMatrix SensingMatrix::generate(Index m, Index n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("gen_sensing_matrix: zero dimension");
  RowMatrix a(m, n);
  for (Index i = 0; i < m; ++i) fill_row(seed, i, a.row(i).data(), n);
  return SensingMatrix(std::move(a), seed);
}

NoiseSpec::NoiseSpec(double sigma_) : sigma(sigma_) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("NoiseSpec: sigma must be >= 0");
}

MeasurementSet::MeasurementSet(MatrixHandle matrix, const Vector& x, Vector eta)
    : matrix_(std::move(matrix)), eta_(std::move(eta)) {
  if (!matrix_) throw std::invalid_argument("MeasurementSet: null matrix");
  if (matrix_->cols() != x.size()) throw std::invalid_argument("measure: A.cols != x.n");
  if (eta_.size() != matrix_->rows()) throw std::invalid_argument("measure: eta length != A.rows");
  y_ = (matrix_->entries() * x).cwiseAbs() + eta_;
}

SparseSignal gen_sparse_signal(Index n, Index s, Rng& rng) {
  if (s < 1 || s > n) throw std::invalid_argument("gen_sparse_signal: need 1 <= s <= n");
  std::vector<Index> population(static_cast<std::size_t>(n));
  std::iota(population.begin(), population.end(), Index{0});
  std::vector<Index> support;
  support.reserve(static_cast<std::size_t>(s));
  std::sample(population.begin(), population.end(), std::back_inserter(support), s, rng);

  StandardNormal normal(0.0, 1.0);
  Vector values = Vector::Zero(n);
  for (Index j : support) {
    double v = normal(rng);
    while (v == 0.0) v = normal(rng);
    values[j] = v;
  }
  return SparseSignal(std::move(values), std::move(support));
}

MatrixHandle gen_sensing_matrix(Index m, Index n, std::uint64_t seed) {
  return std::make_shared<const SensingMatrix>(SensingMatrix::generate(m, n, seed));
}

MeasurementSet measure(const MatrixHandle& A, const Vector& x, NoiseSpec noise, Rng& rng) {
  if (!A) throw std::invalid_argument("measure: null matrix");
  if (A->cols() != x.size()) throw std::invalid_argument("measure: A.cols != x.n");
  StandardNormal normal(0.0, 1.0);
  const double scale = noise.sigma * x.norm();
  Vector eta(A->rows());
  for (Index i = 0; i < eta.size(); ++i) eta[i] = scale * normal(rng);
  return MeasurementSet(A, x, std::move(eta));
}

MeasurementSet measure(const MatrixHandle& A, const SparseSignal& x, NoiseSpec noise, Rng& rng) {
  return measure(A, x.values(), noise, rng);
}

void save_fixture(const std::filesystem::path& path, const Vector& x, const MeasurementSet& ms) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("fixture: cannot open " + path.string());
  const auto& a = ms.matrix().entries();
  if (a.cols() != x.size()) throw std::invalid_argument("fixture: x length != A.cols");
  out.write(kFixtureMagic.data(), kFixtureMagic.size());
  write_u64(out, static_cast<std::uint64_t>(a.rows()));
  write_u64(out, static_cast<std::uint64_t>(a.cols()));
  write_u64(out, ms.matrix().seed());
  for (Index j = 0; j < x.size(); ++j) write_f64(out, x[j]);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) write_f64(out, a(i, j));
  for (Index i = 0; i < ms.m(); ++i) write_f64(out, ms.y()[i]);
  for (Index i = 0; i < ms.m(); ++i) write_f64(out, ms.eta()[i]);
  if (!out) throw std::runtime_error("fixture: write failed");
}

Fixture load_fixture(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("fixture: cannot open " + path.string());
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kFixtureMagic) throw std::runtime_error("fixture: bad magic");
  const auto m = static_cast<Index>(read_u64(in));
  const auto n = static_cast<Index>(read_u64(in));
  if (m < 1 || n < 1 || m > (Index{1} << 32) || n > (Index{1} << 32))
    throw std::runtime_error("fixture: implausible dimensions");
  Fixture f;
  f.seed = read_u64(in);
  f.x.resize(n);
  for (Index j = 0; j < n; ++j) f.x[j] = read_f64(in);
  f.A.resize(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) f.A(i, j) = read_f64(in);
  f.y.resize(m);
  for (Index i = 0; i < m; ++i) f.y[i] = read_f64(in);
  f.eta.resize(m);
  for (Index i = 0; i < m; ++i) f.eta[i] = read_f64(in);
  return f;
}

}  // namespace spinit
