#include "spinit/init_methods.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace spinit {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr std::array<std::pair<Method, std::string_view>, 6> kMethodNames = {{
    {Method::pri_spca, "pri_spca"},
    {Method::pri_spca_nt, "pri_spca_nt"},
    {Method::sparta, "sparta"},
    {Method::copram, "copram"},
    {Method::thwf, "thwf"},
    {Method::random, "random"},
}};

void check_inputs(const MatrixHandle& A, const Vector& y) {
  if (!A) throw std::invalid_argument("init: null matrix");
  if (y.size() != A->rows()) throw std::invalid_argument("init: y length != A.rows");
}

Vector unit(Index n, Index j) {
  Vector e = Vector::Zero(n);
  e[j] = 1.0;
  return e;
}

InitResult spectral_pipeline(const WeightedOperator& wop, const SpcaConfig& cfg, Method method) {
  InitResult r;
  r.method = method;
  r.lambda_used = wop.lambda;
  const Index n = wop.op.dim();
  if (wop.op.is_zero()) {
    r.degenerate = true;
    r.xhat = unit(n, 0);
  } else {
    const StartVector start = start_vector(wop.op);
    SpcaResult res = solve_spca(wop.op, cfg, start.vector);
    r.degenerate = res.degenerate;
    r.xhat = std::move(res.direction);
  }
  r.x0 = r.lambda_used * r.xhat;
  std::vector<Index> support;
  for (Index j = 0; j < n; ++j)
    if (r.xhat[j] != 0.0) support.push_back(j);
  r.support_estimate = std::move(support);
  return r;
}

// Power steps on (1/m) sum_i w_i a_iS a_iS^T from its largest-diagonal column,
// embedded back into R^n and scaled.
InitResult restricted_power(const SensingMatrix& A, const std::vector<Index>& support, const Vector& row_weights,
                            double scale, int power_steps, Method method) {
  const Index m = A.rows();
  const Index n = A.cols();
  const auto k = static_cast<Index>(support.size());
  Matrix cols(m, k);
  for (Index b = 0; b < k; ++b) cols.col(b) = A.entries().col(support[static_cast<std::size_t>(b)]);
  Matrix block = Matrix::Zero(k, k);
  block.selfadjointView<Eigen::Lower>().rankUpdate(cols.transpose() * row_weights.cwiseSqrt().asDiagonal(),
                                                   1.0 / static_cast<double>(m));
  block.triangularView<Eigen::StrictlyUpper>() = block.transpose();

  InitResult r;
  r.method = method;
  r.lambda_used = scale;
  r.support_estimate = support;

  Index best = 0;
  for (Index j = 1; j < k; ++j)
    if (block(j, j) > block(best, best)) best = j;
  Vector start = block.col(best);
  Vector dir;
  if (!(start.norm() > 0.0)) {
    r.degenerate = true;
    dir = Vector::Unit(k, 0);
  } else {
    const PowerResult pr = power_method(block, power_steps, start);
    r.degenerate = pr.degenerate;
    dir = pr.vector;
  }
  r.xhat = Vector::Zero(n);
  for (Index b = 0; b < k; ++b) r.xhat[support[static_cast<std::size_t>(b)]] = dir[b];
  r.x0 = scale * r.xhat;
  return r;
}

std::vector<Index> sorted(std::vector<Index> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

std::string_view method_name(Method m) {
  for (const auto& [method, name] : kMethodNames)
    if (method == m) return name;
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (const auto& [method, n] : kMethodNames)
    if (n == name) return method;
  return std::nullopt;
}

bool scales_by_lambda(Method m) {
  return m == Method::pri_spca || m == Method::pri_spca_nt || m == Method::random;
}

InitResult pri_spca(const MatrixHandle& A, const Vector& y, const TruncationBand& band, const SpcaConfig& cfg,
                    Representation rep) {
  check_inputs(A, y);
  cfg.validate();
  const auto t0 = Clock::now();
  InitResult r = spectral_pipeline(build_truncated_operator(A, y, band, rep), cfg, Method::pri_spca);
  r.wall_time = seconds_since(t0);
  return r;
}

InitResult pri_spca_nt(const MatrixHandle& A, const Vector& y, const SpcaConfig& cfg, Representation rep) {
  check_inputs(A, y);
  cfg.validate();
  const auto t0 = Clock::now();
  InitResult r = spectral_pipeline(build_untruncated_operator(A, y, rep), cfg, Method::pri_spca_nt);
  r.wall_time = seconds_since(t0);
  return r;
}

Vector marginal_scores(const SensingMatrix& A, const Vector& y) {
  if (y.size() != A.rows()) throw std::invalid_argument("marginal_scores: y length != A.rows");
  const Vector z = y.cwiseAbs2();
  return A.entries().cwiseAbs2().transpose() * z / static_cast<double>(A.rows());
}

InitResult copram_init(const MatrixHandle& A, const Vector& y, Index s, int power_steps) {
  check_inputs(A, y);
  if (s < 1) throw std::invalid_argument("copram_init: s must be >= 1");
  const auto t0 = Clock::now();
  const Vector z = y.cwiseAbs2();
  const std::vector<Index> support = sorted(top_indices(marginal_scores(*A, y), std::min(s, A->cols())));
  const double phi = std::sqrt(z.mean());
  InitResult r = restricted_power(*A, support, z, phi, power_steps, Method::copram);
  r.wall_time = seconds_since(t0);
  return r;
}

Index sparta_selection_size(Index m) {
  if (m < 6) return m;
  return (m + 5) / 6;
}

InitResult sparta_init(const MatrixHandle& A, const Vector& y, Index s, int power_steps) {
  check_inputs(A, y);
  if (s < 1) throw std::invalid_argument("sparta_init: s must be >= 1");
  const auto t0 = Clock::now();
  const Index m = A->rows();
  const Vector z = y.cwiseAbs2();
  const std::vector<Index> support = sorted(top_indices(marginal_scores(*A, y), std::min(s, A->cols())));

  // Largest amplitudes; y can be negative under noise, so rank by signed value.
  Vector ranking = y;
  const double floor = ranking.minCoeff();
  ranking.array() -= floor;  // top_indices ranks by magnitude
  const std::vector<Index> selected = top_indices(ranking, sparta_selection_size(m));

  Vector w = Vector::Zero(m);
  for (Index i : selected) {
    double row_norm2 = 0.0;
    for (Index j : support) row_norm2 += A->entries()(i, j) * A->entries()(i, j);
    if (row_norm2 > 0.0) w[i] = z[i] / row_norm2;
  }
  InitResult r = restricted_power(*A, support, w, std::sqrt(z.mean()), power_steps, Method::sparta);
  r.wall_time = seconds_since(t0);
  return r;
}

InitResult thwf_init(const MatrixHandle& A, const Vector& y, Index s, double alpha, int power_steps) {
  check_inputs(A, y);
  if (s < 1) throw std::invalid_argument("thwf_init: s must be >= 1");
  const auto t0 = Clock::now();
  const auto m = static_cast<double>(A->rows());
  const auto n = static_cast<double>(A->cols());
  const Vector z = y.cwiseAbs2();
  const double phi2 = z.mean();
  const Vector scores = marginal_scores(*A, y);
  const double threshold = phi2 * (1.0 + alpha * std::sqrt(std::log(m * n) / m));

  std::vector<Index> ranked = top_indices(scores, std::min(s, A->cols()));
  std::vector<Index> support;
  for (Index j : ranked)
    if (scores[j] > threshold) support.push_back(j);
  if (support.empty()) support.push_back(ranked.front());
  support = sorted(std::move(support));

  InitResult r = restricted_power(*A, support, z, std::sqrt(phi2), power_steps, Method::thwf);
  r.wall_time = seconds_since(t0);
  return r;
}

InitResult random_init(double lambda, Index n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("random_init: n must be >= 1");
  const auto t0 = Clock::now();
  StandardNormal normal(0.0, 1.0);
  Vector g(n);
  do {
    for (Index j = 0; j < n; ++j) g[j] = normal(rng);
  } while (!(g.norm() > 0.0));
  InitResult r;
  r.method = Method::random;
  r.lambda_used = lambda;
  r.xhat = g / g.norm();
  r.x0 = lambda * r.xhat;
  r.wall_time = seconds_since(t0);
  return r;
}

}  // namespace spinit
