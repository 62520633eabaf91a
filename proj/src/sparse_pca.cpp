#include "spinit/sparse_pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spinit {

namespace {

bool close_up_to_sign(const Vector& a, const Vector& b, double tol) {
  return (a - b).norm() < tol || (a + b).norm() < tol;
}

SpcaResult finish(const SpectralOperator& op, Vector w, int iters, bool converged, bool degenerate,
                  std::vector<double> trace, int fallbacks = 0) {
  SpcaResult r;
  r.objective = op.quadratic_form(w);
  r.direction = std::move(w);
  r.iters_used = iters;
  r.converged = converged;
  r.degenerate = degenerate;
  r.fallback_steps = fallbacks;
  r.objective_trace = std::move(trace);
  return r;
}

// s-sparse feasible version of an arbitrary start vector.
Vector feasible_start(const Vector& start, Index s, Index n) {
  if (start.size() != n) throw std::invalid_argument("spca: start dimension mismatch");
  Vector w = truncate_top(start, s);
  const double nrm = w.norm();
  if (!(nrm > 0.0)) {
    w = Vector::Zero(n);
    w[0] = 1.0;
    return w;
  }
  return w / nrm;
}

}  // namespace

void SpcaConfig::validate() const {
  if (s < 1) throw std::invalid_argument("SpcaConfig: s must be >= 1");
  if (max_iters < 1) throw std::invalid_argument("SpcaConfig: max_iters must be >= 1");
  if (!(deflation >= 0.0 && deflation < 1.0)) throw std::invalid_argument("SpcaConfig: deflation must be in [0, 1)");
  if (!(convergence_tol >= 0.0)) throw std::invalid_argument("SpcaConfig: convergence_tol must be >= 0");
}

std::vector<Index> top_indices(const Vector& v, Index s) {
  const Index n = v.size();
  s = std::clamp<Index>(s, 0, n);
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  const auto by_magnitude = [&v](Index a, Index b) {
    const double fa = std::abs(v[a]);
    const double fb = std::abs(v[b]);
    return fa > fb || (fa == fb && a < b);
  };
  std::partial_sort(idx.begin(), idx.begin() + s, idx.end(), by_magnitude);
  idx.resize(static_cast<std::size_t>(s));
  return idx;
}

Vector truncate_top(const Vector& v, Index s) {
  Vector out = Vector::Zero(v.size());
  for (Index j : top_indices(v, s)) out[j] = v[j];
  return out;
}

StartVector start_vector(const SpectralOperator& op) {
  const Index n = op.dim();
  const Vector diag = op.diagonal();
  Index best = 0;
  for (Index j = 1; j < n; ++j)
    if (diag[j] > diag[best]) best = j;
  Vector col = op.column(best);
  const double nrm = col.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) {
    Vector e = Vector::Zero(n);
    e[0] = 1.0;
    return {e, true};
  }
  return {col / nrm, false};
}

SpcaResult tpower(const SpectralOperator& op, const SpcaConfig& cfg, const Vector& start) {
  cfg.validate();
  const Index n = op.dim();
  const Index s = std::min(cfg.s, n);
  Vector w = feasible_start(start, s, n);
  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(cfg.max_iters));

  // The first step truncates V * start, not the pre-truncated start.
  Vector current_full = start;
  for (int t = 1; t <= cfg.max_iters; ++t) {
    Vector next = truncate_top(op.apply(t == 1 ? current_full : w), s);
    const double nrm = next.norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) return finish(op, w, t - 1, false, true, std::move(trace));
    next /= nrm;
    const bool done = t > 1 && close_up_to_sign(next, w, cfg.convergence_tol);
    w = std::move(next);
    trace.push_back(op.quadratic_form(w));
    if (done) return finish(op, w, t, true, false, std::move(trace));
  }
  return finish(op, w, cfg.max_iters, false, false, std::move(trace));
}

SpcaResult grqi(const SpectralOperator& op, const SpcaConfig& cfg, const Vector& start) {
  cfg.validate();
  const Index n = op.dim();
  const Index s = std::min(cfg.s, n);
  Vector w = feasible_start(start, s, n);
  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(cfg.max_iters));
  int fallbacks = 0;

  for (int t = 1; t <= cfg.max_iters; ++t) {
    // Rayleigh-quotient step restricted to the current support.
    std::vector<Index> support;
    for (Index j = 0; j < n; ++j)
      if (w[j] != 0.0) support.push_back(j);
    const auto k = static_cast<Index>(support.size());
    const Matrix block = op.principal_submatrix(support);
    Vector ws(k);
    for (Index a = 0; a < k; ++a) ws[a] = w[support[static_cast<std::size_t>(a)]];
    const double theta = ws.dot(block * ws);

    const Matrix shifted = block - theta * Matrix::Identity(k, k);
    const Eigen::PartialPivLU<Matrix> lu(shifted);
    Vector h = lu.solve(ws);
    double hn = h.norm();
    if (!(hn > 0.0) || !std::isfinite(hn)) {
      ++fallbacks;
      h = block * ws;
      hn = h.norm();
    }
    if (!(hn > 0.0) || !std::isfinite(hn)) return finish(op, w, t - 1, false, true, std::move(trace), fallbacks);
    h /= hn;
    // Inverse iteration may flip the sign; keep the orientation of w.
    if (h.dot(ws) < 0.0) h = -h;

    Vector rq = Vector::Zero(n);
    for (Index a = 0; a < k; ++a) rq[support[static_cast<std::size_t>(a)]] = h[a];

    // Support re-selection from the deflation blend with a full power step.
    const Vector vw = op.apply(rq);
    const double vn = vw.norm();
    Vector blend = rq;
    if (vn > 0.0 && std::isfinite(vn)) blend = (1.0 - cfg.deflation) * rq + cfg.deflation * (vw / vn);
    Vector next = truncate_top(blend, s);
    const double nn = next.norm();
    if (!(nn > 0.0) || !std::isfinite(nn)) return finish(op, w, t - 1, false, true, std::move(trace), fallbacks);
    next /= nn;

    const bool done = close_up_to_sign(next, w, cfg.convergence_tol);
    w = std::move(next);
    trace.push_back(op.quadratic_form(w));
    if (done) return finish(op, w, t, true, false, std::move(trace), fallbacks);
  }
  return finish(op, w, cfg.max_iters, false, false, std::move(trace), fallbacks);
}

SpcaResult solve_spca(const SpectralOperator& op, const SpcaConfig& cfg, const Vector& start) {
  return cfg.solver == SpcaSolver::tpower ? tpower(op, cfg, start) : grqi(op, cfg, start);
}

namespace {

template <typename ApplyFn>
PowerResult run_power(ApplyFn&& apply_fn, int iters, const Vector& start) {
  if (iters < 0) throw std::invalid_argument("power_method: negative iteration count");
  const double sn = start.norm();
  if (!(sn > 0.0)) throw std::invalid_argument("power_method: zero start vector");
  Vector v = start / sn;
  for (int t = 0; t < iters; ++t) {
    Vector next = apply_fn(v);
    const double nrm = next.norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) return {v, true};
    v = next / nrm;
  }
  return {v, false};
}

}  // namespace

PowerResult power_method(const SpectralOperator& op, int iters, const Vector& start) {
  if (start.size() != op.dim()) throw std::invalid_argument("power_method: dimension mismatch");
  return run_power([&op](const Vector& v) { return op.apply(v); }, iters, start);
}

PowerResult power_method(const Matrix& symmetric, int iters, const Vector& start) {
  if (symmetric.rows() != symmetric.cols() || start.size() != symmetric.rows())
    throw std::invalid_argument("power_method: dimension mismatch");
  return run_power([&symmetric](const Vector& v) -> Vector { return symmetric * v; }, iters, start);
}

}  // namespace spinit
