#include "spinit/refinement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spinit/sparse_pca.hpp"

namespace spinit {

namespace {

std::vector<Index> support_of(const Vector& x) {
  std::vector<Index> s;
  for (Index j = 0; j < x.size(); ++j)
    if (x[j] != 0.0) s.push_back(j);
  return s;
}

Vector sparse_product(const RowMatrix& A, const Vector& x, const std::vector<Index>& support) {
  Vector out = Vector::Zero(A.rows());
  for (Index j : support) out.noalias() += x[j] * A.col(j);
  return out;
}

}  // namespace

void RefinementConfig::validate() const {
  if (T < 1) throw std::invalid_argument("RefinementConfig: T must be >= 1");
  if (s < 1) throw std::invalid_argument("RefinementConfig: s must be >= 1");
  if (inner_iters < 1) throw std::invalid_argument("RefinementConfig: inner_iters must be >= 1");
  if (!(inner_tol >= 0.0)) throw std::invalid_argument("RefinementConfig: inner_tol must be >= 0");
}

CosampResult cosamp(const RowMatrix& A, const Vector& b, Index s, int inner_iters, double tol,
                    const Vector* warm_start) {
  const Index m = A.rows();
  const Index n = A.cols();
  if (b.size() != m) throw std::invalid_argument("cosamp: b length != A.rows");
  if (s < 1 || s > n) throw std::invalid_argument("cosamp: need 1 <= s <= n");
  if (s > m) throw std::invalid_argument("cosamp: need s <= m");
  if (warm_start && warm_start->size() != n) throw std::invalid_argument("cosamp: warm start dimension mismatch");

  CosampResult best;
  const double bnorm = b.norm();
  best.x = Vector::Zero(n);
  best.residual = bnorm;
  if (bnorm == 0.0) return best;

  Vector x = warm_start ? truncate_top(*warm_start, s) : Vector::Zero(n);
  std::vector<Index> supp = support_of(x);
  Vector r = b - sparse_product(A, x, supp);
  if (r.norm() < best.residual) {
    best.x = x;
    best.residual = r.norm();
  }

  for (int it = 1; it <= inner_iters; ++it) {
    if (r.norm() <= tol * bnorm) break;
    best.iters = it;

    const Vector proxy = A.transpose() * r;
    std::vector<Index> merged = top_indices(proxy, std::min<Index>(2 * s, n));
    merged.insert(merged.end(), supp.begin(), supp.end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

    const auto k = static_cast<Index>(merged.size());
    Matrix sub(m, k);
    for (Index c = 0; c < k; ++c) sub.col(c) = A.col(merged[static_cast<std::size_t>(c)]);
    const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(sub);
    if (cod.rank() < k) best.rank_deficient = true;
    const Vector coef = cod.solve(b);

    Vector full = Vector::Zero(n);
    for (Index c = 0; c < k; ++c) full[merged[static_cast<std::size_t>(c)]] = coef[c];
    Vector next = truncate_top(full, s);
    std::vector<Index> next_supp = support_of(next);
    r = b - sparse_product(A, next, next_supp);

    // Re-fit on the pruned support; the merged solve can be underdetermined.
    if (k > static_cast<Index>(next_supp.size()) && !next_supp.empty()) {
      const auto ks = static_cast<Index>(next_supp.size());
      Matrix pruned(m, ks);
      for (Index c = 0; c < ks; ++c) pruned.col(c) = A.col(next_supp[static_cast<std::size_t>(c)]);
      const Eigen::CompleteOrthogonalDecomposition<Matrix> pcod(pruned);
      const Vector pc = pcod.solve(b);
      const Vector pr = b - pruned * pc;
      if (pr.norm() < r.norm()) {
        for (Index c = 0; c < ks; ++c) next[next_supp[static_cast<std::size_t>(c)]] = pc[c];
        next_supp = support_of(next);
        r = pr;
      }
    }

    const double rn = r.norm();
    if (rn < best.residual) {
      best.x = next;
      best.residual = rn;
    }
    const double step = (next - x).norm();
    x = std::move(next);
    supp = std::move(next_supp);
    if (step <= tol * std::max(x.norm(), 1e-300)) break;
  }
  return best;
}

RefinementResult copram_refine(const SensingMatrix& A, const Vector& y, const Vector& x0, const RefinementConfig& cfg,
                               const RefinementObserver& observer) {
  cfg.validate();
  if (y.size() != A.rows()) throw std::invalid_argument("copram_refine: y length != A.rows");
  if (x0.size() != A.cols()) throw std::invalid_argument("copram_refine: x0 dimension mismatch");
  if (!x0.allFinite() || x0.norm() == 0.0) throw std::invalid_argument("copram_refine: x0 must be finite and nonzero");

  const RowMatrix& a = A.entries();
  const Index s = std::min(cfg.s, std::min(A.rows(), A.cols()));
  RefinementResult res;
  res.x = x0;
  for (int t = 1; t <= cfg.T; ++t) {
    const Vector ax = a * res.x;
    if (ax.isZero(0.0)) {
      res.degenerate = true;
      break;
    }
    Vector b(y.size());
    for (Index i = 0; i < y.size(); ++i) b[i] = (ax[i] >= 0.0 ? 1.0 : -1.0) * y[i];
    res.residual_before.push_back((b - ax).norm());

    CosampResult inner = cosamp(a, b, s, cfg.inner_iters, cfg.inner_tol, &res.x);
    res.residual_after.push_back(inner.residual);
    res.x = std::move(inner.x);
    res.iters = t;
    if (observer) observer(t, res.x);
  }
  return res;
}

}  // namespace spinit
