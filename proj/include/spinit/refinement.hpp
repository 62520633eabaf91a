#pragma once

#include <functional>
#include <vector>

#include "spinit/signals.hpp"

namespace spinit {

struct RefinementConfig {
  int T = 100;
  Index s = 1;
  int inner_iters = 25;
  double inner_tol = 1e-6;

  void validate() const;
};

struct CosampResult {
  Vector x;
  double residual = 0.0;  // ||b - A x||
  int iters = 0;
  bool rank_deficient = false;  // some merged-support least squares needed the minimum-norm solution
};

/// CoSaMP for min ||b - A x|| over s-sparse x, optionally warm-started.
/// Returns the iterate with the smallest residual seen (the pruned warm
/// start included), so a warm start is never made worse.
CosampResult cosamp(const RowMatrix& A, const Vector& b, Index s, int inner_iters, double tol,
                    const Vector* warm_start = nullptr);

struct RefinementResult {
  Vector x;
  int iters = 0;
  bool degenerate = false;
  /// ||p_t o y - A x_{t+1}|| and ||p_t o y - A x_t|| for each outer step t.
  std::vector<double> residual_after;
  std::vector<double> residual_before;
};

/// Called after each outer iteration with (t, x_t); t counts from 1.
using RefinementObserver = std::function<void(int, const Vector&)>;

/// Alternating minimization: p <- sign(A x_t) with sign(0) = +1, then
/// x_{t+1} <- CoSaMP(A, p o y, s) warm-started at x_t; T rounds.
RefinementResult copram_refine(const SensingMatrix& A, const Vector& y, const Vector& x0, const RefinementConfig& cfg,
                               const RefinementObserver& observer = {});

}  // namespace spinit
