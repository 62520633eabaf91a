#pragma once

#include <vector>

#include "spinit/spectral.hpp"

namespace spinit {

enum class SpcaSolver { tpower, grqi };

struct SpcaConfig {
  Index s = 1;
  int max_iters = 100;
  double deflation = 0.2;
  SpcaSolver solver = SpcaSolver::grqi;
  double convergence_tol = 1e-8;

  void validate() const;
};

struct SpcaResult {
  Vector direction;  // unit norm, at most s nonzeros
  double objective = 0.0;
  int iters_used = 0;
  bool converged = false;
  bool degenerate = false;
  int fallback_steps = 0;         // grqi: iterations where the shifted solve was replaced by a power step
  std::vector<double> objective_trace;  // objective after each iteration
};

struct StartVector {
  Vector vector;
  bool degenerate = false;
};

/// Normalized column of V at the largest diagonal entry (lowest index on ties);
/// e_1 with the degenerate flag for the zero operator.
StartVector start_vector(const SpectralOperator& op);

/// Indices of the s largest |v_j|, ordered by decreasing magnitude, ties by lowest index.
std::vector<Index> top_indices(const Vector& v, Index s);

/// Keeps the s largest-magnitude entries and zeroes the rest.
Vector truncate_top(const Vector& v, Index s);

/// Truncated power method: w <- normalize(truncate_s(V w)).
SpcaResult tpower(const SpectralOperator& op, const SpcaConfig& cfg, const Vector& start);

/// Support-restricted Rayleigh-quotient iteration. Each step solves
/// (V_SS - theta I) h = w_S on the current support, then re-selects the support
/// from (1 - d) w + d V w / ||V w|| with d = cfg.deflation.
SpcaResult grqi(const SpectralOperator& op, const SpcaConfig& cfg, const Vector& start);

/// Dispatches on cfg.solver.
SpcaResult solve_spca(const SpectralOperator& op, const SpcaConfig& cfg, const Vector& start);

struct PowerResult {
  Vector vector;
  bool degenerate = false;
};

/// `iters` normalized power steps from `start` (no sparsification).
PowerResult power_method(const SpectralOperator& op, int iters, const Vector& start);
PowerResult power_method(const Matrix& symmetric, int iters, const Vector& start);

}  // namespace spinit
