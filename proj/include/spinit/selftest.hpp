#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinit/sparse_pca.hpp"

namespace spinit {

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Best objective of max w^T V w over unit vectors with at most s nonzeros,
/// by enumerating every size-s support and taking the top eigenvalue of the
/// principal submatrix. Exponential; only for small n.
double exhaustive_sparse_pca(const Matrix& V, Index s);

/// Property and oracle checks that back the `selftest` subcommand:
/// sign invariance, operator PSD/symmetry, dense vs matrix-free agreement,
/// truncated-power monotonicity, SPCA feasibility, the exhaustive-support
/// oracle, CSV round trip and run determinism.
std::vector<CheckOutcome> run_property_suite(std::uint64_t seed = 1);

}  // namespace spinit
