#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spinit/sparse_pca.hpp"

namespace spinit {

enum class Method { pri_spca, pri_spca_nt, sparta, copram, thwf, random };

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

/// Whether the method scales its unit direction by lambda (as opposed to a
/// squared-amplitude scale).
bool scales_by_lambda(Method m);

struct InitResult {
  Vector xhat;  // unit direction
  Vector x0;    // scale * xhat
  Method method = Method::pri_spca;
  double lambda_used = 0.0;  // the scale applied to xhat
  std::optional<std::vector<Index>> support_estimate;
  double wall_time = 0.0;  // seconds
  bool degenerate = false;
};

/// Number of power steps every baseline runs on its restricted block.
inline constexpr int kBaselinePowerSteps = 100;

/// Truncated spectral operator + sparse PCA, scaled by lambda.
InitResult pri_spca(const MatrixHandle& A, const Vector& y, const TruncationBand& band, const SpcaConfig& cfg,
                    Representation rep = Representation::automatic);

/// Same pipeline on the untruncated operator.
InitResult pri_spca_nt(const MatrixHandle& A, const Vector& y, const SpcaConfig& cfg,
                       Representation rep = Representation::automatic);

/// Marginal scores M_j = (1/m) sum_i y_i^2 a_ij^2 (the diagonal-thresholding statistic).
Vector marginal_scores(const SensingMatrix& A, const Vector& y);

/// Top-s marginal support, power steps on (1/m) sum_i y_i^2 a_iS a_iS^T, scaled by sqrt(mean y^2).
InitResult copram_init(const MatrixHandle& A, const Vector& y, Index s, int power_steps = kBaselinePowerSteps);

/// Top-s marginal support, then power steps on
/// (1/m) sum_{i in I} (y_i^2 / ||a_iS||^2) a_iS a_iS^T with I the ceil(m/6) largest y_i.
InitResult sparta_init(const MatrixHandle& A, const Vector& y, Index s, int power_steps = kBaselinePowerSteps);

/// Size of the SPARTA selection set: ceil(m/6), or all of m when m < 6.
Index sparta_selection_size(Index m);

/// Operates on z = y^2. Support = {j : M_j > phi^2 (1 + alpha sqrt(log(mn)/m))}, capped at the s
/// largest scores (never empty), then power steps on (1/m) sum_i z_i a_iS a_iS^T; scale phi = sqrt(mean z).
InitResult thwf_init(const MatrixHandle& A, const Vector& y, Index s, double alpha = 0.1,
                     int power_steps = kBaselinePowerSteps);

/// x0 = lambda g / ||g||, g ~ N(0, I_n).
InitResult random_init(double lambda, Index n, Rng& rng);

}  // namespace spinit
