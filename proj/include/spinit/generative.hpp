#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "spinit/spectral.hpp"

namespace spinit {

/// L-Lipschitz map from the latent ball B_2^k(r) into R^n.
class GenerativeModel {
 public:
  using Map = std::function<Vector(const Vector&)>;

  GenerativeModel(Index k, Index n, double radius, Map map, double lipschitz, std::optional<double> r_min);

  Index latent_dim() const { return k_; }
  Index output_dim() const { return n_; }
  double radius() const { return radius_; }
  double lipschitz_bound() const { return lipschitz_; }
  /// Norm floor defining the normalized-model domain; unset means "derive from the net".
  const std::optional<double>& r_min() const { return r_min_; }

  /// Throws for z outside the latent ball.
  Vector operator()(const Vector& z) const;

 private:
  Index k_;
  Index n_;
  double radius_;
  Map map_;
  double lipschitz_;
  std::optional<double> r_min_;
};

/// G(z) = B z with L = ||B||_2 and R_min = sigma_min(B) * eps_z.
GenerativeModel make_linear_generator(const Matrix& B, double radius, double eps_z = 1e-3);

/// G(z) = W2 max(W1 z, 0), L = ||W1||_2 ||W2||_2. R_min is left unset.
GenerativeModel make_relu_generator(const Matrix& W1, const Matrix& W2, double radius);

struct LatentNet {
  double delta = 0.0;
  std::vector<Vector> points;
};

inline constexpr Index kMaxLatentDim = 3;
inline constexpr double kMaxNetPoints = 1e7;

/// Axis grid of pitch delta/sqrt(k) kept inside the ball; grid points just
/// outside are pulled radially onto the sphere so every latent point has a
/// net point within delta/2.
LatentNet build_latent_net(const GenerativeModel& G, double delta);

/// Grid-count estimate used by the size guard.
double estimated_net_size(Index k, double radius, double delta);

/// Net images G(z) for every net point, in net order.
std::vector<Vector> net_images(const GenerativeModel& G, const LatentNet& net);

struct AmplitudeMinimizer {
  Vector q;
  Index net_index = 0;
  double objective = 0.0;  // ||y - |A q|||^2
  double tau = 0.0;        // slack relative to the net optimum (0 for the exact scan)
  double image_spacing = 0.0;  // L * delta / 2: distance bound from any range point to the net image
};

/// Exhaustive scan of ||y - |A G(z)|||^2 over the net; lowest index wins ties.
AmplitudeMinimizer brute_force_amplitude_min(const GenerativeModel& G, const LatentNet& net, const SensingMatrix& A,
                                             const Vector& y);

double amplitude_loss(const SensingMatrix& A, const Vector& y, const Vector& w);

/// Closest net image point to x; lowest index wins ties.
Vector range_projection(const GenerativeModel& G, const LatentNet& net, const Vector& x);

struct GenerativeInit {
  Vector xhat;
  Vector x0;
  double lambda = 0.0;
  double objective = 0.0;
  Index net_index = 0;
  double r_min = 0.0;
  Index candidates = 0;  // net points with ||G(z)|| > R_min
};

/// Default R_min: 1e-3 times the median image norm over the net.
double default_r_min(const std::vector<Vector>& images);

/// Maximizes w^T V w over normalized net images G(z)/||G(z)|| with ||G(z)|| > R_min;
/// x0 = lambda * xhat.
GenerativeInit generative_spectral_init(const GenerativeModel& G, const LatentNet& net, const MatrixHandle& A,
                                        const Vector& y, const TruncationBand& band);

}  // namespace spinit
