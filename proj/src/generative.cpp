#include "spinit/generative.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace spinit {

namespace {

double spectral_norm(const Matrix& M) {
  const Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues()(0);
}

// Volume of the k-ball of radius rho, k <= 3.
double ball_volume(Index k, double rho) {
  switch (k) {
    case 1: return 2.0 * rho;
    case 2: return std::numbers::pi * rho * rho;
    case 3: return 4.0 / 3.0 * std::numbers::pi * rho * rho * rho;
    default: throw std::invalid_argument("ball_volume: k must be 1, 2 or 3");
  }
}

}  // namespace

GenerativeModel::GenerativeModel(Index k, Index n, double radius, Map map, double lipschitz,
                                 std::optional<double> r_min)
    : k_(k), n_(n), radius_(radius), map_(std::move(map)), lipschitz_(lipschitz), r_min_(r_min) {
  if (k_ < 1 || n_ < 1) throw std::invalid_argument("GenerativeModel: dimensions must be >= 1");
  if (!(radius_ > 0.0)) throw std::invalid_argument("GenerativeModel: radius must be > 0");
  if (!(lipschitz_ >= 0.0) || !std::isfinite(lipschitz_))
    throw std::invalid_argument("GenerativeModel: Lipschitz bound must be finite and >= 0");
  if (r_min_ && !(*r_min_ >= 0.0)) throw std::invalid_argument("GenerativeModel: R_min must be >= 0");
}

Vector GenerativeModel::operator()(const Vector& z) const {
  if (z.size() != k_) throw std::invalid_argument("GenerativeModel: latent dimension mismatch");
  // Grid points are projected onto the sphere, so allow rounding at the boundary.
  if (z.norm() > radius_ * (1.0 + 1e-12)) throw std::invalid_argument("GenerativeModel: latent point outside the ball");
  return map_(z);
}

GenerativeModel make_linear_generator(const Matrix& B, double radius, double eps_z) {
  if (B.cols() < 1 || B.rows() < B.cols()) throw std::invalid_argument("make_linear_generator: need n >= k >= 1");
  if (B.isZero(0.0)) throw std::invalid_argument("make_linear_generator: zero matrix");
  const Eigen::JacobiSVD<Matrix> svd(B);
  const double lip = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  return GenerativeModel(B.cols(), B.rows(), radius, [B](const Vector& z) -> Vector { return B * z; }, lip,
                         smin * eps_z);
}

GenerativeModel make_relu_generator(const Matrix& W1, const Matrix& W2, double radius) {
  if (W1.rows() < 1 || W1.cols() < 1) throw std::invalid_argument("make_relu_generator: empty first layer");
  if (W2.cols() != W1.rows()) throw std::invalid_argument("make_relu_generator: layer shapes do not chain");
  const double lip = spectral_norm(W1) * spectral_norm(W2);
  return GenerativeModel(
      W1.cols(), W2.rows(), radius,
      [W1, W2](const Vector& z) -> Vector { return W2 * (W1 * z).cwiseMax(0.0); }, lip, std::nullopt);
}

double estimated_net_size(Index k, double radius, double delta) {
  const double pitch = delta / std::sqrt(static_cast<double>(k));
  return ball_volume(k, radius + delta / 2.0) / std::pow(pitch, static_cast<double>(k));
}

LatentNet build_latent_net(const GenerativeModel& G, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("build_latent_net: delta must be > 0");
  const Index k = G.latent_dim();
  if (k > kMaxLatentDim) throw std::invalid_argument("build_latent_net: latent dimension above 3 is not supported");
  const double r = G.radius();
  const double est = estimated_net_size(k, r, delta);
  if (est > kMaxNetPoints) {
    std::ostringstream msg;
    msg << "build_latent_net: estimated " << est << " net points exceeds the limit of " << kMaxNetPoints;
    throw std::invalid_argument(msg.str());
  }

  const double pitch = delta / std::sqrt(static_cast<double>(k));
  const double reach = r + delta / 2.0;
  const auto half = static_cast<Index>(std::floor(reach / pitch));
  const Index side = 2 * half + 1;

  LatentNet net;
  net.delta = delta;
  Index total = 1;
  for (Index d = 0; d < k; ++d) total *= side;
  Vector g(k);
  for (Index flat = 0; flat < total; ++flat) {
    Index rem = flat;
    for (Index d = k - 1; d >= 0; --d) {
      g[d] = static_cast<double>(rem % side - half) * pitch;
      rem /= side;
    }
    const double nrm = g.norm();
    if (nrm <= r) {
      net.points.push_back(g);
    } else if (nrm <= reach) {
      net.points.push_back(g * (r / nrm));
    }
  }
  return net;
}

std::vector<Vector> net_images(const GenerativeModel& G, const LatentNet& net) {
  std::vector<Vector> images;
  images.reserve(net.points.size());
  for (const Vector& z : net.points) images.push_back(G(z));
  return images;
}

double amplitude_loss(const SensingMatrix& A, const Vector& y, const Vector& w) {
  return (y - (A.entries() * w).cwiseAbs()).squaredNorm();
}

AmplitudeMinimizer brute_force_amplitude_min(const GenerativeModel& G, const LatentNet& net, const SensingMatrix& A,
                                             const Vector& y) {
  if (net.points.empty()) throw std::invalid_argument("brute_force_amplitude_min: empty net");
  if (A.cols() != G.output_dim() || y.size() != A.rows())
    throw std::invalid_argument("brute_force_amplitude_min: dimension mismatch");
  AmplitudeMinimizer best;
  best.objective = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < net.points.size(); ++i) {
    Vector w = G(net.points[i]);
    const double f = amplitude_loss(A, y, w);
    if (f < best.objective) {
      best.objective = f;
      best.q = std::move(w);
      best.net_index = static_cast<Index>(i);
    }
  }
  best.tau = 0.0;
  best.image_spacing = G.lipschitz_bound() * net.delta / 2.0;
  return best;
}

Vector range_projection(const GenerativeModel& G, const LatentNet& net, const Vector& x) {
  if (net.points.empty()) throw std::invalid_argument("range_projection: empty net");
  if (x.size() != G.output_dim()) throw std::invalid_argument("range_projection: dimension mismatch");
  Vector best;
  double best_d = std::numeric_limits<double>::infinity();
  for (const Vector& z : net.points) {
    Vector w = G(z);
    const double d = (x - w).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = std::move(w);
    }
  }
  return best;
}

double default_r_min(const std::vector<Vector>& images) {
  if (images.empty()) throw std::invalid_argument("default_r_min: no images");
  std::vector<double> norms;
  norms.reserve(images.size());
  for (const Vector& w : images) norms.push_back(w.norm());
  const auto mid = norms.begin() + static_cast<std::ptrdiff_t>(norms.size() / 2);
  std::nth_element(norms.begin(), mid, norms.end());
  return 1e-3 * *mid;
}

GenerativeInit generative_spectral_init(const GenerativeModel& G, const LatentNet& net, const MatrixHandle& A,
                                        const Vector& y, const TruncationBand& band) {
  if (net.points.empty()) throw std::invalid_argument("generative_spectral_init: empty net");
  if (!A || A->cols() != G.output_dim()) throw std::invalid_argument("generative_spectral_init: dimension mismatch");
  const std::vector<Vector> images = net_images(G, net);
  const double r_min = G.r_min() ? *G.r_min() : default_r_min(images);
  const WeightedOperator wop = build_truncated_operator(A, y, band, Representation::dense);

  GenerativeInit out;
  out.r_min = r_min;
  out.lambda = wop.lambda;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < images.size(); ++i) {
    const double nrm = images[i].norm();
    if (!(nrm > r_min)) continue;
    ++out.candidates;
    const Vector w = images[i] / nrm;
    const double q = wop.op.quadratic_form(w);
    if (q > best) {
      best = q;
      out.xhat = w;
      out.net_index = static_cast<Index>(i);
    }
  }
  if (out.candidates == 0)
    throw std::invalid_argument("generative_spectral_init: invalid configuration, every net point is below R_min");
  out.objective = best;
  out.x0 = out.lambda * out.xhat;
  return out;
}

}  // namespace spinit
