// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "spinit/experiment.hpp"
#include "spinit/selftest.hpp"

using namespace spinit;

namespace {

struct Verdict {
  bool passed = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

int g_failures = 0;

void run_criterion(int id, const std::string& title, double limit_s, const std::function<Verdict()>& body) {
  const auto t0 = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool in_time = secs < limit_s;
  const bool ok = v.passed && in_time;
  if (!ok) ++g_failures;
  std::printf("[%s] %d. %s | %s | %.1f s (limit %.0f s%s)\n", ok ? "PASS" : "FAIL", id, title.c_str(),
              v.detail.c_str(), secs, limit_s, in_time ? "" : ", exceeded");
  std::fflush(stdout);
}

// mean relative error keyed by (m, s, sigma, method)
using Key = std::tuple<Index, Index, double, std::string>;

std::map<Key, SummaryRow> by_key(const std::vector<TrialRecord>& records) {
  std::map<Key, SummaryRow> out;
  for (const SummaryRow& r : summarize(records)) out[{r.m, r.s, r.sigma, r.method}] = r;
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

Verdict lambda_concentration() {
  constexpr int kTrials = 500;
  constexpr Index n = 1000;
  constexpr Index m = 1000;
  int inside = 0;
  double worst = 0.0;
  for (int t = 0; t < kTrials; ++t) {
    const std::uint64_t seed = trial_seed(11, n, 10, t);
    Rng srng = make_rng(seed, Stream::signal);
    const SparseSignal x = gen_sparse_signal(n, 10, srng);
    const MatrixHandle A = gen_sensing_matrix(m, n, stream_seed(seed, Stream::matrix));
    Rng nrng = make_rng(seed, Stream::noise);
    const MeasurementSet ms = measure(A, x, NoiseSpec(0.0), nrng);
    const double dev = std::abs(estimate_norm(ms.y()).lambda / x.values().norm() - 1.0);
    worst = std::max(worst, dev);
    if (dev < 0.1) ++inside;
  }
  const double frac = static_cast<double>(inside) / kTrials;
  return {frac >= 0.99, "|lambda/||x|| - 1| < 0.1 in " + fmt(frac) + " of 500 trials (need 0.99), max dev " + fmt(worst)};
}

Verdict population_matrix() {
  constexpr Index n = 5;
  constexpr Index m = 1000000;
  Vector x = Vector::Zero(n);
  x[0] = 2.0;
  const MatrixHandle A = gen_sensing_matrix(m, n, stream_seed(12, Stream::matrix));
  Rng nrng = make_rng(12, Stream::noise);
  const MeasurementSet ms = measure(A, x, NoiseSpec(0.0), nrng);
  const TruncationBand band(1.0, 5.0);
  const Matrix V = build_truncated_operator(A, ms.y(), band, Representation::dense).op.to_dense();
  const PopulationCoefficients pc = population_coefficients(band);
  Matrix expected = 2.0 * pc.gamma0 * Matrix::Identity(n, n);
  expected(0, 0) += 2.0 * pc.beta0;
  const Eigen::SelfAdjointEigenSolver<Matrix> es(V - expected, Eigen::EigenvaluesOnly);
  const double gap = es.eigenvalues().cwiseAbs().maxCoeff();
  const bool coeffs_ok = std::abs(pc.gamma0 - 0.48394) < 5e-6 && std::abs(pc.beta0 - 0.96781) < 5e-6;
  return {gap <= 0.02 && coeffs_ok, "||V - 2(g0 I + b0 e1e1')|| = " + fmt(gap) + " (need <= 0.02), (g0, b0) = (" +
                                        std::to_string(pc.gamma0) + ", " + std::to_string(pc.beta0) + ")"};
}

Verdict figure1_ordering() {
  ExperimentConfig cfg = default_config(ExperimentKind::vary_m);
  cfg.s_grid = {10};
  cfg.m_grid = {500, 1500, 2000, 2500, 3000};
  cfg.trials = 50;
  const auto rows = by_key(run_experiment(cfg).records);
  bool ok = true;
  std::ostringstream os;
  for (Index m : {1500, 2000, 2500, 3000}) {
    const double ours = rows.at({m, 10, 0.0, "pri_spca"}).mean_error;
    double best_other = 1e300;
    for (const char* other : {"pri_spca_nt", "sparta", "copram", "thwf"})
      best_other = std::min(best_other, rows.at({m, 10, 0.0, other}).mean_error);
    ok = ok && ours <= best_other;
    os << "m=" << m << ": " << fmt(ours) << " vs best baseline " << fmt(best_other) << "; ";
  }
  const double at500 = rows.at({500, 10, 0.0, "pri_spca"}).mean_error;
  const double at3000 = rows.at({3000, 10, 0.0, "pri_spca"}).mean_error;
  ok = ok && at3000 < at500;
  os << "trend " << fmt(at500) << " -> " << fmt(at3000);
  return {ok, os.str()};
}

Verdict figure2_ordering() {
  ExperimentConfig cfg = default_config(ExperimentKind::vary_s);
  cfg.s_grid = {5, 10, 20};
  cfg.m_grid = {2000};
  cfg.trials = 50;
  const auto rows = by_key(run_experiment(cfg).records);
  bool ok = true;
  std::ostringstream os;
  for (Index s : {5, 10, 20}) {
    const double ours = rows.at({2000, s, 0.0, "pri_spca"}).mean_error;
    double best_other = 1e300;
    for (const char* other : {"pri_spca_nt", "sparta", "copram", "thwf"})
      best_other = std::min(best_other, rows.at({2000, s, 0.0, other}).mean_error);
    ok = ok && ours <= best_other;
    os << "s=" << s << ": " << fmt(ours) << " vs " << fmt(best_other) << "; ";
  }
  return {ok, os.str()};
}

Verdict figure3_noisy() {
  ExperimentConfig cfg = default_config(ExperimentKind::vary_sigma);
  cfg.s_grid = {10};
  cfg.m_grid = {3000};
  cfg.sigma_grid = {0.1, 0.3};
  cfg.methods = {Method::pri_spca, Method::sparta, Method::copram};
  cfg.trials = 50;
  const auto rows = by_key(run_experiment(cfg).records);
  bool ok = true;
  std::ostringstream os;
  for (double sigma : {0.1, 0.3}) {
    const double ours = rows.at({3000, 10, sigma, "pri_spca"}).mean_error;
    const double sparta = rows.at({3000, 10, sigma, "sparta"}).mean_error;
    const double copram = rows.at({3000, 10, sigma, "copram"}).mean_error;
    ok = ok && ours <= sparta && ours <= copram;
    os << "sigma=" << sigma << ": " << fmt(ours) << " vs sparta " << fmt(sparta) << ", copram " << fmt(copram) << "; ";
  }
  return {ok, os.str()};
}

Verdict success_rate() {
  ExperimentConfig cfg = default_config(ExperimentKind::success_rate);
  cfg.s_grid = {10};
  cfg.m_grid = {200, 400, 600, 800, 1000};
  cfg.methods = {Method::pri_spca, Method::random};
  cfg.refinement.T = 100;
  cfg.trials = 50;
  cfg.repeats = 1;
  const auto rows = by_key(run_experiment(cfg).records);
  std::vector<double> rate;
  std::ostringstream os;
  os << "pri_spca rates";
  for (Index m : cfg.m_grid) {
    rate.push_back(*rows.at({m, 10, 0.0, "pri_spca"}).success_rate);
    os << ' ' << fmt(rate.back());
  }
  int inversions = 0;
  bool small = true;
  for (std::size_t i = 1; i < rate.size(); ++i) {
    if (rate[i] < rate[i - 1]) {
      ++inversions;
      small = small && rate[i - 1] - rate[i] <= 0.05;
    }
  }
  const double random600 = *rows.at({600, 10, 0.0, "random"}).success_rate;
  const bool ok = inversions <= 1 && small && rate.back() >= 0.9 && random600 < rate[2];
  os << "; inversions " << inversions << "; random at m=600 " << fmt(random600);
  return {ok, os.str()};
}

std::vector<TrialRecord> generative_records() {
  ExperimentConfig cfg = default_config(ExperimentKind::generative_toy);
  cfg.m_grid = {50, 200, 400};
  cfg.trials = 50;
  cfg.net_delta = 0.05;
  cfg.band = TruncationBand(1.0, 5.0);
  return run_experiment(cfg).records;
}

Verdict generative_amplitude() {
  int within = 0;
  int total = 0;
  for (const TrialRecord& r : generative_records()) {
    if (r.m != 200 || r.method != kGenAmplitudeTag) continue;
    ++total;
    if (r.relative_error <= 0.15) ++within;
  }
  const double frac = total ? static_cast<double>(within) / total : 0.0;
  return {total == 50 && frac >= 0.9, "net minimizer within 0.15||x|| in " + fmt(frac) + " of " +
                                          std::to_string(total) + " trials (need 0.9)"};
}

Verdict generative_spectral() {
  int within = 0;
  int total = 0;
  double sum50 = 0.0;
  double sum400 = 0.0;
  for (const TrialRecord& r : generative_records()) {
    if (r.method != kGenSpectralTag) continue;
    if (r.m == 50) sum50 += r.relative_error;
    if (r.m == 400) {
      sum400 += r.relative_error;
      ++total;
      if (r.relative_error <= 0.3) ++within;
    }
  }
  const double frac = total ? static_cast<double>(within) / total : 0.0;
  const bool ok = total == 50 && frac >= 0.9 && sum400 <= sum50;
  return {ok, "direction error <= 0.3 in " + fmt(frac) + " of " + std::to_string(total) + " trials; mean error m=50 " +
                  fmt(sum50 / 50) + " -> m=400 " + fmt(sum400 / 50)};
}

Verdict property_suites() {
  const std::vector<CheckOutcome> checks = run_property_suite(1);
  int failed = 0;
  std::ostringstream os;
  for (const CheckOutcome& c : checks) {
    if (c.passed) continue;
    ++failed;
    os << c.name << " [" << c.detail << "]; ";
  }
  os << checks.size() - static_cast<std::size_t>(failed) << "/" << checks.size() << " checks pass";
  return {failed == 0, os.str()};
}

}  // namespace

int main() {
  run_criterion(1, "lambda concentration", 10, lambda_concentration);
  run_criterion(2, "population matrix", 30, population_matrix);
  run_criterion(3, "vary-m ordering", 15 * 60, figure1_ordering);
  run_criterion(4, "vary-s ordering", 10 * 60, figure2_ordering);
  run_criterion(5, "noisy comparison", 10 * 60, figure3_noisy);
  run_criterion(6, "success rate", 30 * 60, success_rate);
  run_criterion(7, "generative net minimizer", 5 * 60, generative_amplitude);
  run_criterion(8, "generative spectral estimate", 5 * 60, generative_spectral);
  run_criterion(9, "property suites", 2 * 60, property_suites);
  std::printf("%d criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
