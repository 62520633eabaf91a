#include "spinit/selftest.hpp"

#include <bit>
#include <cmath>
#include <functional>
#include <sstream>

#include "spinit/experiment.hpp"
#include "spinit/init_methods.hpp"

namespace spinit {

namespace {

Matrix random_psd(Index n, Rng& rng) {
  StandardNormal normal(0.0, 1.0);
  Matrix B(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) B(i, j) = normal(rng);
  Matrix V = B * B.transpose() / static_cast<double>(n);
  return 0.5 * (V + V.transpose());
}

Vector random_vector(Index n, Rng& rng) {
  StandardNormal normal(0.0, 1.0);
  Vector v(n);
  for (Index j = 0; j < n; ++j) v[j] = normal(rng);
  return v;
}

CheckOutcome check(std::string name, const std::function<std::string()>& body) {
  CheckOutcome out;
  out.name = std::move(name);
  try {
    out.detail = body();
    out.passed = out.detail.rfind("FAIL", 0) != 0;
  } catch (const std::exception& e) {
    out.passed = false;
    out.detail = std::string("FAIL exception: ") + e.what();
  }
  return out;
}

struct Instance {
  SparseSignal x;
  MatrixHandle A;
  Vector eta;
};

Instance make_instance(std::uint64_t seed, Index n, Index s, Index m, double sigma) {
  Rng srng = make_rng(seed, Stream::signal);
  SparseSignal x = gen_sparse_signal(n, s, srng);
  MatrixHandle A = gen_sensing_matrix(m, n, stream_seed(seed, Stream::matrix));
  Rng nrng = make_rng(seed, Stream::noise);
  const MeasurementSet ms = measure(A, x, NoiseSpec(sigma), nrng);
  return {std::move(x), std::move(A), ms.eta()};
}

std::string csv_without_timing(const std::vector<TrialRecord>& records) {
  std::ostringstream os;
  write_records_csv(os, records, false);
  return os.str();
}

}  // namespace

double exhaustive_sparse_pca(const Matrix& V, Index s) {
  const Index n = V.rows();
  if (n > 24) throw std::invalid_argument("exhaustive_sparse_pca: n too large");
  s = std::min(s, n);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<Index> idx;
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    if (std::popcount(mask) != s) continue;
    idx.clear();
    for (Index j = 0; j < n; ++j)
      if (mask & (1U << j)) idx.push_back(j);
    Matrix sub(s, s);
    for (Index a = 0; a < s; ++a)
      for (Index b = 0; b < s; ++b) sub(a, b) = V(idx[a], idx[b]);
    const Eigen::SelfAdjointEigenSolver<Matrix> es(sub, Eigen::EigenvaluesOnly);
    best = std::max(best, es.eigenvalues()(s - 1));
  }
  return best;
}

std::vector<CheckOutcome> run_property_suite(std::uint64_t seed) {
  std::vector<CheckOutcome> out;

  out.push_back(check("measurement sign invariance", [&] {
    for (int t = 0; t < 5; ++t) {
      const std::uint64_t ts = derive_seed(seed, {1, static_cast<std::uint64_t>(t)});
      Rng srng = make_rng(ts, Stream::signal);
      const SparseSignal x = gen_sparse_signal(100, 7, srng);
      const MatrixHandle A = gen_sensing_matrix(300, 100, stream_seed(ts, Stream::matrix));
      for (double sigma : {0.0, 0.3}) {
        Rng n1 = make_rng(ts, Stream::noise);
        Rng n2 = make_rng(ts, Stream::noise);
        const MeasurementSet a = measure(A, x, NoiseSpec(sigma), n1);
        const MeasurementSet b = measure(A, x.negated(), NoiseSpec(sigma), n2);
        if (a.y() != b.y()) return std::string("FAIL y(x) != y(-x)");
        if (sigma == 0.0 && a.y().minCoeff() < 0.0) return std::string("FAIL negative noiseless amplitude");
      }
    }
    return std::string("5 instances, sigma in {0, 0.3}: identical y");
  }));

  out.push_back(check("initializer sign invariance", [&] {
    const Index n = 200;
    const Index s = 5;
    for (int t = 0; t < 3; ++t) {
      const Instance inst = make_instance(derive_seed(seed, {2, static_cast<std::uint64_t>(t)}), n, s, 800, 0.05);
      const MeasurementSet pos(inst.A, inst.x.values(), inst.eta);
      const MeasurementSet neg(inst.A, -inst.x.values(), inst.eta);
      SpcaConfig cfg;
      cfg.s = s;
      for (SpcaSolver solver : {SpcaSolver::grqi, SpcaSolver::tpower}) {
        cfg.solver = solver;
        if (pri_spca(inst.A, pos.y(), TruncationBand::standard(), cfg).x0 !=
            pri_spca(inst.A, neg.y(), TruncationBand::standard(), cfg).x0)
          return std::string("FAIL pri_spca");
        if (pri_spca_nt(inst.A, pos.y(), cfg).x0 != pri_spca_nt(inst.A, neg.y(), cfg).x0)
          return std::string("FAIL pri_spca_nt");
      }
      if (sparta_init(inst.A, pos.y(), s).x0 != sparta_init(inst.A, neg.y(), s).x0) return std::string("FAIL sparta");
      if (copram_init(inst.A, pos.y(), s).x0 != copram_init(inst.A, neg.y(), s).x0) return std::string("FAIL copram");
      if (thwf_init(inst.A, pos.y(), s).x0 != thwf_init(inst.A, neg.y(), s).x0) return std::string("FAIL thwf");
      Rng r1(7);
      Rng r2(7);
      if (random_init(estimate_norm(pos.y()).lambda, n, r1).x0 != random_init(estimate_norm(neg.y()).lambda, n, r2).x0)
        return std::string("FAIL random");
    }
    return std::string("3 noisy instances, 6 initializers: bit-identical outputs");
  }));

  out.push_back(check("truncated operator symmetric and PSD", [&] {
    const Instance inst = make_instance(derive_seed(seed, {3}), 50, 5, 400, 0.2);
    const MeasurementSet ms(inst.A, inst.x.values(), inst.eta);
    Rng rng(derive_seed(seed, {3, 1}));
    double worst_sym = 0.0;
    double worst_psd = std::numeric_limits<double>::infinity();
    for (Representation rep : {Representation::dense, Representation::matrix_free}) {
      const SpectralOperator op = build_truncated_operator(inst.A, ms.y(), TruncationBand::standard(), rep).op;
      for (int t = 0; t < 50; ++t) {
        const Vector w = random_vector(50, rng);
        const Vector v = random_vector(50, rng);
        const double a = op.apply(w).dot(v);
        const double b = w.dot(op.apply(v));
        worst_sym = std::max(worst_sym, std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}));
        worst_psd = std::min(worst_psd, op.quadratic_form(w) / w.squaredNorm());
      }
    }
    std::ostringstream os;
    os << (worst_sym <= 1e-10 && worst_psd >= -1e-10 ? "" : "FAIL ") << "max symmetry defect " << worst_sym
       << ", min Rayleigh quotient " << worst_psd;
    return os.str();
  }));

  out.push_back(check("dense and matrix-free agree", [&] {
    const Instance inst = make_instance(derive_seed(seed, {4}), 80, 6, 500, 0.1);
    const MeasurementSet ms(inst.A, inst.x.values(), inst.eta);
    const auto dense = build_truncated_operator(inst.A, ms.y(), TruncationBand::standard(), Representation::dense).op;
    const auto mf = build_truncated_operator(inst.A, ms.y(), TruncationBand::standard(), Representation::matrix_free).op;
    const auto nt_dense = build_untruncated_operator(inst.A, ms.y(), Representation::dense).op;
    const auto nt_mf = build_untruncated_operator(inst.A, ms.y(), Representation::matrix_free).op;
    Rng rng(derive_seed(seed, {4, 1}));
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const Vector w = random_vector(80, rng);
      worst = std::max(worst, (dense.apply(w) - mf.apply(w)).norm() / dense.apply(w).norm());
      worst = std::max(worst, (nt_dense.apply(w) - nt_mf.apply(w)).norm() / nt_dense.apply(w).norm());
    }
    std::ostringstream os;
    os << (worst <= 1e-8 ? "" : "FAIL ") << "max relative difference " << worst;
    return os.str();
  }));

  out.push_back(check("tpower objective is monotone", [&] {
    Rng rng(derive_seed(seed, {5}));
    int runs = 0;
    for (int t = 0; t < 50; ++t) {
      const SpectralOperator op = SpectralOperator::from_dense(random_psd(12, rng));
      SpcaConfig cfg;
      cfg.s = 1 + t % 6;
      cfg.solver = SpcaSolver::tpower;
      const SpcaResult r = tpower(op, cfg, start_vector(op).vector);
      for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
        if (r.objective_trace[i] < r.objective_trace[i - 1] - 1e-10 * std::abs(r.objective_trace[i - 1]))
          return std::string("FAIL objective decreased");
      ++runs;
    }
    return std::to_string(runs) + " random PSD runs, nondecreasing traces";
  }));

  out.push_back(check("SPCA output feasibility", [&] {
    Rng rng(derive_seed(seed, {6}));
    for (int t = 0; t < 100; ++t) {
      const SpectralOperator op = SpectralOperator::from_dense(random_psd(10, rng));
      SpcaConfig cfg;
      cfg.s = 1 + t % 10;
      for (SpcaSolver solver : {SpcaSolver::tpower, SpcaSolver::grqi}) {
        cfg.solver = solver;
        const SpcaResult r = solve_spca(op, cfg, random_vector(10, rng));
        if (std::abs(r.direction.norm() - 1.0) > 1e-10) return std::string("FAIL direction not unit norm");
        if ((r.direction.array() != 0.0).count() > cfg.s) return std::string("FAIL too many nonzeros");
      }
    }
    return std::string("200 solves: unit norm, <= s nonzeros");
  }));

  out.push_back(check("exhaustive-support SPCA oracle", [&] {
    Rng rng(derive_seed(seed, {7}));
    int hits_tpower = 0;
    int hits_grqi = 0;
    constexpr int kInstances = 100;
    for (int t = 0; t < kInstances; ++t) {
      const Matrix V = random_psd(8, rng);
      const SpectralOperator op = SpectralOperator::from_dense(V);
      const double best = exhaustive_sparse_pca(V, 3);
      SpcaConfig cfg;
      cfg.s = 3;
      const Vector start = start_vector(op).vector;
      cfg.solver = SpcaSolver::tpower;
      if (best - tpower(op, cfg, start).objective <= 1e-6) ++hits_tpower;
      cfg.solver = SpcaSolver::grqi;
      if (best - grqi(op, cfg, start).objective <= 1e-6) ++hits_grqi;
    }
    std::ostringstream os;
    const bool ok = hits_tpower >= 80 && hits_grqi >= 80;
    os << (ok ? "" : "FAIL ") << "gap <= 1e-6 on tpower " << hits_tpower << "/" << kInstances << ", grqi " << hits_grqi
       << "/" << kInstances;
    return os.str();
  }));

  out.push_back(check("CSV round trip", [&] {
    ExperimentConfig cfg = default_config(ExperimentKind::success_rate);
    cfg.n = 60;
    cfg.s_grid = {3};
    cfg.m_grid = {120};
    cfg.trials = 2;
    cfg.repeats = 2;
    cfg.refinement.T = 5;
    cfg.master_seed = seed;
    std::vector<TrialRecord> records = run_experiment(cfg).records;
    records.front().budget = 0.12;
    std::stringstream ss;
    write_records_csv(ss, records);
    if (read_records_csv(ss) != records) return std::string("FAIL parse(emit(records)) != records");
    return std::to_string(records.size()) + " records round-tripped";
  }));

  out.push_back(check("run determinism", [&] {
    ExperimentConfig cfg = default_config(ExperimentKind::vary_m);
    cfg.n = 80;
    cfg.s_grid = {4};
    cfg.m_grid = {150, 300};
    cfg.trials = 3;
    cfg.master_seed = seed;
    cfg.workers = 1;
    const std::string a = csv_without_timing(run_experiment(cfg).records);
    cfg.workers = 3;
    const std::string b = csv_without_timing(run_experiment(cfg).records);
    if (a != b) return std::string("FAIL reruns differ");
    return std::string("two runs (1 and 3 workers) byte-identical without timing columns");
  }));

  return out;
}

}  // namespace spinit
