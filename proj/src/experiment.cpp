#include "spinit/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "spinit/generative.hpp"

namespace spinit {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 6> kKindNames = {{
    {ExperimentKind::vary_m, "vary_m"},
    {ExperimentKind::vary_s, "vary_s"},
    {ExperimentKind::vary_sigma, "vary_sigma"},
    {ExperimentKind::success_rate, "success_rate"},
    {ExperimentKind::time_budget, "time_budget"},
    {ExperimentKind::generative_toy, "generative_toy"},
}};

struct GridPoint {
  Index m;
  Index s;
  double sigma;
};

std::vector<GridPoint> expand_grid(const ExperimentConfig& cfg) {
  std::vector<GridPoint> grid;
  if (cfg.kind == ExperimentKind::generative_toy) {
    for (Index m : cfg.m_grid)
      for (double sigma : cfg.sigma_grid) grid.push_back({m, cfg.latent_dim, sigma});
    return grid;
  }
  for (Index s : cfg.s_grid)
    for (Index m : cfg.m_grid)
      for (double sigma : cfg.sigma_grid) grid.push_back({m, s, sigma});
  return grid;
}

// Sort key that fixes the output order independently of worker scheduling.
struct OrderedRecord {
  std::size_t grid;
  std::size_t method;
  std::size_t budget;
  int trial;
  TrialRecord record;
};

struct TaskOutput {
  std::vector<OrderedRecord> records;
  std::vector<SkippedRun> skipped;
};

struct TrialData {
  std::uint64_t seed;
  Vector x;
  MatrixHandle A;
  Vector y;
  std::uint64_t checksum;
};

TrialData make_sparse_trial(const ExperimentConfig& cfg, const GridPoint& gp, int trial) {
  TrialData d;
  d.seed = trial_seed(cfg.master_seed, cfg.n, gp.s, trial);
  Rng signal_rng = make_rng(d.seed, Stream::signal);
  const SparseSignal x = gen_sparse_signal(cfg.n, gp.s, signal_rng);
  d.A = gen_sensing_matrix(gp.m, cfg.n, stream_seed(d.seed, Stream::matrix));
  Rng noise_rng = make_rng(d.seed, Stream::noise);
  const MeasurementSet ms = measure(d.A, x, NoiseSpec(gp.sigma), noise_rng);
  d.x = x.values();
  d.y = ms.y();
  d.checksum = checksum({&d.x, &d.y});
  return d;
}

InitResult run_initializer(Method method, const ExperimentConfig& cfg, const TrialData& d, Index s) {
  SpcaConfig spca;
  spca.s = s;
  spca.solver = cfg.solver;
  switch (method) {
    case Method::pri_spca: return pri_spca(d.A, d.y, cfg.band, spca);
    case Method::pri_spca_nt: return pri_spca_nt(d.A, d.y, spca);
    case Method::sparta: return sparta_init(d.A, d.y, s);
    case Method::copram: return copram_init(d.A, d.y, s);
    case Method::thwf: return thwf_init(d.A, d.y, s);
    case Method::random: {
      const auto t0 = Clock::now();
      Rng rng = make_rng(d.seed, Stream::random_init);
      InitResult r = random_init(estimate_norm(d.y).lambda, cfg.n, rng);
      r.wall_time = seconds_since(t0);
      return r;
    }
  }
  throw std::logic_error("unknown method");
}

TrialRecord base_record(const ExperimentConfig& cfg, const GridPoint& gp, int trial, const TrialData& d,
                        std::string method) {
  TrialRecord r;
  r.kind = std::string(kind_name(cfg.kind));
  r.n = cfg.n;
  r.m = gp.m;
  r.s = gp.s;
  r.sigma = gp.sigma;
  r.method = std::move(method);
  r.trial_index = trial;
  r.block = trial / cfg.trials;
  r.seed = d.seed;
  r.data_checksum = d.checksum;
  return r;
}

TaskOutput run_sparse_task(const ExperimentConfig& cfg, std::size_t gi, const GridPoint& gp, int trial) {
  TaskOutput out;
  const TrialData d = make_sparse_trial(cfg, gp, trial);
  for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
    const Method method = cfg.methods[mi];
    const std::string tag(method_name(method));
    if (method == Method::thwf && gp.sigma > 0.0) {
      if (trial == 0) out.skipped.push_back({gp.m, gp.s, gp.sigma, tag, "thwf uses quadratic measurements"});
      continue;
    }
    const InitResult init = run_initializer(method, cfg, d, gp.s);
    const double init_err = relative_error(init.x0, d.x);

    if (cfg.kind == ExperimentKind::time_budget) {
      RefinementConfig rc = cfg.refinement;
      rc.s = gp.s;
      std::vector<double> times{init.wall_time};
      std::vector<double> errors{init_err};
      const auto t0 = Clock::now();
      copram_refine(*d.A, d.y, init.x0, rc, [&](int, const Vector& x) {
        times.push_back(init.wall_time + seconds_since(t0));
        errors.push_back(relative_error(x, d.x));
      });
      for (std::size_t bi = 0; bi < cfg.budgets.size(); ++bi) {
        const double b = cfg.budgets[bi];
        std::size_t best = 0;
        for (std::size_t i = 1; i < times.size(); ++i)
          if (std::abs(times[i] - b) < std::abs(times[best] - b)) best = i;
        TrialRecord r = base_record(cfg, gp, trial, d, tag);
        r.budget = b;
        r.relative_error = errors[best];
        r.init_error = init_err;
        r.success = errors[best] < kSuccessThreshold;
        r.init_time = init.wall_time;
        r.refine_time = times[best] - init.wall_time;
        out.records.push_back({gi, mi, bi, trial, std::move(r)});
      }
      continue;
    }

    TrialRecord r = base_record(cfg, gp, trial, d, tag);
    r.init_time = init.wall_time;
    if (cfg.refine) {
      RefinementConfig rc = cfg.refinement;
      rc.s = gp.s;
      const auto t0 = Clock::now();
      const RefinementResult refined = copram_refine(*d.A, d.y, init.x0, rc);
      r.refine_time = seconds_since(t0);
      r.init_error = init_err;
      r.relative_error = relative_error(refined.x, d.x);
      r.success = r.relative_error < kSuccessThreshold;
    } else {
      r.relative_error = init_err;
    }
    out.records.push_back({gi, mi, 0, trial, std::move(r)});
  }
  return out;
}

TaskOutput run_generative_task(const ExperimentConfig& cfg, const LatentNet& net, std::size_t gi, const GridPoint& gp,
                               int trial) {
  const Index k = cfg.latent_dim;
  const Index n = cfg.n;
  const std::uint64_t seed = trial_seed(cfg.master_seed, n, k, trial);

  Rng grng = make_rng(seed, Stream::generator);
  StandardNormal normal(0.0, 1.0);
  Matrix B(n, k);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < k; ++j) B(i, j) = normal(grng) / std::sqrt(static_cast<double>(n));
  // Latent point uniform on the shell r/2 <= ||z|| <= r.
  Vector z(k);
  do {
    for (Index j = 0; j < k; ++j) z[j] = normal(grng);
  } while (!(z.norm() > 0.0));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double inner = std::pow(0.5, static_cast<double>(k));
  const double radius = cfg.latent_radius * std::pow(inner + (1.0 - inner) * unif(grng), 1.0 / static_cast<double>(k));
  z *= radius / z.norm();

  const GenerativeModel G = make_linear_generator(B, cfg.latent_radius);
  TrialData d;
  d.seed = seed;
  d.x = G(z);
  d.A = gen_sensing_matrix(gp.m, n, stream_seed(seed, Stream::matrix));
  Rng noise_rng = make_rng(seed, Stream::noise);
  const MeasurementSet ms = measure(d.A, d.x, NoiseSpec(gp.sigma), noise_rng);
  d.y = ms.y();
  d.checksum = checksum({&d.x, &d.y});

  TaskOutput out;
  GridPoint point = gp;
  point.s = k;

  auto t0 = Clock::now();
  const AmplitudeMinimizer amp = brute_force_amplitude_min(G, net, *d.A, d.y);
  TrialRecord ra = base_record(cfg, point, trial, d, std::string(kGenAmplitudeTag));
  ra.init_time = seconds_since(t0);
  ra.relative_error = relative_error(amp.q, d.x);
  out.records.push_back({gi, 0, 0, trial, std::move(ra)});

  t0 = Clock::now();
  const GenerativeInit gsi = generative_spectral_init(G, net, d.A, d.y, cfg.band);
  TrialRecord rs = base_record(cfg, point, trial, d, std::string(kGenSpectralTag));
  rs.init_time = seconds_since(t0);
  // Direction error against the normalized signal.
  const Vector xbar = d.x / d.x.norm();
  rs.relative_error = relative_error(gsi.xhat, xbar);
  out.records.push_back({gi, 1, 0, trial, std::move(rs)});
  return out;
}

template <typename Task>
std::vector<TaskOutput> run_pool(std::size_t count, int workers, Task&& task) {
  std::vector<TaskOutput> outputs(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        outputs[i] = task(i);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  const auto nthreads = static_cast<std::size_t>(std::max(1, workers));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(nthreads, count); ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return outputs;
}

double round_grid_value(double v) { return std::round(v * 1e12) / 1e12; }

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("not a number: " + s);
  return v;
}

long long parse_integer(const std::string& s) {
  std::size_t used = 0;
  const long long v = std::stoll(s, &used);
  if (used != s.size()) throw std::invalid_argument("not an integer: " + s);
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw std::invalid_argument("not a boolean: " + s);
}

}  // namespace

std::string_view kind_name(ExperimentKind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "unknown";
}

std::optional<ExperimentKind> parse_kind(std::string_view name) {
  for (const auto& [kind, n] : kKindNames)
    if (n == name) return kind;
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  if (n < 1) throw std::invalid_argument("config: n must be >= 1");
  if (s_grid.empty() || m_grid.empty() || sigma_grid.empty()) throw std::invalid_argument("config: grids must be nonempty");
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (repeats < 1) throw std::invalid_argument("config: repeats must be >= 1");
  for (Index m : m_grid)
    if (m < 1) throw std::invalid_argument("config: m must be >= 1");
  for (double sigma : sigma_grid)
    if (!(sigma >= 0.0)) throw std::invalid_argument("config: sigma must be >= 0");
  if (kind == ExperimentKind::generative_toy) {
    if (latent_dim < 1 || latent_dim > kMaxLatentDim) throw std::invalid_argument("config: latent_dim must be in 1..3");
    if (latent_dim > n) throw std::invalid_argument("config: latent_dim must be <= n");
    if (!(latent_radius > 0.0) || !(net_delta > 0.0)) throw std::invalid_argument("config: radius and delta must be > 0");
    return;
  }
  for (Index s : s_grid)
    if (s < 1 || s > n) throw std::invalid_argument("config: need 1 <= s <= n");
  if (methods.empty()) throw std::invalid_argument("config: no methods selected");
  if (refine || kind == ExperimentKind::time_budget) {
    RefinementConfig rc = refinement;
    rc.validate();
    for (Index s : s_grid)
      for (Index m : m_grid)
        if (s > m) throw std::invalid_argument("config: refinement needs s <= m");
  }
  if (kind == ExperimentKind::success_rate && !refine)
    throw std::invalid_argument("config: success_rate requires refinement");
  if (kind == ExperimentKind::time_budget && budgets.empty())
    throw std::invalid_argument("config: time_budget requires a budget grid");
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  const std::vector<Method> spectral = {Method::pri_spca, Method::pri_spca_nt, Method::sparta, Method::copram,
                                        Method::thwf};
  switch (kind) {
    case ExperimentKind::vary_m:
      c.s_grid = {10, 20};
      c.m_grid = parse_index_grid("100:3000:100");
      c.methods = spectral;
      break;
    case ExperimentKind::vary_s:
      c.s_grid = parse_index_grid("5:50:5");
      c.m_grid = {1000, 2000};
      c.methods = spectral;
      break;
    case ExperimentKind::vary_sigma:
      c.s_grid = {10, 20};
      c.m_grid = {3000};
      c.sigma_grid = parse_real_grid("0.1:1:0.1");
      c.methods = {Method::pri_spca, Method::pri_spca_nt, Method::sparta, Method::copram};
      break;
    case ExperimentKind::success_rate:
      c.s_grid = {10, 20};
      c.m_grid = parse_index_grid("100:1000:50");
      c.methods = {Method::pri_spca, Method::pri_spca_nt, Method::sparta, Method::copram, Method::thwf,
                   Method::random};
      c.refine = true;
      c.repeats = 10;
      break;
    case ExperimentKind::time_budget:
      c.s_grid = {20};
      c.m_grid = {500};
      c.sigma_grid = {0.1, 0.2};
      c.methods = {Method::pri_spca, Method::pri_spca_nt, Method::sparta, Method::copram, Method::random};
      c.refine = true;
      c.repeats = 10;
      c.budgets = parse_real_grid("0.1:0.5:0.02");
      c.workers = 1;
      break;
    case ExperimentKind::generative_toy:
      c.n = 20;
      c.s_grid = {2};
      c.m_grid = {50, 100, 200, 400};
      c.latent_dim = 2;
      break;
  }
  return c;
}

double relative_error(const Vector& estimate, const Vector& x) {
  const double nx = x.norm();
  if (!(nx > 0.0)) throw std::invalid_argument("relative_error: zero signal");
  if (estimate.size() != x.size()) throw std::invalid_argument("relative_error: dimension mismatch");
  return std::min((x - estimate).norm(), (x + estimate).norm()) / nx;
}

double relative_error(const Vector& estimate, const SparseSignal& x) { return relative_error(estimate, x.values()); }

std::uint64_t trial_seed(std::uint64_t master, Index n, Index s, int trial_index) {
  return derive_seed(master, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(s),
                              static_cast<std::uint64_t>(trial_index)});
}

std::uint64_t checksum(std::initializer_list<const Vector*> parts) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Vector* v : parts) {
    for (Index i = 0; i < v->size(); ++i) {
      const auto bits = std::bit_cast<std::uint64_t>((*v)[i]);
      for (int b = 0; b < 8; ++b) {
        h ^= (bits >> (8 * b)) & 0xffU;
        h *= 0x100000001b3ULL;
      }
    }
  }
  return h;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<GridPoint> grid = expand_grid(cfg);
  const int total_trials = cfg.trials * cfg.repeats;
  const std::size_t task_count = grid.size() * static_cast<std::size_t>(total_trials);

  int workers = cfg.workers > 0 ? cfg.workers : static_cast<int>(std::thread::hardware_concurrency());
  if (cfg.kind == ExperimentKind::time_budget) workers = 1;

  std::optional<LatentNet> net;
  if (cfg.kind == ExperimentKind::generative_toy) {
    // The net lives in latent space, so one net serves every trial's generator.
    const GenerativeModel shape(cfg.latent_dim, cfg.n, cfg.latent_radius,
                                [n = cfg.n](const Vector&) -> Vector { return Vector::Zero(n); }, 0.0, 0.0);
    net = build_latent_net(shape, cfg.net_delta);
  }

  const auto task = [&](std::size_t i) {
    const std::size_t gi = i / static_cast<std::size_t>(total_trials);
    const int trial = static_cast<int>(i % static_cast<std::size_t>(total_trials));
    if (net) return run_generative_task(cfg, *net, gi, grid[gi], trial);
    return run_sparse_task(cfg, gi, grid[gi], trial);
  };
  std::vector<TaskOutput> outputs = run_pool(task_count, workers, task);

  std::vector<OrderedRecord> ordered;
  ExperimentResult result;
  for (TaskOutput& o : outputs) {
    for (OrderedRecord& r : o.records) ordered.push_back(std::move(r));
    for (SkippedRun& s : o.skipped) result.skipped.push_back(std::move(s));
  }
  std::sort(ordered.begin(), ordered.end(), [](const OrderedRecord& a, const OrderedRecord& b) {
    return std::tie(a.grid, a.method, a.budget, a.trial) < std::tie(b.grid, b.method, b.budget, b.trial);
  });
  result.records.reserve(ordered.size());
  for (OrderedRecord& r : ordered) result.records.push_back(std::move(r.record));
  return result;
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  using Key = std::tuple<std::string, Index, Index, Index, double, std::optional<double>, std::string>;
  struct Acc {
    SummaryRow row;
    std::map<int, std::pair<double, int>> error_blocks;
    std::map<int, std::pair<double, int>> success_blocks;
    double error_sum = 0.0;
    double success_sum = 0.0;
    int success_count = 0;
  };
  std::map<Key, std::size_t> index;
  std::vector<Acc> groups;
  for (const TrialRecord& r : records) {
    const Key key{r.kind, r.n, r.m, r.s, r.sigma, r.budget, r.method};
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, groups.size()).first;
      Acc acc;
      acc.row.kind = r.kind;
      acc.row.n = r.n;
      acc.row.m = r.m;
      acc.row.s = r.s;
      acc.row.sigma = r.sigma;
      acc.row.budget = r.budget;
      acc.row.method = r.method;
      groups.push_back(std::move(acc));
    }
    Acc& acc = groups[it->second];
    ++acc.row.count;
    acc.error_sum += r.relative_error;
    acc.row.mean_init_time += r.init_time;
    acc.row.mean_refine_time += r.refine_time;
    auto& eb = acc.error_blocks[r.block];
    eb.first += r.relative_error;
    ++eb.second;
    if (r.success) {
      const double v = *r.success ? 1.0 : 0.0;
      acc.success_sum += v;
      ++acc.success_count;
      auto& sb = acc.success_blocks[r.block];
      sb.first += v;
      ++sb.second;
    }
  }

  const auto block_std = [](const std::map<int, std::pair<double, int>>& blocks) {
    if (blocks.size() < 2) return 0.0;
    double mean = 0.0;
    for (const auto& [b, v] : blocks) mean += v.first / v.second;
    mean /= static_cast<double>(blocks.size());
    double ss = 0.0;
    for (const auto& [b, v] : blocks) {
      const double d = v.first / v.second - mean;
      ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(blocks.size() - 1));
  };

  std::vector<SummaryRow> rows;
  rows.reserve(groups.size());
  for (Acc& acc : groups) {
    SummaryRow row = acc.row;
    const double c = static_cast<double>(row.count);
    row.blocks = static_cast<int>(acc.error_blocks.size());
    row.mean_error = acc.error_sum / c;
    row.std_error = block_std(acc.error_blocks);
    row.mean_init_time /= c;
    row.mean_refine_time /= c;
    if (acc.success_count > 0) {
      row.success_rate = acc.success_sum / acc.success_count;
      row.success_std = block_std(acc.success_blocks);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::map<std::string, std::string> parse_config_text(std::string_view text) {
  std::map<std::string, std::string> out;
  int lineno = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    out[std::move(key)] = std::move(value);
  }
  return out;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "kind") {
    const auto k = parse_kind(value);
    if (!k) throw std::invalid_argument("unknown experiment kind: " + value);
    cfg.kind = *k;
  } else if (key == "n") {
    cfg.n = parse_integer(value);
  } else if (key == "s") {
    cfg.s_grid = parse_index_grid(value);
  } else if (key == "m") {
    cfg.m_grid = parse_index_grid(value);
  } else if (key == "sigma") {
    cfg.sigma_grid = parse_real_grid(value);
  } else if (key == "trials") {
    cfg.trials = static_cast<int>(parse_integer(value));
  } else if (key == "repeats") {
    cfg.repeats = static_cast<int>(parse_integer(value));
  } else if (key == "seed") {
    cfg.master_seed = std::stoull(value);
  } else if (key == "methods") {
    cfg.methods.clear();
    for (const std::string& item : split(value, ',')) {
      const auto m = parse_method(trim(item));
      if (!m) throw std::invalid_argument("unknown method: " + item);
      cfg.methods.push_back(*m);
    }
  } else if (key == "l") {
    cfg.band = TruncationBand(parse_double(value), cfg.band.u());
  } else if (key == "u") {
    cfg.band = TruncationBand(cfg.band.l(), parse_double(value));
  } else if (key == "solver") {
    if (value == "grqi") {
      cfg.solver = SpcaSolver::grqi;
    } else if (value == "tpower") {
      cfg.solver = SpcaSolver::tpower;
    } else {
      throw std::invalid_argument("unknown solver: " + value);
    }
  } else if (key == "refine") {
    cfg.refine = parse_bool(value);
  } else if (key == "T") {
    cfg.refinement.T = static_cast<int>(parse_integer(value));
  } else if (key == "inner_iters") {
    cfg.refinement.inner_iters = static_cast<int>(parse_integer(value));
  } else if (key == "inner_tol") {
    cfg.refinement.inner_tol = parse_double(value);
  } else if (key == "budgets") {
    cfg.budgets = parse_real_grid(value);
  } else if (key == "latent_dim") {
    cfg.latent_dim = parse_integer(value);
  } else if (key == "latent_radius") {
    cfg.latent_radius = parse_double(value);
  } else if (key == "delta") {
    cfg.net_delta = parse_double(value);
  } else if (key == "out") {
    cfg.output_path = value;
  } else if (key == "workers") {
    cfg.workers = static_cast<int>(parse_integer(value));
  } else {
    throw std::invalid_argument("unknown config key: " + key);
  }
}

std::vector<double> parse_real_grid(std::string_view text) {
  std::vector<double> out;
  for (const std::string& raw : split(text, ',')) {
    const std::string item = trim(raw);
    if (item.empty()) throw std::invalid_argument("empty grid item");
    const std::vector<std::string> parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(parse_double(parts[0]));
    } else if (parts.size() == 3) {
      const double start = parse_double(trim(parts[0]));
      const double stop = parse_double(trim(parts[1]));
      const double step = parse_double(trim(parts[2]));
      if (!(step > 0.0) || stop < start) throw std::invalid_argument("bad grid range: " + item);
      const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
      for (long long i = 0; i < count; ++i) out.push_back(round_grid_value(start + static_cast<double>(i) * step));
    } else {
      throw std::invalid_argument("bad grid item: " + item);
    }
  }
  return out;
}

std::vector<Index> parse_index_grid(std::string_view text) {
  std::vector<Index> out;
  for (const std::string& raw : split(text, ',')) {
    const std::string item = trim(raw);
    if (item.empty()) throw std::invalid_argument("empty grid item");
    const std::vector<std::string> parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(parse_integer(parts[0]));
    } else if (parts.size() == 3) {
      const long long start = parse_integer(trim(parts[0]));
      const long long stop = parse_integer(trim(parts[1]));
      const long long step = parse_integer(trim(parts[2]));
      if (step < 1 || stop < start) throw std::invalid_argument("bad grid range: " + item);
      for (long long v = start; v <= stop; v += step) out.push_back(v);
    } else {
      throw std::invalid_argument("bad grid item: " + item);
    }
  }
  return out;
}

}  // namespace spinit
