#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spinit/init_methods.hpp"
#include "spinit/refinement.hpp"

namespace spinit {

enum class ExperimentKind { vary_m, vary_s, vary_sigma, success_rate, time_budget, generative_toy };

std::string_view kind_name(ExperimentKind k);
std::optional<ExperimentKind> parse_kind(std::string_view name);

/// Record tags emitted by the generative_toy experiment.
inline constexpr std::string_view kGenAmplitudeTag = "gen_amplitude";
inline constexpr std::string_view kGenSpectralTag = "gen_spectral";

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::vary_m;
  Index n = 1000;
  std::vector<Index> s_grid{10};
  std::vector<Index> m_grid{1000};
  std::vector<double> sigma_grid{0.0};
  std::vector<Method> methods;
  bool refine = false;
  RefinementConfig refinement;
  int trials = 50;
  int repeats = 1;  // trials are run `repeats` times; error bars come from the block means
  std::uint64_t master_seed = 20210501;
  TruncationBand band = TruncationBand::standard();
  SpcaSolver solver = SpcaSolver::grqi;
  std::vector<double> budgets;  // seconds, time_budget only

  // generative_toy: linear generator with i.i.d. N(0, 1/n) entries
  Index latent_dim = 2;
  double latent_radius = 1.0;
  double net_delta = 0.05;

  std::string output_path;
  int workers = 0;  // 0 = hardware concurrency

  void validate() const;
};

/// Default grids and knobs for each experiment kind.
ExperimentConfig default_config(ExperimentKind kind);

struct TrialRecord {
  std::string kind;
  Index n = 0;
  Index m = 0;
  Index s = 0;
  double sigma = 0.0;
  std::optional<double> budget;
  std::string method;
  int trial_index = 0;
  int block = 0;
  std::uint64_t seed = 0;
  std::uint64_t data_checksum = 0;
  double relative_error = 0.0;
  std::optional<double> init_error;  // error before refinement, when refinement ran
  std::optional<bool> success;       // refined error < 0.01, when refinement ran
  double init_time = 0.0;
  double refine_time = 0.0;

  bool operator==(const TrialRecord&) const = default;
};

struct SkippedRun {
  Index m = 0;
  Index s = 0;
  double sigma = 0.0;
  std::string method;
  std::string reason;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;
  std::vector<SkippedRun> skipped;
};

inline constexpr double kSuccessThreshold = 0.01;

/// min(||x - est||, ||x + est||) / ||x||.
double relative_error(const Vector& estimate, const Vector& x);
double relative_error(const Vector& estimate, const SparseSignal& x);

/// Trial seed shared by all methods and by every m / sigma grid value, so
/// sweeps along m and sigma are nested: the signal is identical, the sensing
/// rows are prefixes of each other and the noise is rescaled.
std::uint64_t trial_seed(std::uint64_t master, Index n, Index s, int trial_index);

/// FNV-1a over the bytes of the given vectors.
std::uint64_t checksum(std::initializer_list<const Vector*> parts);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct SummaryRow {
  std::string kind;
  Index n = 0;
  Index m = 0;
  Index s = 0;
  double sigma = 0.0;
  std::optional<double> budget;
  std::string method;
  int count = 0;
  int blocks = 0;
  double mean_error = 0.0;
  double std_error = 0.0;  // sample std of block means (0 with one block)
  std::optional<double> success_rate;
  std::optional<double> success_std;
  double mean_init_time = 0.0;
  double mean_refine_time = 0.0;
};

/// Groups by (kind, n, m, s, sigma, budget, method) in first-appearance order.
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

// CSV I/O. Reals are written with 17 significant digits.
void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records, bool include_timing = true);
std::vector<TrialRecord> read_records_csv(std::istream& in);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

/// Plain-text matplotlib script that plots a summary CSV.
std::string plot_script(const ExperimentConfig& cfg, const std::string& summary_path);

// Configuration text: one `key = value` per line, `#` starts a comment.
std::map<std::string, std::string> parse_config_text(std::string_view text);
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Grid syntax: comma-separated items, each a value or `start:stop:step` (inclusive).
std::vector<Index> parse_index_grid(std::string_view text);
std::vector<double> parse_real_grid(std::string_view text);

}  // namespace spinit
