#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "spinit/experiment.hpp"
#include "spinit/selftest.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitSkippedOnly = 3;

struct Sweep {
  spinit::ExperimentKind kind;
  std::string config_path;
  std::map<std::string, std::string> flags;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string stem_of(const std::string& out) {
  const std::filesystem::path p(out);
  return p.extension() == ".csv" ? (p.parent_path() / p.stem()).string() : out;
}

// l and u are applied together so that moving the band past the current u works.
void apply_all(spinit::ExperimentConfig& cfg, std::map<std::string, std::string> settings) {
  double l = cfg.band.l();
  double u = cfg.band.u();
  bool band_changed = false;
  for (const char* key : {"l", "u"}) {
    const auto it = settings.find(key);
    if (it == settings.end()) continue;
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("bad value for " + it->first + ": " + it->second);
    (it->first == "l" ? l : u) = v;
    band_changed = true;
    settings.erase(it);
  }
  if (band_changed) cfg.band = spinit::TruncationBand(l, u);
  for (const auto& [key, value] : settings) spinit::apply_setting(cfg, key, value);
}

int run_sweep(const Sweep& sweep) {
  spinit::ExperimentConfig cfg;
  try {
    cfg = spinit::default_config(sweep.kind);
    if (!sweep.config_path.empty()) {
      const auto file = spinit::parse_config_text(slurp(sweep.config_path));
      if (const auto it = file.find("kind"); it != file.end() && spinit::parse_kind(it->second) != sweep.kind)
        throw std::invalid_argument("config file kind '" + it->second + "' does not match the subcommand");
      apply_all(cfg, file);
    }
    apply_all(cfg, sweep.flags);
    if (cfg.output_path.empty()) cfg.output_path = std::string(spinit::kind_name(cfg.kind)) + ".csv";
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitInvalid;
  }

  spinit::ExperimentResult result;
  try {
    result = spinit::run_experiment(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitInvalid;
  }
  for (const spinit::SkippedRun& s : result.skipped)
    std::cerr << "skipped " << s.method << " at m=" << s.m << " s=" << s.s << " sigma=" << s.sigma << ": " << s.reason
              << '\n';

  const std::string stem = stem_of(cfg.output_path);
  const std::string records_path = stem + ".csv";
  const std::string summary_path = stem + ".summary.csv";
  const std::string script_path = stem + ".plot.py";
  if (const auto dir = std::filesystem::path(stem).parent_path(); !dir.empty()) std::filesystem::create_directories(dir);
  {
    std::ofstream out(records_path);
    spinit::write_records_csv(out, result.records);
  }
  {
    std::ofstream out(summary_path);
    spinit::write_summary_csv(out, spinit::summarize(result.records));
  }
  {
    std::ofstream out(script_path);
    out << spinit::plot_script(cfg, summary_path);
  }
  std::cout << result.records.size() << " records -> " << records_path << '\n'
            << "summary -> " << summary_path << '\n'
            << "plot script -> " << script_path << '\n';
  if (result.records.empty() && !result.skipped.empty()) return kExitSkippedOnly;
  return kExitOk;
}

int run_selftest(std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<spinit::CheckOutcome> checks = spinit::run_property_suite(seed);
  int failed = 0;
  for (const auto& c : checks) {
    std::printf("[%s] %s: %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    failed += c.passed ? 0 : 1;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%zu checks, %d failed, %.1f s\n", checks.size(), failed, secs);
  return failed == 0 ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse phase retrieval spectral initialization experiments"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, spinit::ExperimentKind>> kinds = {
      {"vary-m", spinit::ExperimentKind::vary_m},
      {"vary-s", spinit::ExperimentKind::vary_s},
      {"vary-sigma", spinit::ExperimentKind::vary_sigma},
      {"success-rate", spinit::ExperimentKind::success_rate},
      {"time-budget", spinit::ExperimentKind::time_budget},
      {"gen-toy", spinit::ExperimentKind::generative_toy},
  };
  // flag name -> config key
  struct FlagKey {
    std::string flag;
    std::string key;
    std::string help;
  };
  const std::vector<FlagKey> flag_keys = {
      {"n", "n", "signal dimension"},
      {"s", "s", "sparsity, value or grid (5:50:5 or 5,10,20)"},
      {"m", "m", "number of measurements, value or grid"},
      {"sigma", "sigma", "noise level, value or grid"},
      {"trials", "trials", "trials per grid point and block"},
      {"repeats", "repeats", "blocks of trials used for error bars"},
      {"seed", "seed", "master seed"},
      {"methods", "methods", "comma list: pri_spca,pri_spca_nt,sparta,copram,thwf,random"},
      {"l", "l", "lower truncation factor"},
      {"u", "u", "upper truncation factor (inf allowed)"},
      {"solver", "solver", "sparse PCA solver: tpower or grqi"},
      {"T", "T", "refinement iterations"},
      {"budgets", "budgets", "time budgets in seconds, grid"},
      {"latent-dim", "latent_dim", "latent dimension of the generator"},
      {"delta", "delta", "latent net scale"},
      {"workers", "workers", "worker threads"},
      {"out", "out", "output path stem"},
  };

  std::vector<Sweep> sweeps(kinds.size());
  std::vector<std::map<std::string, std::string>> raw(kinds.size());
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    sweeps[i].kind = kinds[i].second;
    CLI::App* sub = app.add_subcommand(kinds[i].first, std::string("run the ") +
                                                           std::string(spinit::kind_name(kinds[i].second)) +
                                                           " experiment");
    sub->add_option("--config", sweeps[i].config_path, "key = value file, applied before flags");
    for (const FlagKey& f : flag_keys) {
      const std::string k = f.key;
      const std::size_t idx = i;
      sub->add_option_function<std::string>(
          "--" + f.flag, [&raw, idx, k](const std::string& v) { raw[idx][k] = v; }, f.help);
    }
    sub->add_flag_function(
        "--refine", [&raw, i](std::int64_t) { raw[i]["refine"] = "true"; }, "run refinement after initialization");
    sub->add_flag_function(
        "--no-refine", [&raw, i](std::int64_t) { raw[i]["refine"] = "false"; }, "skip refinement");
    sub->final_callback([&, i] {
      sweeps[i].flags = raw[i];
      throw CLI::RuntimeError(run_sweep(sweeps[i]));
    });
  }

  std::uint64_t selftest_seed = 1;
  CLI::App* selftest = app.add_subcommand("selftest", "run the property and oracle suites");
  selftest->add_option("--seed", selftest_seed, "suite seed");
  selftest->final_callback([&] { throw CLI::RuntimeError(run_selftest(selftest_seed)); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::RuntimeError& e) {
    return e.get_exit_code();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }
  return kExitOk;
}
