#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "spinit/experiment.hpp"

namespace spinit {

namespace {

constexpr std::string_view kRecordHeader =
    "kind,n,m,s,sigma,budget,method,trial_index,block,seed,data_checksum,relative_error,init_error,success,"
    "init_time,refine_time";

constexpr std::string_view kSummaryHeader =
    "kind,n,m,s,sigma,budget,method,count,blocks,mean_error,std_error,success_rate,success_std,mean_init_time,"
    "mean_refine_time";

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string opt_real(const std::optional<double>& v) { return v ? real(*v) : std::string(); }

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_real(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("csv: empty numeric field");
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("csv: bad real '" + s + "'");
  return v;
}

template <typename Int>
Int to_int(const std::string& s) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("csv: bad integer '" + s + "'");
  return v;
}

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records, bool include_timing) {
  out << kRecordHeader << '\n';
  for (const TrialRecord& r : records) {
    out << r.kind << ',' << r.n << ',' << r.m << ',' << r.s << ',' << real(r.sigma) << ',' << opt_real(r.budget) << ','
        << r.method << ',' << r.trial_index << ',' << r.block << ',' << r.seed << ',' << r.data_checksum << ','
        << real(r.relative_error) << ',' << opt_real(r.init_error) << ','
        << (r.success ? (*r.success ? "1" : "0") : "") << ',';
    if (include_timing) out << real(r.init_time) << ',' << real(r.refine_time);
    else out << ',';
    out << '\n';
  }
}

std::vector<TrialRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRecordHeader) throw std::invalid_argument("csv: missing or unexpected header");
  std::vector<TrialRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = fields_of(line);
    if (f.size() != 16) throw std::invalid_argument("csv: expected 16 fields, got " + std::to_string(f.size()));
    TrialRecord r;
    r.kind = f[0];
    r.n = to_int<Index>(f[1]);
    r.m = to_int<Index>(f[2]);
    r.s = to_int<Index>(f[3]);
    r.sigma = to_real(f[4]);
    if (!f[5].empty()) r.budget = to_real(f[5]);
    r.method = f[6];
    r.trial_index = to_int<int>(f[7]);
    r.block = to_int<int>(f[8]);
    r.seed = to_int<std::uint64_t>(f[9]);
    r.data_checksum = to_int<std::uint64_t>(f[10]);
    r.relative_error = to_real(f[11]);
    if (!f[12].empty()) r.init_error = to_real(f[12]);
    if (!f[13].empty()) r.success = to_int<int>(f[13]) != 0;
    r.init_time = f[14].empty() ? 0.0 : to_real(f[14]);
    r.refine_time = f[15].empty() ? 0.0 : to_real(f[15]);
    out.push_back(std::move(r));
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const SummaryRow& r : rows) {
    out << r.kind << ',' << r.n << ',' << r.m << ',' << r.s << ',' << real(r.sigma) << ',' << opt_real(r.budget) << ','
        << r.method << ',' << r.count << ',' << r.blocks << ',' << real(r.mean_error) << ',' << real(r.std_error) << ','
        << opt_real(r.success_rate) << ',' << opt_real(r.success_std) << ',' << real(r.mean_init_time) << ','
        << real(r.mean_refine_time) << '\n';
  }
}

std::string plot_script(const ExperimentConfig& cfg, const std::string& summary_path) {
  std::string x_axis = "m";
  std::string series = "s";
  switch (cfg.kind) {
    case ExperimentKind::vary_s: x_axis = "s"; series = "m"; break;
    case ExperimentKind::vary_sigma: x_axis = "sigma"; series = "s"; break;
    case ExperimentKind::time_budget: x_axis = "budget"; series = "sigma"; break;
    default: break;
  }
  const std::string y_axis = cfg.kind == ExperimentKind::success_rate ? "success_rate" : "mean_error";
  const std::string err = cfg.kind == ExperimentKind::success_rate ? "success_std" : "std_error";

  std::ostringstream py;
  py << "# Plots " << summary_path << " (one panel per " << series << ").\n"
     << "import csv\n"
     << "import collections\n"
     << "import matplotlib\n"
     << "matplotlib.use('Agg')\n"
     << "import matplotlib.pyplot as plt\n\n"
     << "rows = list(csv.DictReader(open('" << summary_path << "')))\n"
     << "panels = sorted({r['" << series << "'] for r in rows}, key=float)\n"
     << "fig, axes = plt.subplots(1, len(panels), figsize=(5 * len(panels), 4), squeeze=False)\n"
     << "for ax, panel in zip(axes[0], panels):\n"
     << "    lines = collections.defaultdict(list)\n"
     << "    for r in rows:\n"
     << "        if r['" << series << "'] == panel:\n"
     << "            lines[r['method']].append((float(r['" << x_axis << "']), float(r['" << y_axis << "']),"
     << " float(r['" << err << "'] or 0)))\n"
     << "    for method, pts in lines.items():\n"
     << "        pts.sort()\n"
     << "        ax.errorbar([p[0] for p in pts], [p[1] for p in pts], yerr=[p[2] for p in pts],"
     << " marker='o', label=method)\n"
     << "    ax.set_xlabel('" << x_axis << "')\n"
     << "    ax.set_ylabel('" << y_axis << "')\n"
     << "    ax.set_title('" << series << " = ' + panel)\n"
     << "    ax.legend()\n"
     << "fig.tight_layout()\n"
     << "fig.savefig('" << summary_path << "'.replace('.summary.csv', '.png'))\n";
  return py.str();
}

}  // namespace spinit
