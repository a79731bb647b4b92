#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "vvmean/harness.hpp"
#include "vvmean/tensor_space.hpp"

namespace vvmean {

namespace {

std::vector<index_t> parse_grid(const std::string& text) {
  index_t first = 0, last = 0, factor = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> first >> c1 >> last >> c2 >> factor) || c1 != ':' || c2 != ':' || !in.eof()) {
    throw std::invalid_argument("--n-grid expects first:last:factor");
  }
  return geometric_grid(first, last, factor);
}

struct OutputTarget {
  std::ofstream file;
  std::ostream* stream = &std::cout;

  void open(const std::string& path) {
    if (path.empty()) return;
    file.open(path, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open output file '" + path + "'");
    stream = &file;
  }
};

struct RunOptions {
  std::string algo = "a2";
  std::string instance = "mu1";
  std::string file;
  std::string p = "2";
  std::string q = "2";
  index_t n1 = 1;
  index_t n2 = 1;
  index_t n = 1;
  std::string grid;
  index_t m = 0;  // 0 = theoretical default
  double w = 1.0;
  index_t trials = 100;
  std::uint64_t seed = 0;
  std::string out;
};

void add_common_flags(CLI::App* cmd, RunOptions& opt, bool with_grid) {
  cmd->add_option("--algo", opt.algo, "Algorithm: zero|a2|a3");
  cmd->add_option("--instance", opt.instance, "Instance family: mu1|mu2|mu3|mu4|witness|custom");
  cmd->add_option("--file", opt.file, "Matrix file for --instance custom");
  cmd->add_option("--p", opt.p, "Input norm exponent (decimal or 'inf')");
  cmd->add_option("--q", opt.q, "Output norm exponent (decimal or 'inf')");
  cmd->add_option("--n1", opt.n1, "Row count N1");
  cmd->add_option("--n2", opt.n2, "Column count N2");
  if (with_grid) {
    cmd->add_option("--n-grid", opt.grid, "Geometric budget grid first:last:factor")->required();
  } else {
    cmd->add_option("--n", opt.n, "Oracle budget n");
  }
  cmd->add_option("--m", opt.m, "Median repetitions for a3 (0 = theoretical default)");
  cmd->add_option("--w", opt.w, "Moment order of the reported error");
  cmd->add_option("--trials", opt.trials, "Monte Carlo trials per point");
  cmd->add_option("--seed", opt.seed, "Master seed");
  cmd->add_option("--out", opt.out, "Output file (default: stdout)");
}

struct ResolvedRun {
  Algo algo;
  InstanceSpec spec;
  Exponent q{2.0};
  std::optional<DiscreteFunction> custom;
};

ResolvedRun resolve(const RunOptions& opt, index_t budget) {
  ResolvedRun r;
  r.algo = parse_algo(opt.algo);
  r.q = Exponent::parse(opt.q);
  r.spec.family = parse_family(opt.instance);
  r.spec.p = Exponent::parse(opt.p);
  r.spec.n = budget;
  r.spec.n1 = opt.n1;
  r.spec.n2 = opt.n2;
  if (r.spec.family == Family::custom) {
    if (opt.file.empty()) throw std::invalid_argument("--instance custom requires --file");
    std::ifstream in(opt.file);
    if (!in) throw std::invalid_argument("cannot open matrix file '" + opt.file + "'");
    r.custom = read_matrix(in);
    r.spec.n1 = r.custom->rows();
    r.spec.n2 = r.custom->cols();
  }
  return r;
}

AdaptiveConfig make_config(const RunOptions& opt, const ResolvedRun& run, index_t budget) {
  AdaptiveConfig cfg;
  cfg.n = budget;
  cfg.m = opt.m > 0 ? opt.m : (run.algo == Algo::a3 ? default_m(run.spec.n1, run.spec.n2, opt.w) : 1);
  cfg.w = opt.w;
  return cfg;
}

int cmd_norm_op(const std::string& p, const std::string& q, index_t n1) {
  std::cout << format_double(operator_norm(Exponent::parse(p), Exponent::parse(q), n1)) << '\n';
  return 0;
}

int cmd_run(const RunOptions& opt) {
  const ResolvedRun run = resolve(opt, opt.n);
  const AdaptiveConfig cfg = make_config(opt, run, opt.n);
  const SeedSpec seed{opt.seed, {}};
  const TrialRecord rec = estimate_error(run.algo, run.spec, cfg, run.q, opt.trials, seed,
                                         run.custom ? &*run.custom : nullptr);
  OutputTarget out;
  out.open(opt.out);
  write_csv_header(*out.stream);
  write_csv_row(*out.stream, rec);
  return 0;
}

int cmd_rate(const RunOptions& opt) {
  const std::vector<index_t> grid = parse_grid(opt.grid);
  {
    const ResolvedRun probe = resolve(opt, grid.front());
    ExperimentPlan plan{grid, probe.spec.n1, probe.spec.n2, opt.trials};
    plan.validate(probe.spec.family, probe.spec.p);
  }
  OutputTarget out;
  out.open(opt.out);
  write_csv_header(*out.stream);
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const ResolvedRun run = resolve(opt, grid[i]);
    const AdaptiveConfig cfg = make_config(opt, run, grid[i]);
    const SeedSpec seed{opt.seed, {static_cast<std::uint32_t>(i)}};
    const TrialRecord rec = estimate_error(run.algo, run.spec, cfg, run.q, opt.trials, seed,
                                           run.custom ? &*run.custom : nullptr);
    write_csv_row(*out.stream, rec);
    points.emplace_back(static_cast<double>(grid[i]), rec.mean_err);
  }
  write_fit_comment(*out.stream, fit_rate(points));
  return 0;
}

int cmd_gap(const RunOptions& opt) {
  const std::vector<index_t> grid = parse_grid(opt.grid);
  const index_t m = opt.m > 0 ? opt.m : 3;
  const SeedSpec seed{opt.seed, {}};
  const GapResult res = gap_experiment(Exponent::parse(opt.p), Exponent::parse(opt.q), grid,
                                       opt.trials, m, seed);
  OutputTarget out;
  out.open(opt.out);
  *out.stream << "# worst-case proxy: max over mu1..mu4; adaptive budget deflated to floor(n/(6m)), m="
              << m << '\n';
  write_gap_header(*out.stream);
  for (const GapRow& row : res.rows) write_gap_row(*out.stream, row);
  if (res.ratio_fit) write_fit_comment(*out.stream, *res.ratio_fit);
  for (const std::string& skip : res.skipped) *out.stream << "# skipped " << skip << '\n';
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Randomized vector-valued mean computation benchmark"};
  app.require_subcommand(1);

  std::string np = "2", nq = "2";
  index_t nn1 = 1;
  CLI::App* norm = app.add_subcommand("norm-op", "Print the exact operator norm N1^((1/p-1/q)_+)");
  norm->add_option("--p", np, "Input norm exponent");
  norm->add_option("--q", nq, "Output norm exponent");
  norm->add_option("--n1", nn1, "Row count N1")->required();

  RunOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "Estimate the expected error of one algorithm");
  add_common_flags(run, run_opt, false);

  RunOptions rate_opt;
  CLI::App* rate = app.add_subcommand("rate", "Error sweep over a budget grid plus a log-log rate fit");
  add_common_flags(rate, rate_opt, true);

  RunOptions gap_opt;
  CLI::App* gap = app.add_subcommand("gap", "Equal-budget adaptive vs non-adaptive gap experiment");
  gap->add_option("--p", gap_opt.p, "Input norm exponent (needs 2 < p < q)");
  gap->add_option("--q", gap_opt.q, "Output norm exponent");
  gap->add_option("--n-grid", gap_opt.grid, "Geometric budget grid first:last:factor")->required();
  gap->add_option("--m", gap_opt.m, "Median repetitions for a3 (default 3)");
  gap->add_option("--trials", gap_opt.trials, "Monte Carlo trials per point");
  gap->add_option("--seed", gap_opt.seed, "Master seed");
  gap->add_option("--out", gap_opt.out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
    if (norm->parsed()) return cmd_norm_op(np, nq, nn1);
    if (run->parsed()) return cmd_run(run_opt);
    if (rate->parsed()) return cmd_rate(rate_opt);
    if (gap->parsed()) return cmd_gap(gap_opt);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors exit 1; --help exits 0
  } catch (const BudgetViolation& e) {
    std::cerr << "internal invariant breach: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace vvmean
