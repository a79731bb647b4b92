#include "vvmean/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "vvmean/compensated.hpp"
#include "vvmean/tensor_space.hpp"

namespace vvmean {

namespace {

inline index_t ceil_div(index_t a, index_t b) { return (a + b - 1) / b; }

}  // namespace

std::string_view algo_name(Algo a) {
  switch (a) {
    case Algo::zero: return "zero";
    case Algo::a2: return "a2";
    case Algo::a3: return "a3";
  }
  return "?";
}

Algo parse_algo(std::string_view name) {
  if (name == "zero") return Algo::zero;
  if (name == "a2") return Algo::a2;
  if (name == "a3") return Algo::a3;
  throw std::domain_error("unknown algorithm '" + std::string(name) + "'");
}

std::vector<index_t> geometric_grid(index_t first, index_t last, index_t factor) {
  if (first < 1 || last < first || factor < 2) {
    throw std::invalid_argument("geometric_grid: need 1 <= first <= last and factor >= 2");
  }
  std::vector<index_t> grid;
  for (index_t n = first; n <= last; n *= factor) grid.push_back(n);
  return grid;
}

void ExperimentPlan::validate(Family family, Exponent p) const {
  if (n_grid.empty()) throw std::invalid_argument("ExperimentPlan: empty budget grid");
  if (trials < 2) throw std::invalid_argument("ExperimentPlan: trials must be >= 2");
  for (index_t n : n_grid) {
    InstanceSpec spec;
    spec.family = family;
    spec.p = p;
    spec.n = n;
    spec.n1 = n1;
    spec.n2 = n2;
    spec.validate();
  }
}

MeanResult run_algorithm(Algo algo, const DiscreteFunction& f, const AdaptiveConfig& cfg, Stream& s) {
  switch (algo) {
    case Algo::zero: return zero_algorithm(f);
    case Algo::a2: return a2_mean(f, cfg.n, s);
    case Algo::a3: return a3_mean(f, cfg, s);
  }
  throw std::logic_error("run_algorithm: unreachable");
}

DiscreteFunction draw_instance(const InstanceSpec& spec, Exponent q, Stream& s,
                               const DiscreteFunction* custom) {
  switch (spec.family) {
    case Family::mu1: return draw_mu1(spec, s);
    case Family::mu2: return draw_mu2(spec, s);
    case Family::mu3: return draw_mu3(spec, s);
    case Family::mu4: return draw_mu4(spec, s);
    case Family::witness: return norm_witness(spec.p, q, spec.n1, spec.n2);
    case Family::custom:
      if (custom == nullptr) throw std::invalid_argument("draw_instance: custom family needs a function");
      return *custom;
  }
  throw std::logic_error("draw_instance: unreachable");
}

namespace {

void check_budget(Algo algo, const BudgetAudit& audit, const DiscreteFunction& f, const AdaptiveConfig& cfg) {
  const index_t n1 = f.rows();
  switch (algo) {
    case Algo::zero:
      if (audit.total_calls() != 0) throw BudgetViolation("zero algorithm consumed oracle calls");
      break;
    case Algo::a2: {
      if (cfg.n < n1) {
        if (audit.total_calls() != 0) throw BudgetViolation("a2: expected zero calls for n < N1");
      } else {
        const index_t expected = n1 * ceil_div(cfg.n, n1);
        if (audit.total_calls() != expected || audit.total_calls() > 2 * cfg.n) {
          throw BudgetViolation("a2: audit does not match N1*ceil(n/N1) <= 2n");
        }
      }
      break;
    }
    case Algo::a3: {
      if (cfg.n < n1) {
        if (audit.total_calls() != 0) throw BudgetViolation("a3: expected zero calls for n < N1");
      } else if (audit.total_calls() > 6 * cfg.m * cfg.n) {
        throw BudgetViolation("a3: audited calls exceed 6mn");
      }
      break;
    }
  }
}

}  // namespace

TrialRecord estimate_error(Algo algo, const InstanceSpec& spec, const AdaptiveConfig& cfg, Exponent q,
                           index_t trials, const SeedSpec& seed, const DiscreteFunction* custom) {
  if (trials < 2) throw std::invalid_argument("estimate_error: trials must be >= 2");
  spec.validate();
  cfg.validate();

  std::vector<double> errs(static_cast<std::size_t>(trials));
  NeumaierSum card_sum;
  index_t card_max = 0;

  for (index_t t = 0; t < trials; ++t) {
    Stream instance_stream = derive(seed.child(static_cast<std::uint32_t>(t)).child(0));
    Stream algo_stream = derive(seed.child(static_cast<std::uint32_t>(t)).child(1));
    const DiscreteFunction f = draw_instance(spec, q, instance_stream, custom);
    const std::vector<double> truth = mean_rows(f);
    const MeanResult res = run_algorithm(algo, f, cfg, algo_stream);
    check_budget(algo, res.audit, f, cfg);

    std::vector<double> diff(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) diff[i] = truth[i] - res.values[i];
    errs[static_cast<std::size_t>(t)] = lp_norm(diff, q);

    card_sum.add(static_cast<double>(res.audit.total_calls()));
    card_max = std::max(card_max, res.audit.total_calls());
  }

  const double w = cfg.w;
  NeumaierSum moment;
  for (double e : errs) moment.add(w == 1.0 ? e : std::pow(e, w));
  const double mean_moment = moment.value() / static_cast<double>(trials);
  const double mean_err = w == 1.0 ? mean_moment : std::pow(mean_moment, 1.0 / w);

  double se = 0.0;
  if (w == 1.0) {
    NeumaierSum ss;
    for (double e : errs) ss.add((e - mean_err) * (e - mean_err));
    se = std::sqrt(ss.value() / static_cast<double>(trials - 1)) / std::sqrt(static_cast<double>(trials));
  } else {
    // Bootstrap spread of the w-th moment statistic. The resampling stream
    // lives at path label `trials`, which no trial uses.
    constexpr index_t kResamples = 100;
    Stream boot = derive(seed.child(static_cast<std::uint32_t>(trials)).child(2));
    std::vector<double> stats(static_cast<std::size_t>(kResamples));
    for (index_t b = 0; b < kResamples; ++b) {
      NeumaierSum acc;
      for (index_t t = 0; t < trials; ++t) {
        const double e = errs[static_cast<std::size_t>(boot.uniform_index(trials) - 1)];
        acc.add(std::pow(e, w));
      }
      stats[static_cast<std::size_t>(b)] = std::pow(acc.value() / static_cast<double>(trials), 1.0 / w);
    }
    NeumaierSum bm;
    for (double v : stats) bm.add(v);
    const double mb = bm.value() / static_cast<double>(kResamples);
    NeumaierSum bs;
    for (double v : stats) bs.add((v - mb) * (v - mb));
    se = std::sqrt(bs.value() / static_cast<double>(kResamples - 1));
  }

  TrialRecord rec;
  rec.algo = algo;
  rec.family = spec.family;
  rec.p = spec.p;
  rec.q = q;
  rec.n1 = spec.n1;
  rec.n2 = spec.n2;
  rec.n = cfg.n;
  rec.m = algo == Algo::a3 ? cfg.m : 1;
  rec.w = w;
  rec.trials = trials;
  rec.seed = seed.master_seed;
  rec.mean_err = mean_err;
  rec.stderr_ = se;
  rec.card_mean = card_sum.value() / static_cast<double>(trials);
  rec.card_max = card_max;
  return rec;
}

RateFit fit_rate(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("fit_rate: need at least 3 points");
  for (const auto& [n, err] : points) {
    if (!(n > 0.0) || !(err > 0.0)) throw std::domain_error("fit_rate: values must be positive");
  }
  const double k = static_cast<double>(points.size());
  NeumaierSum sx, sy;
  for (const auto& [n, err] : points) {
    sx.add(std::log2(n));
    sy.add(std::log2(err));
  }
  const double mx = sx.value() / k;
  const double my = sy.value() / k;
  NeumaierSum sxx, sxy;
  for (const auto& [n, err] : points) {
    const double dx = std::log2(n) - mx;
    const double dy = std::log2(err) - my;
    sxx.add(dx * dx);
    sxy.add(dx * dy);
  }
  if (sxx.value() == 0.0) throw std::domain_error("fit_rate: all abscissae coincide");

  RateFit fit;
  fit.n_points = static_cast<index_t>(points.size());
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = my - fit.slope * mx;

  NeumaierSum ss_res, ss_tot;
  for (const auto& [n, err] : points) {
    const double y = std::log2(err);
    const double yhat = fit.intercept + fit.slope * std::log2(n);
    ss_res.add((y - yhat) * (y - yhat));
    ss_tot.add((y - my) * (y - my));
  }
  if (ss_tot.value() <= 0.0) {
    fit.r_squared = 1.0;  // constant data, perfectly fit by slope 0
  } else {
    fit.r_squared = std::clamp(1.0 - ss_res.value() / ss_tot.value(), 0.0, 1.0);
  }
  return fit;
}

double predicted_rate(Setting setting, Exponent p, Exponent q, index_t n1, index_t n2, index_t n) {
  if (n1 < 1 || n2 < 1 || n < 1) throw std::invalid_argument("predicted_rate: need positive n, N1, N2");
  const double ip = p.reciprocal();
  const double iq = q.reciprocal();
  const double gain_plus = std::pow(static_cast<double>(n1), std::max(ip - iq, 0.0));
  if (setting == Setting::det) return gain_plus;

  const double l = static_cast<double>(ceil_div(n, n1));
  const bool critical = (!p.is_infinite() && p.value() > 2.0) && p < q;  // 2 < p < q
  if (!critical) {
    const double pbar = ExponentPair{p, q}.p_bar();
    const double log_exp = (p.is_infinite() && q.is_infinite()) ? 0.5 : 0.0;
    return gain_plus * std::pow(l, -(1.0 - 1.0 / pbar)) *
           std::pow(std::min(std::log2(static_cast<double>(n1 + 1)), l), log_exp);
  }
  const double gain = std::pow(static_cast<double>(n1), ip - iq);
  if (setting == Setting::ran_non) return gain * std::pow(l, -0.5);
  const double log_exp = q.is_infinite() ? 0.5 : 0.0;
  return gain * std::pow(l, -(1.0 - ip)) +
         std::pow(l, -0.5) * std::pow(std::log2(static_cast<double>(n1 + 1)), log_exp);
}

double gap_exponent(Exponent p, Exponent q) {
  const double ip = p.reciprocal();
  const double iq = q.reciprocal();
  return (0.5 - ip) * (ip - iq) / (0.5 - iq);
}

GapResult gap_experiment(Exponent p, Exponent q, std::span<const index_t> n_grid, index_t trials,
                         index_t m, const SeedSpec& seed) {
  if (p.is_infinite() || !(p.value() > 2.0) || !(p < q)) {
    throw std::domain_error("gap_experiment: requires 2 < p < q");
  }
  if (m < 1) throw std::invalid_argument("gap_experiment: m must be positive");

  const double ip = p.reciprocal();
  const double iq = q.reciprocal();
  constexpr Family kFamilies[] = {Family::mu1, Family::mu2, Family::mu3, Family::mu4};

  GapResult result;
  std::vector<std::pair<double, double>> ratio_points;
  for (std::size_t pt = 0; pt < n_grid.size(); ++pt) {
    const index_t n = n_grid[pt];
    const double x0 = std::pow(static_cast<double>(n), (0.5 - ip) / (0.5 - iq));
    const index_t n1 = static_cast<index_t>(std::ceil(x0));
    const index_t n2 = static_cast<index_t>(std::floor(21.0 * static_cast<double>(n) / x0)) + 1;
    const index_t n_deflated = n / (6 * m);

    if (n1 > n || 21 * n >= n1 * n2) {
      result.skipped.push_back("n=" + std::to_string(n) + ": coupling violates N1 <= n < N1*N2/21");
      continue;
    }
    if (n_deflated < 1) {
      result.skipped.push_back("n=" + std::to_string(n) + ": deflated budget floor(n/(6m)) is zero");
      continue;
    }

    GapRow row;
    row.n = n;
    row.n1 = n1;
    row.n2 = n2;
    const SeedSpec point_seed = seed.child(static_cast<std::uint32_t>(pt));
    for (std::size_t fi = 0; fi < 4; ++fi) {
      InstanceSpec spec;
      spec.family = kFamilies[fi];
      spec.p = p;
      spec.n = n;
      spec.n1 = n1;
      spec.n2 = n2;
      const SeedSpec family_seed = point_seed.child(static_cast<std::uint32_t>(fi));
      const TrialRecord non = estimate_error(Algo::a2, spec, AdaptiveConfig{n, 1, 1.0}, q, trials,
                                             family_seed.child(0));
      const TrialRecord ad = estimate_error(Algo::a3, spec, AdaptiveConfig{n_deflated, m, 1.0}, q,
                                            trials, family_seed.child(1));
      row.err_nonadaptive = std::max(row.err_nonadaptive, non.mean_err);
      row.err_adaptive = std::max(row.err_adaptive, ad.mean_err);
      row.budget_nonadaptive = std::max(row.budget_nonadaptive, non.card_max);
      row.budget_adaptive = std::max(row.budget_adaptive, ad.card_max);
    }
    row.ratio = row.err_nonadaptive / row.err_adaptive;
    result.rows.push_back(row);
    ratio_points.emplace_back(static_cast<double>(n), row.ratio);
  }

  if (ratio_points.size() >= 3) result.ratio_fit = fit_rate(ratio_points);
  return result;
}

std::string format_double(double x) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

void write_csv_header(std::ostream& out) {
  out << "algo,instance,p,q,n1,n2,n,m,w,trials,seed,mean_err,stderr,card_mean,card_max\n";
}

void write_csv_row(std::ostream& out, const TrialRecord& rec) {
  out << algo_name(rec.algo) << ',' << family_name(rec.family) << ',' << rec.p.str() << ','
      << rec.q.str() << ',' << rec.n1 << ',' << rec.n2 << ',' << rec.n << ',' << rec.m << ','
      << format_double(rec.w) << ',' << rec.trials << ',' << rec.seed << ','
      << format_double(rec.mean_err) << ',' << format_double(rec.stderr_) << ','
      << format_double(rec.card_mean) << ',' << rec.card_max << '\n';
}

void write_gap_header(std::ostream& out) {
  out << "n,n1,n2,err_nonadaptive,err_adaptive,ratio,budget_nonadaptive,budget_adaptive\n";
}

void write_gap_row(std::ostream& out, const GapRow& row) {
  out << row.n << ',' << row.n1 << ',' << row.n2 << ',' << format_double(row.err_nonadaptive) << ','
      << format_double(row.err_adaptive) << ',' << format_double(row.ratio) << ','
      << row.budget_nonadaptive << ',' << row.budget_adaptive << '\n';
}

void write_fit_comment(std::ostream& out, const RateFit& fit) {
  out << "# fit slope=" << format_double(fit.slope) << " intercept=" << format_double(fit.intercept)
      << " r_squared=" << format_double(fit.r_squared) << " n_points=" << fit.n_points << '\n';
}

}  // namespace vvmean
