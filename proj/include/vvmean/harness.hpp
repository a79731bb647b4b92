#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vvmean/estimators.hpp"
#include "vvmean/hard_instances.hpp"

namespace vvmean {

enum class Algo { zero, a2, a3 };

std::string_view algo_name(Algo a);
Algo parse_algo(std::string_view name);

/// One experiment point: empirical w-th moment of the L_q error over
/// repeated trials, with audited oracle-call statistics.
struct TrialRecord {
  Algo algo = Algo::zero;
  Family family = Family::mu1;
  Exponent p{2.0};
  Exponent q{2.0};
  index_t n1 = 0;
  index_t n2 = 0;
  index_t n = 0;
  index_t m = 1;
  double w = 1.0;
  index_t trials = 0;
  std::uint64_t seed = 0;
  double mean_err = 0.0;
  double stderr_ = 0.0;
  double card_mean = 0.0;
  index_t card_max = 0;
};

/// Least-squares fit of log2(err) against log2(n).
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  index_t n_points = 0;
};

/// Grid plan for a rate experiment: geometric budgets over fixed dimensions.
struct ExperimentPlan {
  std::vector<index_t> n_grid;
  index_t n1 = 1;
  index_t n2 = 1;
  index_t trials = 2;

  /// Every grid point must be admissible for the chosen instance family.
  void validate(Family family, Exponent p) const;
};

/// Geometric budget grid: first, first*factor, ... up to last (inclusive).
std::vector<index_t> geometric_grid(index_t first, index_t last, index_t factor);

/// Dispatches one algorithm run. The zero algorithm ignores the stream.
MeanResult run_algorithm(Algo algo, const DiscreteFunction& f, const AdaptiveConfig& cfg, Stream& s);

/// Draws one instance. The mu families consume randomness; witness is the
/// deterministic operator-norm witness (needs p <= q); custom returns the
/// supplied function.
DiscreteFunction draw_instance(const InstanceSpec& spec, Exponent q, Stream& s,
                               const DiscreteFunction* custom = nullptr);

/// Monte Carlo estimate of the expected L_q error of one algorithm on one
/// instance family. Trial t draws its instance from substream (seed,[t,0])
/// and its algorithm randomness from (seed,[t,1]); mu instances are
/// regenerated every trial. Any audited budget breach raises
/// BudgetViolation.
TrialRecord estimate_error(Algo algo, const InstanceSpec& spec, const AdaptiveConfig& cfg, Exponent q,
                           index_t trials, const SeedSpec& seed, const DiscreteFunction* custom = nullptr);

/// OLS in log2-log2 coordinates over (n, err) points; all inputs positive.
RateFit fit_rate(std::span<const std::pair<double, double>> points);

enum class Setting { ran, ran_non, det };

/// Convergence-rate envelope with all undetermined constants set to 1.
/// Branches: p <= 2 or p >= q shares one randomized rate; 2 < p < q splits
/// into adaptive and non-adaptive rates; the deterministic rate is the
/// operator norm.
double predicted_rate(Setting setting, Exponent p, Exponent q, index_t n1, index_t n2, index_t n);

/// Exponent of the adaption gap: (1/2-1/p)(1/p-1/q)/(1/2-1/q); equals 1/8
/// at p = 4, q = inf.
double gap_exponent(Exponent p, Exponent q);

struct GapRow {
  index_t n = 0;
  index_t n1 = 0;
  index_t n2 = 0;
  double err_nonadaptive = 0.0;
  double err_adaptive = 0.0;
  double ratio = 0.0;
  index_t budget_nonadaptive = 0;
  index_t budget_adaptive = 0;
};

struct GapResult {
  std::vector<GapRow> rows;
  std::optional<RateFit> ratio_fit;           // slope of log2(ratio) vs log2(n); set when >= 3 rows
  std::vector<std::string> skipped;           // human-readable reports of skipped grid points
};

/// Equal-budget adaption-gap experiment for 2 < p < q. Per budget n the
/// dimensions follow the coupling N1 = ceil(x0), N2 = floor(n/(c0*x0)) + 1
/// with x0 = n^((1/2-1/p)/(1/2-1/q)) and c0 = 1/21. The non-adaptive error
/// is the max over the four mu families under a2 at budget n; the adaptive
/// error the max over the same families under a3 at the deflated budget
/// floor(n/(6m)), so both audited call counts agree within a small factor.
/// Inadmissible points are reported and skipped, never silently dropped.
GapResult gap_experiment(Exponent p, Exponent q, std::span<const index_t> n_grid, index_t trials,
                         index_t m, const SeedSpec& seed);

/// CSV output. Schema (exact):
/// algo,instance,p,q,n1,n2,n,m,w,trials,seed,mean_err,stderr,card_mean,card_max
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const TrialRecord& rec);
void write_gap_header(std::ostream& out);
void write_gap_row(std::ostream& out, const GapRow& row);
void write_fit_comment(std::ostream& out, const RateFit& fit);

/// Shortest-round-trip decimal rendering used everywhere in CSV output.
std::string format_double(double x);

/// CLI entry point. Subcommands: norm-op, run, rate, gap. Exit codes:
/// 0 success, 1 usage or precondition error, 2 internal invariant breach.
int run_cli(int argc, const char* const* argv);

}  // namespace vvmean
