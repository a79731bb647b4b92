#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "vvmean/discrete_function.hpp"
#include "vvmean/exponent.hpp"
#include "vvmean/rng.hpp"

namespace vvmean {

/// Raised when an audited oracle-call count breaks its proven bound. This is
/// an internal invariant breach, not a user error; the CLI maps it to exit 2.
struct BudgetViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// Exact count of oracle calls (point evaluations f(i,j)) by stage. Repeated
/// reads of the same entry count every time.
struct BudgetAudit {
  index_t stage1_calls = 0;
  index_t stage2_calls = 0;
  index_t nominal_n = 0;
  index_t repetitions_m = 1;

  index_t total_calls() const { return stage1_calls + stage2_calls; }
};

/// Parameters of the adaptive algorithm: budget n, median repetitions m,
/// moment order w used in error reporting.
struct AdaptiveConfig {
  index_t n = 1;
  index_t m = 1;
  double w = 1.0;

  void validate() const {
    if (n < 1 || m < 1 || !(w >= 1.0)) {
      throw std::invalid_argument("AdaptiveConfig: need n >= 1, m >= 1, w >= 1");
    }
  }
};

struct MeanResult {
  std::vector<double> values;
  BudgetAudit audit;
};

/// Holder exponent p1 of the norm-estimation error moment:
/// 1/p1 = 1 + 1/p - 1/q when p < inf or q > 1; the fixed choice p1 = 3 for
/// (p = inf, q = 1), where any value in (2, inf) works.
double holder_exponent_p1(Exponent p, double q);

/// Sampled L_q norm estimate of one row: ((1/n) * sum |row[xi_i]|^q)^(1/q)
/// with xi_i i.i.d. uniform column indices. Consumes exactly n index draws.
double a1_norm_estimate(std::span<const double> row, double q, index_t n, Stream& s);

/// Order-statistic median: middle element for odd m, average of the two
/// middle elements for even m. Complex inputs take componentwise real
/// medians.
double median_scalar(std::span<const double> values);
std::complex<double> median_scalar(std::span<const std::complex<double>> values);

/// Non-adaptive mean: zero vector for n < N1, otherwise the average of
/// ceil(n/N1) uniformly sampled columns, the same columns for every row.
/// Requires n < N1*N2 (otherwise computing the mean exactly is cheaper).
MeanResult a2_mean(const DiscreteFunction& f, index_t n, Stream& s);

/// First stage of the adaptive algorithm: median-boosted sampled L_2 norm
/// estimates of every row, sharing one index table across rows. Consumes
/// m * ceil(n/N1) index draws and m * N1 * ceil(n/N1) oracle calls.
std::vector<double> a3_first_stage(const DiscreteFunction& f, index_t n, index_t m, Stream& s);

/// Sample allocation: row i keeps the base count ceil(n/N1) when its
/// estimated squared norm is at most the average, and gets
/// ceil(atilde_i^2 * n / sum atilde_l^2) otherwise. Every entry is at least
/// ceil(n/N1); an all-zero input takes the base branch everywhere.
std::vector<index_t> a3_allocate(std::span<const double> atilde, index_t n);

/// Two-stage adaptive mean: norm estimation, allocation, then per-row means
/// of n_i samples, median-boosted over m repetitions. Audited calls stay
/// within 6*m*n.
MeanResult a3_mean(const DiscreteFunction& f, const AdaptiveConfig& cfg, Stream& s);

/// Smallest odd integer >= (8(w+1)/log2 e) * log2(N1+N2): the theoretical
/// repetition count guaranteeing the failure probability bound. Callers may
/// use any m >= 1 instead.
index_t default_m(index_t n1, index_t n2, double w);

/// The trivial algorithm: zero output, zero oracle calls. Its error equals
/// the norm of the true mean, which the operator norm bounds.
MeanResult zero_algorithm(const DiscreteFunction& f);

}  // namespace vvmean
