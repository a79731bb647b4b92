#include "vvmean/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "vvmean/compensated.hpp"

namespace vvmean {

namespace {

inline index_t ceil_div(index_t a, index_t b) { return (a + b - 1) / b; }

}  // namespace

double holder_exponent_p1(Exponent p, double q) {
  if (!(q >= 1.0)) throw std::domain_error("holder_exponent_p1: q must satisfy q >= 1");
  if (!(Exponent(q) < p)) throw std::domain_error("holder_exponent_p1: requires q < p");
  if (p.is_infinite() && q == 1.0) return 3.0;  // any value in (2, inf) works; fixed for reproducibility
  return 1.0 / (1.0 + p.reciprocal() - 1.0 / q);
}

double a1_norm_estimate(std::span<const double> row, double q, index_t n, Stream& s) {
  if (row.empty()) throw std::invalid_argument("a1_norm_estimate: empty row");
  if (!(q >= 1.0) || std::isinf(q)) throw std::domain_error("a1_norm_estimate: q must be a finite real >= 1");
  if (n < 1) throw std::invalid_argument("a1_norm_estimate: n must be positive");
  const index_t n2 = static_cast<index_t>(row.size());
  NeumaierSum acc;
  for (index_t i = 0; i < n; ++i) {
    const double v = std::abs(row[static_cast<std::size_t>(s.uniform_index(n2) - 1)]);
    acc.add(q == 2.0 ? v * v : (q == 1.0 ? v : std::pow(v, q)));
  }
  return std::pow(acc.value() / static_cast<double>(n), 1.0 / q);
}

double median_scalar(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("median_scalar: empty input");
  std::vector<double> w(values.begin(), values.end());
  const std::size_t m = w.size();
  const std::size_t k = m / 2;
  std::nth_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k), w.end());
  if (m % 2 == 1) return w[k];
  const double hi = w[k];
  const double lo = *std::max_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
  return std::midpoint(lo, hi);
}

std::complex<double> median_scalar(std::span<const std::complex<double>> values) {
  if (values.empty()) throw std::invalid_argument("median_scalar: empty input");
  std::vector<double> re(values.size());
  std::vector<double> im(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    re[i] = values[i].real();
    im[i] = values[i].imag();
  }
  return {median_scalar(re), median_scalar(im)};
}

MeanResult a2_mean(const DiscreteFunction& f, index_t n, Stream& s) {
  if (n < 1) throw std::invalid_argument("a2_mean: n must be positive");
  const index_t n1 = f.rows();
  const index_t n2 = f.cols();
  if (n >= n1 * n2) throw std::domain_error("a2_mean: n >= N1*N2, exact computation is cheaper");

  MeanResult r;
  r.values.assign(static_cast<std::size_t>(n1), 0.0);
  r.audit.nominal_n = n;
  r.audit.repetitions_m = 1;
  if (n < n1) return r;

  const index_t lp = ceil_div(n, n1);
  std::vector<index_t> cols(static_cast<std::size_t>(lp));
  for (auto& c : cols) c = s.uniform_index(n2) - 1;

  const double inv = 1.0 / static_cast<double>(lp);
  for (index_t i = 0; i < n1; ++i) {
    NeumaierSum acc;
    for (index_t c : cols) acc.add(f(i, c));
    r.values[static_cast<std::size_t>(i)] = acc.value() * inv;
  }
  r.audit.stage1_calls = n1 * lp;
  if (r.audit.total_calls() > 2 * n) {
    throw BudgetViolation("a2_mean: audited calls exceed 2n");
  }
  return r;
}

std::vector<double> a3_first_stage(const DiscreteFunction& f, index_t n, index_t m, Stream& s) {
  const index_t n1 = f.rows();
  const index_t n2 = f.cols();
  if (n < n1) throw std::invalid_argument("a3_first_stage: requires n >= N1");
  if (m < 1) throw std::invalid_argument("a3_first_stage: m must be positive");

  const index_t lp = ceil_div(n, n1);
  // One shared index table for all rows, repetition-major.
  std::vector<index_t> xi(static_cast<std::size_t>(m * lp));
  for (auto& x : xi) x = s.uniform_index(n2) - 1;

  std::vector<double> atilde(static_cast<std::size_t>(n1));
  std::vector<double> reps(static_cast<std::size_t>(m));
  const double inv = 1.0 / static_cast<double>(lp);
  for (index_t i = 0; i < n1; ++i) {
    for (index_t k = 0; k < m; ++k) {
      NeumaierSum acc;
      for (index_t j = 0; j < lp; ++j) {
        const double v = f(i, xi[static_cast<std::size_t>(k * lp + j)]);
        acc.add(v * v);
      }
      reps[static_cast<std::size_t>(k)] = std::sqrt(acc.value() * inv);
    }
    atilde[static_cast<std::size_t>(i)] = median_scalar(reps);
  }
  return atilde;
}

std::vector<index_t> a3_allocate(std::span<const double> atilde, index_t n) {
  const index_t n1 = static_cast<index_t>(atilde.size());
  if (n1 < 1) throw std::invalid_argument("a3_allocate: empty input");
  if (n < n1) throw std::invalid_argument("a3_allocate: requires n >= N1");
  for (double a : atilde) {
    if (!(a >= 0.0)) throw std::invalid_argument("a3_allocate: row norm estimates must be nonnegative");
  }

  NeumaierSum ss;
  for (double a : atilde) ss.add(a * a);
  const double total = ss.value();
  const double avg = total / static_cast<double>(n1);
  const index_t base = ceil_div(n, n1);

  std::vector<index_t> out(static_cast<std::size_t>(n1));
  for (index_t i = 0; i < n1; ++i) {
    const double ai2 = atilde[static_cast<std::size_t>(i)] * atilde[static_cast<std::size_t>(i)];
    if (ai2 <= avg) {
      out[static_cast<std::size_t>(i)] = base;
    } else {
      out[static_cast<std::size_t>(i)] =
          static_cast<index_t>(std::ceil(ai2 * static_cast<double>(n) / total));
    }
  }
  return out;
}

MeanResult a3_mean(const DiscreteFunction& f, const AdaptiveConfig& cfg, Stream& s) {
  cfg.validate();
  const index_t n1 = f.rows();
  const index_t n2 = f.cols();
  const index_t n = cfg.n;
  const index_t m = cfg.m;
  if (n >= n1 * n2) throw std::domain_error("a3_mean: n >= N1*N2, exact computation is cheaper");

  MeanResult r;
  r.values.assign(static_cast<std::size_t>(n1), 0.0);
  r.audit.nominal_n = n;
  r.audit.repetitions_m = m;
  if (n < n1) return r;

  const index_t lp = ceil_div(n, n1);
  const std::vector<double> atilde = a3_first_stage(f, n, m, s);
  r.audit.stage1_calls = m * n1 * lp;

  const std::vector<index_t> ni = a3_allocate(atilde, n);
  const index_t jmax = *std::max_element(ni.begin(), ni.end());

  // Shared second-stage table; row i reads the first n_i draws of each
  // repetition. Sized by max n_i, which can marginally exceed n.
  std::vector<index_t> eta(static_cast<std::size_t>(m * jmax));
  for (auto& x : eta) x = s.uniform_index(n2) - 1;

  std::vector<double> reps(static_cast<std::size_t>(m));
  index_t sum_ni = 0;
  for (index_t i = 0; i < n1; ++i) {
    const index_t niv = ni[static_cast<std::size_t>(i)];
    sum_ni += niv;
    for (index_t k = 0; k < m; ++k) {
      NeumaierSum acc;
      for (index_t j = 0; j < niv; ++j) acc.add(f(i, eta[static_cast<std::size_t>(k * jmax + j)]));
      reps[static_cast<std::size_t>(k)] = acc.value() / static_cast<double>(niv);
    }
    r.values[static_cast<std::size_t>(i)] = median_scalar(reps);
  }
  r.audit.stage2_calls = m * sum_ni;
  if (r.audit.total_calls() > 6 * m * n) {
    throw BudgetViolation("a3_mean: audited calls exceed 6mn");
  }
  return r;
}

index_t default_m(index_t n1, index_t n2, double w) {
  if (n1 < 1 || n2 < 1 || !(w >= 1.0)) throw std::invalid_argument("default_m: need N1,N2 >= 1 and w >= 1");
  const double c2 = 8.0 * (w + 1.0) / std::log2(std::numbers::e);
  const double x = c2 * std::log2(static_cast<double>(n1 + n2));
  index_t m = std::max<index_t>(1, static_cast<index_t>(std::ceil(x)));
  if (m % 2 == 0) ++m;
  return m;
}

MeanResult zero_algorithm(const DiscreteFunction& f) {
  MeanResult r;
  r.values.assign(static_cast<std::size_t>(f.rows()), 0.0);
  return r;
}

}  // namespace vvmean
