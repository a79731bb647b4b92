#include "vvmean/tensor_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vvmean/compensated.hpp"

namespace vvmean {

double lp_norm(std::span<const double> values, Exponent p) {
  if (values.empty()) throw std::invalid_argument("lp_norm: empty input");
  if (p.is_infinite()) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  const double pv = p.value();
  NeumaierSum acc;
  if (pv == 1.0) {
    for (double v : values) acc.add(std::abs(v));
  } else if (pv == 2.0) {
    for (double v : values) acc.add(v * v);
  } else {
    for (double v : values) acc.add(std::pow(std::abs(v), pv));
  }
  return std::pow(acc.value() / static_cast<double>(values.size()), 1.0 / pv);
}

double lp_norm(const DiscreteFunction& f, Exponent p) { return lp_norm(f.values(), p); }

std::vector<double> mean_rows(const DiscreteFunction& f) {
  std::vector<double> out(static_cast<std::size_t>(f.rows()));
  const double inv = 1.0 / static_cast<double>(f.cols());
  for (index_t i = 0; i < f.rows(); ++i) {
    NeumaierSum acc;
    for (double v : f.row(i)) acc.add(v);
    out[static_cast<std::size_t>(i)] = acc.value() * inv;
  }
  return out;
}

double operator_norm(Exponent p, Exponent q, index_t n1) {
  if (n1 < 1) throw std::invalid_argument("operator_norm: n1 must be positive");
  const double e = std::max(p.reciprocal() - q.reciprocal(), 0.0);
  return std::pow(static_cast<double>(n1), e);
}

DiscreteFunction norm_witness(Exponent p, Exponent q, index_t n1, index_t n2) {
  if (p > q) throw std::domain_error("norm_witness: requires p <= q");
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("norm_witness: dimensions must be positive");
  const double amp = std::pow(static_cast<double>(n1), p.reciprocal());
  std::vector<double> values(static_cast<std::size_t>(n1 * n2), 0.0);
  for (index_t j = 0; j < n2; ++j) values[static_cast<std::size_t>(j)] = amp;
  return DiscreteFunction(n1, n2, std::move(values));
}

}  // namespace vvmean
