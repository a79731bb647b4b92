#pragma once

#include <span>
#include <vector>

#include "vvmean/discrete_function.hpp"
#include "vvmean/exponent.hpp"

namespace vvmean {

/// L_p norm over the normalized counting measure:
/// ((1/size) * sum |f(i)|^p)^(1/p) for finite p, max |f(i)| for p = inf.
double lp_norm(std::span<const double> values, Exponent p);
double lp_norm(const DiscreteFunction& f, Exponent p);

/// The mean operator: output[i] = (1/N2) * sum_j f(i, j).
std::vector<double> mean_rows(const DiscreteFunction& f);

/// Exact operator norm of the mean operator L_p^{N1 x N2} -> L_q^{N1}:
/// n1^((1/p - 1/q)_+).
double operator_norm(Exponent p, Exponent q, index_t n1);

/// Unit-norm input attaining the operator norm for p <= q: all mass on the
/// first row, f(0, j) = n1^(1/p). Throws std::domain_error for p > q.
DiscreteFunction norm_witness(Exponent p, Exponent q, index_t n1, index_t n2);

}  // namespace vvmean
