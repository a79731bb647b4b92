#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vvmean {

/// Norm exponent: an extended real in [1, inf]. Infinity is an explicit,
/// exactly representable state; derived quantities (1/p, p-bar) are defined
/// case-wise so that 1/inf is exactly 0.
class Exponent {
 public:
  Exponent(double value) : value_(value) {
    if (std::isnan(value) || value < 1.0) {
      throw std::domain_error("Exponent: value must lie in [1, inf]");
    }
  }

  static Exponent infinity() { return Exponent(std::numeric_limits<double>::infinity()); }

  bool is_infinite() const { return std::isinf(value_); }

  /// Raw value; +inf in the infinite state.
  double value() const { return value_; }

  /// 1/p with 1/inf := 0.
  double reciprocal() const { return is_infinite() ? 0.0 : 1.0 / value_; }

  friend bool operator==(const Exponent& a, const Exponent& b) { return a.value_ == b.value_; }
  friend bool operator<(const Exponent& a, const Exponent& b) { return a.value_ < b.value_; }
  friend bool operator<=(const Exponent& a, const Exponent& b) { return a.value_ <= b.value_; }
  friend bool operator>(const Exponent& a, const Exponent& b) { return a.value_ > b.value_; }
  friend bool operator>=(const Exponent& a, const Exponent& b) { return a.value_ >= b.value_; }

  /// Accepts a decimal value or the literal "inf".
  static Exponent parse(std::string_view text);

  /// Shortest-round-trip decimal, or the literal "inf".
  std::string str() const;

 private:
  double value_;
};

/// The (p, q) pair of a mean-computation problem: inputs measured in L_p,
/// outputs in L_q.
struct ExponentPair {
  Exponent p;
  Exponent q;

  /// min(p, 2), finite by construction.
  double p_bar() const { return p.is_infinite() ? 2.0 : std::min(p.value(), 2.0); }
};

}  // namespace vvmean
