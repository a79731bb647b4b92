#pragma once

#include <cmath>

namespace vvmean {

/// Kahan-Babuska (Neumaier) compensated accumulator. All norms, means and
/// moment aggregations go through this so that results are reproducible to
/// well below 1e-12 relative regardless of build flags.
class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace vvmean
