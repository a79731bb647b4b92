#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace vvmean {

using index_t = std::int64_t;

/// An N1 x N2 array of scalars: a point of L_p^{N1 x N2}. Row-major storage,
/// entry (i, j) is the value at row i, column j (0-based). All entries are
/// finite; the constructor enforces it.
class DiscreteFunction {
 public:
  DiscreteFunction(index_t n1, index_t n2);
  DiscreteFunction(index_t n1, index_t n2, std::vector<double> values);

  index_t rows() const { return n1_; }
  index_t cols() const { return n2_; }

  double operator()(index_t i, index_t j) const { return values_[static_cast<std::size_t>(i * n2_ + j)]; }

  std::span<const double> row(index_t i) const {
    return {values_.data() + static_cast<std::size_t>(i * n2_), static_cast<std::size_t>(n2_)};
  }

  std::span<const double> values() const { return values_; }

 private:
  index_t n1_;
  index_t n2_;
  std::vector<double> values_;
};

/// Plain text matrix format: first line "N1 N2", then N1 lines of N2 decimal
/// scalars separated by spaces.
DiscreteFunction read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const DiscreteFunction& f);

}  // namespace vvmean
