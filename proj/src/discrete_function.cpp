#include "vvmean/discrete_function.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace vvmean {

namespace {

void check_shape(index_t n1, index_t n2) {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("DiscreteFunction: dimensions must be positive");
}

}  // namespace

DiscreteFunction::DiscreteFunction(index_t n1, index_t n2) : n1_(n1), n2_(n2) {
  check_shape(n1, n2);
  values_.assign(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2), 0.0);
}

DiscreteFunction::DiscreteFunction(index_t n1, index_t n2, std::vector<double> values)
    : n1_(n1), n2_(n2), values_(std::move(values)) {
  check_shape(n1, n2);
  if (values_.size() != static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2)) {
    throw std::invalid_argument("DiscreteFunction: values length must equal n1*n2");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("DiscreteFunction: entries must be finite");
  }
}

DiscreteFunction read_matrix(std::istream& in) {
  index_t n1 = 0;
  index_t n2 = 0;
  if (!(in >> n1 >> n2)) throw std::invalid_argument("matrix: missing 'N1 N2' header");
  check_shape(n1, n2);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n1 * n2));
  for (index_t k = 0; k < n1 * n2; ++k) {
    double v = 0.0;
    if (!(in >> v)) throw std::invalid_argument("matrix: expected " + std::to_string(n1 * n2) + " values");
    values.push_back(v);
  }
  return DiscreteFunction(n1, n2, std::move(values));
}

void write_matrix(std::ostream& out, const DiscreteFunction& f) {
  out << f.rows() << ' ' << f.cols() << '\n';
  char buf[32];
  for (index_t i = 0; i < f.rows(); ++i) {
    for (index_t j = 0; j < f.cols(); ++j) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), f(i, j));
      if (j) out << ' ';
      out.write(buf, ptr - buf);
    }
    out << '\n';
  }
}

}  // namespace vvmean
