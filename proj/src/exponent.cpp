#include "vvmean/exponent.hpp"

#include <charconv>
#include <cstdlib>

namespace vvmean {

Exponent Exponent::parse(std::string_view text) {
  if (text == "inf" || text == "Inf" || text == "INF") return infinity();
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw std::domain_error("Exponent: cannot parse '" + std::string(text) + "'");
  }
  return Exponent(v);
}

std::string Exponent::str() const {
  if (is_infinite()) return "inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value_);
  return std::string(buf, ptr);
}

}  // namespace vvmean
