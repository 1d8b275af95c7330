#include "stablepk/core.hpp"

#include <cmath>
#include <numeric>

namespace stablepk {

StabilityIndex::StabilityIndex(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("alpha must lie in (0,1), got " + std::to_string(alpha));
  }
  for (int r = 2; r <= 1000; ++r) {
    const int m = static_cast<int>(std::lround(alpha * r));
    if (m <= 0 || m >= r || std::gcd(m, r) != 1) continue;
    if (static_cast<double>(m) / static_cast<double>(r) == alpha) {
      rational_ = std::make_pair(m, r);
      break;
    }
  }
}

StabilityIndex::StabilityIndex(int m, int r) {
  if (m <= 0 || r <= 0 || m >= r) {
    throw DomainError("rational alpha needs 0 < m < r");
  }
  const int g = std::gcd(m, r);
  m /= g;
  r /= g;
  alpha_ = static_cast<double>(m) / static_cast<double>(r);
  rational_ = std::make_pair(m, r);
}

StabilityIndex StabilityIndex::with_extremes_allowed() const {
  StabilityIndex copy = *this;
  copy.allow_extremes_ = true;
  return copy;
}

void StabilityIndex::check_moderate() const {
  if (!allow_extremes_ && (alpha_ < 0.05 || alpha_ > 0.95)) {
    throw DomainError("alpha outside [0.05, 0.95]; use with_extremes_allowed() to override");
  }
}

std::string_view method_name(Method m) {
  switch (m) {
    case Method::closed_form:
      return "closed_form";
    case Method::quadrature:
      return "quadrature";
    case Method::mc_recursion:
      return "mc_recursion";
    case Method::mc_direct:
      return "mc_direct";
  }
  return "unknown";
}

Method parse_method(std::string_view s) {
  if (s == "closed_form") return Method::closed_form;
  if (s == "quadrature") return Method::quadrature;
  if (s == "mc_recursion") return Method::mc_recursion;
  if (s == "mc_direct") return Method::mc_direct;
  throw DomainError("unknown method tag: " + std::string(s));
}

bool EppfValue::agrees_with_check(double deterministic_tol) const {
  if (!check) return true;
  const double se = std::hypot(std_error, check->std_error);
  return std::abs(value - check->value) <= 3.0 * se + deterministic_tol;
}

}  // namespace stablepk
