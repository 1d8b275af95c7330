#pragma once

// Test-side reference values, computed without the library's own routines.

#include <cmath>
#include <functional>
#include <numbers>

#include "doctest.h"
#include "stablepk/numerics.hpp"

namespace oracle {

// Composite Simpson on [a, b] with m (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int m = 20000) {
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int i = 1; i < m; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Power-law substitution x = a + (b - a) u^r removes an endpoint singularity at a.
inline double simpson_graded(const std::function<double(double)>& f, double a, double b, double r = 4.0,
                             int m = 20000) {
  auto g = [&](double u) { return f(a + (b - a) * std::pow(u, r)) * (b - a) * r * std::pow(u, r - 1.0); };
  const double h = 1.0 / m;
  // the endpoint value by linear extrapolation from the first two nodes
  return simpson([&](double u) { return u <= 0 ? 2.0 * g(h) - g(2.0 * h) : g(u); }, 0.0, 1.0, m);
}

// Graded at both ends, for integrands singular at a and at b.
inline double simpson_two_sided(const std::function<double(double)>& f, double a, double b, double r = 4.0,
                                int m = 20000) {
  const double mid = 0.5 * (a + b);
  return simpson_graded(f, a, mid, r, m) + simpson_graded([&](double x) { return f(a + b - x); }, a, mid, r, m);
}

inline double pd_weight(double a, double th, int n, int k) {
  double num = 1.0;
  for (int i = 1; i < k; ++i) num *= th + i * a;
  double den = 1.0;
  for (int i = 1; i < n; ++i) den *= th + i;
  return num / den;
}

inline double half_pdf(double t) { return std::exp(-1.0 / (4.0 * t)) / (2.0 * std::sqrt(std::numbers::pi) * std::pow(t, 1.5)); }

}  // namespace oracle

#define CHECK_MC(est, target)                                                              \
  do {                                                                                     \
    const auto& est_ = (est);                                                              \
    INFO("mean " << est_.mean << " se " << est_.std_error << " target " << (target));      \
    CHECK(std::abs(est_.mean - (target)) <= 3.0 * est_.std_error + 1e-15);                 \
  } while (0)
