#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace stablepk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameter outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double estimate, double error_bound,
                  std::optional<double> abscissa = std::nullopt)
      : Error(what), estimate_(estimate), error_bound_(error_bound), abscissa_(abscissa) {}

  double estimate() const { return estimate_; }
  double error_bound() const { return error_bound_; }
  std::optional<double> abscissa() const { return abscissa_; }

 private:
  double estimate_;
  double error_bound_;
  std::optional<double> abscissa_;
};

class SeriesError : public Error {
 public:
  SeriesError(const std::string& what, double partial_sum, long terms)
      : Error(what), partial_sum_(partial_sum), terms_(terms) {}

  double partial_sum() const { return partial_sum_; }
  long terms() const { return terms_; }

 private:
  double partial_sum_;
  long terms_;
};

// Raised when a V-table cell cannot be trusted and no direct route exists.
class CancellationError : public Error {
 public:
  CancellationError(const std::string& what, int n, int k) : Error(what), n_(n), k_(k) {}
  int n() const { return n_; }
  int k() const { return k_; }

 private:
  int n_;
  int k_;
};

class StabilityIndex {
 public:
  // Detects an exact small-denominator rational form (denominator <= 1000).
  StabilityIndex(double alpha);  // NOLINT(google-explicit-constructor)
  StabilityIndex(int m, int r);

  double value() const { return alpha_; }
  operator double() const { return alpha_; }  // NOLINT(google-explicit-constructor)
  const std::optional<std::pair<int, int>>& rational() const { return rational_; }
  bool is_half() const { return alpha_ == 0.5; }

  StabilityIndex with_extremes_allowed() const;
  bool extremes_allowed() const { return allow_extremes_; }
  // Throws DomainError when alpha is outside [0.05, 0.95] and extremes are not allowed.
  void check_moderate() const;

 private:
  double alpha_;
  std::optional<std::pair<int, int>> rational_;
  bool allow_extremes_ = false;
};

enum class Method { closed_form, quadrature, mc_recursion, mc_direct };

std::string_view method_name(Method m);
Method parse_method(std::string_view s);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  Method method = Method::closed_form;
};

struct EppfValue {
  double value = 0.0;
  double std_error = 0.0;
  Method method = Method::closed_form;
  bool flagged = false;
  // Independent second route, when the operation computes one.
  std::optional<Estimate> check;

  // Agreement with the attached check: within 3 combined standard errors
  // plus an absolute allowance for deterministic routes.
  bool agrees_with_check(double deterministic_tol) const;
};

}  // namespace stablepk
