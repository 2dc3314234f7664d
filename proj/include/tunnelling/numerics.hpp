#pragma once

#include <cstddef>
#include <functional>

#include "tunnelling/errors.hpp"

namespace tunnelling::numerics {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Raised when a quadrature cannot reach its tolerance; carries the best
/// estimate obtained so far.
class ConvergenceFailure : public NumericalError {
 public:
  ConvergenceFailure(const std::string& what, QuadratureResult partial)
      : NumericalError(what), partial_(partial) {}
  [[nodiscard]] const QuadratureResult& partial() const noexcept { return partial_; }

 private:
  QuadratureResult partial_;
};

using Integrand = std::function<double(double)>;

/// Integrand that also receives the signed distance to the nearest endpoint:
/// a - x (<= 0) on the left half, b - x (>= 0) on the right half. Lets the
/// caller evaluate singular factors without the cancellation in b - x.
using ComplementIntegrand = std::function<double(double x, double complement)>;

inline constexpr double kMinRelTol = 1e-14;
inline constexpr int kMaxSubdivisionDepth = 60;

/// Adaptive Gauss-Kronrod (7/15) with interval halving. The local error
/// estimate is |K15 - G7|; the tolerance is rel_tol times the magnitude of
/// the whole-interval estimate.
QuadratureResult adaptive_quadrature(const Integrand& f, double a, double b, double rel_tol,
                                     int max_depth = kMaxSubdivisionDepth);

/// Tanh-sinh quadrature for integrands with integrable (x^-1/2 class)
/// singularities at one or both endpoints. f is never evaluated at a or b.
QuadratureResult endpoint_singular_quadrature(const Integrand& f, double a, double b,
                                              double rel_tol);
QuadratureResult endpoint_singular_quadrature(const ComplementIntegrand& f, double a,
                                              double b, double rel_tol);

enum class SincPower { first = 1, second = 2 };

/// power first: sin(omega t / 2) / (omega / 2); power second: its square.
/// Switches to the series t (1 - (omega t)^2 / 24) for |omega t| < 1e-4.
double sinc_sq_half(double omega, double t, SincPower power);

/// sin^2(omega t / 2) / (omega / 2). Odd in omega, tends to 0 as omega -> 0.
double sin_sq_over_half(double omega, double t);

inline constexpr double kSincSeriesThreshold = 1e-4;

}  // namespace tunnelling::numerics
