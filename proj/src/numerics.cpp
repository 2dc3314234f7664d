#include "tunnelling/numerics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace tunnelling::numerics {

namespace {

// Gauss-Kronrod 15-point nodes on [-1, 1] (non-negative half) and weights.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss 7-point weights, matching Kronrod nodes 1, 3, 5, 7.
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double kronrod;
  double gauss;
};

Panel gauss_kronrod(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  return {kronrod * half, gauss * half};
}

void require_interval(double a, double b, double rel_tol) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("quadrature interval must satisfy a < b with finite bounds");
  }
  if (!(rel_tol >= kMinRelTol)) {
    throw DomainError("relative tolerance must be at least 1e-14");
  }
}

class GaussKronrodIntegrator {
 public:
  GaussKronrodIntegrator(const Integrand& f, double total_width, double tolerance,
                         int max_depth)
      : f_(f), total_width_(total_width), tolerance_(tolerance), max_depth_(max_depth) {}

  void integrate(double a, double b, Panel panel, int depth) {
    const double err = std::abs(panel.kronrod - panel.gauss);
    const double local_tol = tolerance_ * (b - a) / total_width_;
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * std::abs(panel.kronrod);
    if (err <= local_tol || err <= roundoff) {
      accept(panel.kronrod, err);
      return;
    }
    if (depth >= max_depth_) {
      accept(panel.kronrod, err);
      exhausted_ = true;
      return;
    }
    const double mid = 0.5 * (a + b);
    const Panel left = evaluate(a, mid);
    const Panel right = evaluate(mid, b);
    integrate(a, mid, left, depth + 1);
    integrate(mid, b, right, depth + 1);
  }

  Panel evaluate(double a, double b) {
    evaluations_ += 15;
    return gauss_kronrod(f_, a, b);
  }

  [[nodiscard]] QuadratureResult result() const { return {value_, error_, evaluations_}; }
  [[nodiscard]] bool exhausted() const noexcept { return exhausted_; }

 private:
  void accept(double value, double err) {
    // Kahan summation keeps the total independent of panel count.
    const double y = value - compensation_;
    const double t = value_ + y;
    compensation_ = (t - value_) - y;
    value_ = t;
    error_ += err;
  }

  const Integrand& f_;
  double total_width_;
  double tolerance_;
  int max_depth_;
  double value_ = 0.0;
  double compensation_ = 0.0;
  double error_ = 0.0;
  std::size_t evaluations_ = 0;
  bool exhausted_ = false;
};

}  // namespace

QuadratureResult adaptive_quadrature(const Integrand& f, double a, double b, double rel_tol,
                                     int max_depth) {
  require_interval(a, b, rel_tol);
  const Panel whole = gauss_kronrod(f, a, b);
  // Scale from the whole-interval estimate; fall back to an absolute scale of
  // the integrand's typical size when the integral nearly cancels.
  double scale = std::abs(whole.kronrod);
  if (scale < std::abs(whole.kronrod - whole.gauss)) {
    scale = std::max(scale, std::abs(whole.gauss));
  }
  if (scale == 0.0) scale = std::numeric_limits<double>::min();
  GaussKronrodIntegrator integrator(f, b - a, rel_tol * scale, max_depth);
  integrator.integrate(a, b, whole, 0);
  QuadratureResult result = integrator.result();
  result.evaluations += 15;
  if (!std::isfinite(result.value)) {
    throw ConvergenceFailure("integrand produced a non-finite value", result);
  }
  if (integrator.exhausted()) {
    throw ConvergenceFailure(
        "adaptive quadrature exceeded subdivision depth " + std::to_string(max_depth), result);
  }
  return result;
}

QuadratureResult endpoint_singular_quadrature(const ComplementIntegrand& f, double a,
                                              double b, double rel_tol) {
  require_interval(a, b, rel_tol);
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  constexpr int kMaxLevel = 12;
  // Beyond this abscissa parameter the node distance underflows in double.
  constexpr double kTMax = 6.5;

  const double half = 0.5 * (b - a);
  const double center = 0.5 * (a + b);
  std::size_t evaluations = 0;

  // Weighted sample at abscissa parameter t >= 0 (both mirror nodes).
  auto sample = [&](double t) -> double {
    const double u = kHalfPi * std::sinh(t);
    const double cosh_u = std::cosh(u);
    // Distance from the endpoint in [-1, 1] coordinates: 1 - tanh(u).
    const double edge = std::exp(-u) / cosh_u;
    const double weight = kHalfPi * std::cosh(t) / (cosh_u * cosh_u);
    if (t == 0.0) {
      ++evaluations;
      return weight * f(center, center - a <= b - center ? a - center : b - center);
    }
    const double offset = half * edge;
    if (weight == 0.0 || offset == 0.0) return 0.0;
    const double x_left = a + offset;
    const double x_right = b - offset;
    evaluations += 2;
    return weight * (f(x_left, -offset) + f(x_right, offset));
  };

  double h = 1.0;
  double sum = sample(0.0);
  for (double t = h; t <= kTMax; t += h) sum += sample(t);
  double estimate = half * h * sum;
  double error = std::numeric_limits<double>::infinity();

  for (int level = 1; level <= kMaxLevel; ++level) {
    h *= 0.5;
    // Only the new (odd) nodes are evaluated at each refinement.
    for (double t = h; t <= kTMax; t += 2.0 * h) sum += sample(t);
    const double refined = half * h * sum;
    if (!std::isfinite(refined)) {
      throw ConvergenceFailure("integrand produced a non-finite value",
                               {estimate, error, evaluations});
    }
    error = std::abs(refined - estimate);
    estimate = refined;
    if (level >= 3 && error <= rel_tol * std::abs(estimate)) {
      return {estimate, error, evaluations};
    }
  }
  throw ConvergenceFailure("tanh-sinh quadrature did not converge",
                           {estimate, error, evaluations});
}

QuadratureResult endpoint_singular_quadrature(const Integrand& f, double a, double b,
                                              double rel_tol) {
  // Nodes that round onto an endpoint cannot be sampled through x alone.
  return endpoint_singular_quadrature(ComplementIntegrand([&f, a, b](double x, double c) {
                                        if ((c < 0.0 && x <= a) || (c > 0.0 && x >= b)) return 0.0;
                                        return f(x);
                                      }),
                                      a, b, rel_tol);
}

double sinc_sq_half(double omega, double t, SincPower power) {
  const double phase = omega * t;
  double first;
  if (std::abs(phase) < kSincSeriesThreshold) {
    first = t * (1.0 - phase * phase / 24.0);
  } else {
    first = std::sin(0.5 * phase) / (0.5 * omega);
  }
  return power == SincPower::first ? first : first * first;
}

double sin_sq_over_half(double omega, double t) {
  return sinc_sq_half(omega, t, SincPower::first) * std::sin(0.5 * omega * t);
}

}  // namespace tunnelling::numerics
