#include "tunnelling/coupling.hpp"

#include <algorithm>
#include <cmath>

#include "tunnelling/errors.hpp"
#include "tunnelling/numerics.hpp"

namespace tunnelling {

namespace {

constexpr double kOverlapQuadratureTol = 1e-13;

void require_interval(double x_j, double x_k) {
  if (!(x_j < x_k)) throw DomainError("overlap interval requires x_j < x_k");
}

// Integral of exp(-2 chi x) over [lo, hi], written with expm1 so that it
// vanishes linearly with the interval width.
double decaying_integral(double chi, double lo, double hi) {
  return -std::exp(-2.0 * chi * lo) * std::expm1(-2.0 * chi * (hi - lo)) / (2.0 * chi);
}

double growing_integral(double chi, double lo, double hi) {
  return std::exp(2.0 * chi * lo) * std::expm1(2.0 * chi * (hi - lo)) / (2.0 * chi);
}

Complex integrate_complex(const std::function<Complex(double)>& f, double a, double b) {
  const auto re = numerics::adaptive_quadrature(
      [&f](double x) { return f(x).real(); }, a, b, kOverlapQuadratureTol);
  const auto im = numerics::adaptive_quadrature(
      [&f](double x) { return f(x).imag(); }, a, b, kOverlapQuadratureTol);
  return {re.value, im.value};
}

OverlapMatrix quadrature_overlap(const std::function<Complex(double)>& phi_t,
                                 const std::function<Complex(double)>& phi_r, double x_j,
                                 double x_k) {
  OverlapMatrix X{};
  X.x_j = x_j;
  X.x_k = x_k;
  X.kk = integrate_complex([&](double x) { return std::norm(phi_t(x)); }, x_j, x_k);
  X.kj = integrate_complex([&](double x) { return std::conj(phi_t(x)) * phi_r(x); }, x_j, x_k);
  X.jk = integrate_complex([&](double x) { return std::conj(phi_r(x)) * phi_t(x); }, x_j, x_k);
  X.jj = integrate_complex([&](double x) { return std::norm(phi_r(x)); }, x_j, x_k);
  return X;
}

}  // namespace

OverlapMatrix overlap_matrix(const MatchingCoefficients& mc, double chi_abs, double x_j,
                             double x_k, OverlapMethod method) {
  require_interval(x_j, x_k);
  if (!(chi_abs > 0.0)) throw DomainError("chi must be positive");
  if (method == OverlapMethod::quadrature) {
    return quadrature_overlap(
        [&](double x) { return mc.alpha * std::exp(-chi_abs * x); },
        [&](double x) { return mc.beta * std::exp(chi_abs * x); }, x_j, x_k);
  }
  const double width = x_k - x_j;
  OverlapMatrix X{};
  X.x_j = x_j;
  X.x_k = x_k;
  X.kj = std::conj(mc.alpha) * mc.beta * width;
  X.jk = std::conj(mc.beta) * mc.alpha * width;
  X.kk = std::norm(mc.alpha) * decaying_integral(chi_abs, x_j, x_k);
  X.jj = std::norm(mc.beta) * growing_integral(chi_abs, x_j, x_k);
  return X;
}

OverlapMatrix overlap_matrix(const PiecewiseMatching& pm, double x_j, double x_k,
                             OverlapMethod method) {
  require_interval(x_j, x_k);
  if (x_j < 0.0 || x_k > pm.length()) {
    throw DomainError("overlap interval must lie inside the barrier");
  }
  if (method == OverlapMethod::quadrature) {
    // Integrate segment by segment so the kinks in the profile sit on panel edges.
    OverlapMatrix total{};
    total.x_j = x_j;
    total.x_k = x_k;
    for (const auto& s : pm.segments()) {
      const double lo = std::max(s.x_start, x_j);
      const double hi = std::min(s.x_end, x_k);
      if (!(lo < hi)) continue;
      const OverlapMatrix part = quadrature_overlap(
          [&](double x) {
            return pm.coefficients().alpha * std::exp(-(s.integral_before + s.chi_abs * (x - s.x_start)));
          },
          [&](double x) {
            return pm.coefficients().beta * std::exp(s.integral_before + s.chi_abs * (x - s.x_start));
          },
          lo, hi);
      total.kk += part.kk;
      total.kj += part.kj;
      total.jk += part.jk;
      total.jj += part.jj;
    }
    return total;
  }
  const auto& mc = pm.coefficients();
  OverlapMatrix X{};
  X.x_j = x_j;
  X.x_k = x_k;
  const double width = x_k - x_j;
  X.kj = std::conj(mc.alpha) * mc.beta * width;
  X.jk = std::conj(mc.beta) * mc.alpha * width;
  double kk = 0.0;
  double jj = 0.0;
  for (const auto& s : pm.segments()) {
    const double lo = std::max(s.x_start, x_j);
    const double hi = std::min(s.x_end, x_k);
    if (!(lo < hi)) continue;
    // Shift to the segment origin: exp(-2 I(x)) = exp(-2 I0) exp(-2 chi (x - x_start)).
    kk += std::exp(-2.0 * s.integral_before) *
          decaying_integral(s.chi_abs, lo - s.x_start, hi - s.x_start);
    jj += std::exp(2.0 * s.integral_before) *
          growing_integral(s.chi_abs, lo - s.x_start, hi - s.x_start);
  }
  X.kk = std::norm(mc.alpha) * kk;
  X.jj = std::norm(mc.beta) * jj;
  return X;
}

TransitionMatrix transition_matrix(const OverlapMatrix& X, const PerturbationSpec& pert) {
  const double v0 = pert.amplitude();
  return {v0 * X.jk, v0 * X.kj};
}

RabiParameters rabi_frequencies(const OverlapMatrix& X, const TransitionMatrix& Y,
                                const EnergyPair& ep, double singularity_tolerance) {
  const Complex d = X.determinant();
  const double scale = std::abs(X.kk * X.jj);
  if (!std::isfinite(std::abs(d)) || std::abs(d) <= singularity_tolerance * scale) {
    throw SingularOverlap("overlap determinant vanishes: the measurement interval is too "
                          "narrow to separate the two components");
  }
  const Complex omega0 = X.kj * Y.jk / d;
  if (std::abs(omega0.imag()) > 1e-9 * std::abs(omega0)) {
    throw DomainError("coupling frequency is complex; alpha* beta must be real");
  }
  return {omega0.real(), ep.omega_jk() - omega0.real(), ep.omega_kj()};
}

namespace {

Amplitudes amplitudes_unchecked(const RabiParameters& rp, Complex ratio, double t) {
  const Complex phase = std::polar(1.0, rp.omega0 * t);
  const Complex i{0.0, 1.0};
  // sin(omega t/2)/(omega/2) is odd in t, which the finite differences
  // around t = 0 rely on.
  const double s = t < 0.0 ? -numerics::sinc_sq_half(rp.omega, -t, numerics::SincPower::first)
                           : numerics::sinc_sq_half(rp.omega, t, numerics::SincPower::first);
  return {phase, -i * rp.omega0 * ratio * phase * s};
}

}  // namespace

Amplitudes amplitude_coefficients(const RabiParameters& rp, const OverlapMatrix& X, double t) {
  if (!(t >= 0.0)) throw DomainError("time must be non-negative");
  if (X.kj == Complex{}) throw SingularOverlap("X_kj vanishes; a_j is undefined");
  return amplitudes_unchecked(rp, X.kk / X.kj, t);
}

CoupledResidual coupled_equation_residual(const RabiParameters& rp, const OverlapMatrix& X,
                                          const TransitionMatrix& Y, double t) {
  if (!(t >= 0.0)) throw DomainError("time must be non-negative");
  if (X.kj == Complex{}) throw SingularOverlap("X_kj vanishes; a_j is undefined");
  const Complex ratio = X.kk / X.kj;
  const double fastest =
      std::max({std::abs(rp.omega0), std::abs(rp.omega), std::abs(rp.omega_kj), 1.0});
  const double h = 1e-4 / fastest;
  const Amplitudes a = amplitudes_unchecked(rp, ratio, t);
  const Amplitudes plus = amplitudes_unchecked(rp, ratio, t + h);
  const Amplitudes minus = amplitudes_unchecked(rp, ratio, t - h);
  const Complex dak = (plus.a_k - minus.a_k) / (2.0 * h);
  const Complex daj = (plus.a_j - minus.a_j) / (2.0 * h);
  const Complex i{0.0, 1.0};
  const Complex rot = std::polar(1.0, rp.omega_kj * t);

  // i a_k' X_jk + i a_j' X_jj e^{i w_kj t} = a_k Y_kj + a_j Y_jj e^{i w_kj t}
  const Complex l1a = i * dak * X.jk;
  const Complex l1b = i * daj * X.jj * rot;
  const Complex r1a = a.a_k * Y.kj;
  const Complex r1b = a.a_j * TransitionMatrix::jj * rot;
  // i a_k' X_kk + i a_j' X_kj e^{i w_kj t} = a_k Y_kk + a_j Y_jk e^{i w_kj t}
  const Complex l2a = i * dak * X.kk;
  const Complex l2b = i * daj * X.kj * rot;
  const Complex r2a = a.a_k * TransitionMatrix::kk;
  const Complex r2b = a.a_j * Y.jk * rot;

  const double res1 = std::abs(l1a + l1b - r1a - r1b);
  const double res2 = std::abs(l2a + l2b - r2a - r2b);
  const double scale1 = std::max({std::abs(l1a), std::abs(l1b), std::abs(r1a), std::abs(r1b)});
  const double scale2 = std::max({std::abs(l2a), std::abs(l2b), std::abs(r2a), std::abs(r2b)});
  return {t, res1, res2, scale1 > 0.0 ? res1 / scale1 : 0.0,
          scale2 > 0.0 ? res2 / scale2 : 0.0};
}

std::vector<CoupledResidual> coupled_residual_profile(const RabiParameters& rp,
                                                      const OverlapMatrix& X,
                                                      const TransitionMatrix& Y, double t_max,
                                                      std::size_t n) {
  if (n < 2 || !(t_max > 0.0)) throw DomainError("profile needs n >= 2 and t_max > 0");
  std::vector<CoupledResidual> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t_max * static_cast<double>(i) / static_cast<double>(n - 1);
    out.push_back(coupled_equation_residual(rp, X, Y, t));
  }
  return out;
}

CouplingSolution solve_rectangular(const Particle& p, double U0, double L,
                                   const PerturbationSpec& pert, const EnergyPair& ep,
                                   double x_j, double x_k, Complex incident_amplitude) {
  CouplingSolution s{};
  s.wave_vectors = wave_vectors(p, U0);
  s.matching = match_boundaries(incident_amplitude, s.wave_vectors.chi_abs, L);
  s.overlap = overlap_matrix(s.matching, s.wave_vectors.chi_abs, x_j, x_k);
  s.transition = transition_matrix(s.overlap, pert);
  s.rabi = rabi_frequencies(s.overlap, s.transition, ep);
  return s;
}

}  // namespace tunnelling
