#include "tunnelling/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tunnelling/errors.hpp"

namespace tunnelling {

double incident_wavevector(const Particle& p) { return std::sqrt(2.0 * p.mass() * p.energy()); }

double evanescent_kappa(const Particle& p, double potential) {
  if (!(potential > p.energy())) {
    throw NotEvanescent("potential " + std::to_string(potential) +
                        " does not exceed the particle energy " + std::to_string(p.energy()));
  }
  return std::sqrt(2.0 * p.mass() * (potential - p.energy()));
}

WaveVectors wave_vectors(const Particle& p, double potential) {
  return {incident_wavevector(p), evanescent_kappa(p, potential)};
}

EvanescentPair evanescent_waves(double chi_abs, double x) {
  return {std::exp(-chi_abs * x), std::exp(chi_abs * x)};
}

MatchingCoefficients match_boundaries(Complex incident_amplitude, double chi_abs, double L) {
  if (!(L > 0.0)) throw DomainError("barrier length must be positive");
  if (!(chi_abs > 0.0)) throw DomainError("chi must be positive");
  return {incident_amplitude, incident_amplitude * std::exp(-2.0 * chi_abs * L)};
}

double exact_rectangular_transmission(const Particle& p, double U0, double L) {
  if (!(L > 0.0)) throw DomainError("barrier length must be positive");
  const double chi = evanescent_kappa(p, U0);
  const double s = std::sinh(chi * L);
  const double E = p.energy();
  return 1.0 / (1.0 + U0 * U0 * s * s / (4.0 * E * (U0 - E)));
}

PiecewiseMatching::PiecewiseMatching(const Particle& p, const BarrierSpec& barrier,
                                     Complex incident_amplitude) {
  double integral = 0.0;
  segments_.reserve(barrier.segments().size());
  for (const auto& s : barrier.segments()) {
    const double chi = evanescent_kappa(p, s.value);
    segments_.push_back({s.x_start, s.x_end, chi, integral});
    integral += chi * (s.x_end - s.x_start);
  }
  mc_ = {incident_amplitude, incident_amplitude * std::exp(-2.0 * integral)};
}

const PiecewiseMatching::Segment& PiecewiseMatching::segment_at(double x) const {
  if (!(x >= 0.0 && x <= length())) {
    throw DomainError("position " + std::to_string(x) + " lies outside the barrier [0, L]");
  }
  auto it = std::upper_bound(segments_.begin(), segments_.end(), x,
                             [](double v, const Segment& s) { return v < s.x_end; });
  return it == segments_.end() ? segments_.back() : *it;
}

double PiecewiseMatching::decay_exponent(double x) const {
  const Segment& s = segment_at(x);
  return s.integral_before + s.chi_abs * (x - s.x_start);
}

Complex PiecewiseMatching::phi_transmitted(double x) const {
  return mc_.alpha * std::exp(-decay_exponent(x));
}

Complex PiecewiseMatching::phi_reflected(double x) const {
  return mc_.beta * std::exp(decay_exponent(x));
}

}  // namespace tunnelling
