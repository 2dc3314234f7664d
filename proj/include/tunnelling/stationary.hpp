#pragma once

#include <complex>
#include <vector>

#include "tunnelling/core_model.hpp"

namespace tunnelling {

using Complex = std::complex<double>;

struct WaveVectors {
  double K;        ///< incident wave vector sqrt(2 m E)
  double chi_abs;  ///< |chi| = sqrt(2 m (U - E))
};

/// Amplitudes of the transmitted (alpha) and reflected (beta) evanescent
/// components inside the barrier.
struct MatchingCoefficients {
  Complex alpha;
  Complex beta;

  friend bool operator==(const MatchingCoefficients&, const MatchingCoefficients&) = default;
};

struct EvanescentPair {
  double f;  ///< decaying wave exp(-chi x)
  double g;  ///< growing wave exp(+chi x)
};

double incident_wavevector(const Particle& p);

/// Throws NotEvanescent when U <= E.
double evanescent_kappa(const Particle& p, double potential);

WaveVectors wave_vectors(const Particle& p, double potential);

EvanescentPair evanescent_waves(double chi_abs, double x);

/// Continuity of the incident wave with the transmitted component at x = 0,
/// and equality of the transmitted and reflected components at x = L:
///   alpha = incident_amplitude, beta = alpha exp(-2 chi L).
/// Derivative continuity is not imposed.
MatchingCoefficients match_boundaries(Complex incident_amplitude, double chi_abs, double L);

/// Textbook stationary transmission probability of a rectangular barrier:
///   T = 1 / (1 + U0^2 sinh^2(chi L) / (4 E (U0 - E))).
double exact_rectangular_transmission(const Particle& p, double U0, double L);

/// Evanescent profile across a piecewise-constant barrier. The transmitted
/// envelope is alpha exp(-I(x)) and the reflected one beta exp(+I(x)) with
/// I(x) the integral of chi over [0, x]; both envelopes are continuous at
/// every interior boundary and beta = alpha exp(-2 I(L)). A single segment
/// reduces to match_boundaries.
class PiecewiseMatching {
 public:
  struct Segment {
    double x_start;
    double x_end;
    double chi_abs;
    double integral_before;  ///< I(x_start)
  };

  PiecewiseMatching(const Particle& p, const BarrierSpec& barrier,
                    Complex incident_amplitude = {1.0, 0.0});

  [[nodiscard]] const MatchingCoefficients& coefficients() const noexcept { return mc_; }
  [[nodiscard]] const std::vector<Segment>& segments() const noexcept { return segments_; }
  [[nodiscard]] double length() const noexcept { return segments_.back().x_end; }

  /// I(x), the accumulated decay exponent.
  [[nodiscard]] double decay_exponent(double x) const;
  [[nodiscard]] Complex phi_transmitted(double x) const;
  [[nodiscard]] Complex phi_reflected(double x) const;

 private:
  [[nodiscard]] const Segment& segment_at(double x) const;

  MatchingCoefficients mc_;
  std::vector<Segment> segments_;
};

}  // namespace tunnelling
