#pragma once

#include <cstddef>
#include <vector>

#include "tunnelling/core_model.hpp"
#include "tunnelling/coupling.hpp"
#include "tunnelling/stationary.hpp"

namespace tunnelling {

/// Everything needed to evaluate the in-barrier density of one scenario.
class DensitySolution {
 public:
  /// Solves matching, overlaps and frequencies over the measurement interval
  /// [x_j, x_k] (defaults to the whole barrier when both are negative).
  DensitySolution(const Particle& p, const BarrierSpec& barrier, const PerturbationSpec& pert,
                  const EnergyPair& ep, double x_j = -1.0, double x_k = -1.0,
                  Complex incident_amplitude = {1.0, 0.0});

  [[nodiscard]] const MatchingCoefficients& matching() const noexcept {
    return profile_.coefficients();
  }
  [[nodiscard]] const PiecewiseMatching& profile() const noexcept { return profile_; }
  /// |chi| of the first segment; the only one for a rectangular barrier.
  [[nodiscard]] double chi_abs() const noexcept { return profile_.segments().front().chi_abs; }
  [[nodiscard]] const OverlapMatrix& overlap() const noexcept { return overlap_; }
  [[nodiscard]] const TransitionMatrix& transition() const noexcept { return transition_; }
  [[nodiscard]] const RabiParameters& rabi() const noexcept { return rabi_; }
  [[nodiscard]] double mass() const noexcept { return mass_; }
  [[nodiscard]] const BarrierSpec& barrier() const noexcept { return barrier_; }
  [[nodiscard]] bool is_rectangular() const noexcept { return barrier_.is_rectangular(); }

 private:
  PiecewiseMatching profile_;
  OverlapMatrix overlap_;
  TransitionMatrix transition_;
  RabiParameters rabi_;
  double mass_;
  BarrierSpec barrier_;
};

/// Three-term density from the component values at one point: transmitted
/// part, reflected part weighted by the transition factor, and the
/// transmitted/reflected interference.
double rho_general(Complex phi_t, Complex phi_r, const RabiParameters& rp,
                   const OverlapMatrix& X, double t);

/// Rectangular-barrier density with the reflected term replaced by its
/// x-independent substitute 4 |alpha|^2 chi^4 / m^2 (dropped when omega0 = 0).
/// Throws UnsupportedBarrier for piecewise barriers.
double rho_rectangular(const DensitySolution& sol, double t, double x);

struct DensityEnvelope {
  double rho_min;
  double rho_max;
};

/// Bounds of the oscillation at x. rho_max is +inf when omega = 0 and
/// omega0 != 0 (the density then grows without bound).
DensityEnvelope envelope(const DensitySolution& sol, double x);

/// -2 |alpha|^2 chi exp(-2 chi x) [1 - 4 chi^4 / m^2 sin^2(omega t/2) / (omega/2)^2].
/// Not the term-wise x-derivative of rho_rectangular.
double rho_spatial_derivative(const DensitySolution& sol, double t, double x);

/// Density at (t, x) for any barrier: rho_rectangular for a single segment,
/// rho_general on the chained evanescent profile otherwise.
double density_at(const DensitySolution& sol, double t, double x);

struct DensityGrid {
  std::vector<double> t_values;
  std::vector<double> x_values;
  std::vector<double> rho;  ///< row-major: rho[i * nx + j] = rho(t_i, x_j)
  std::size_t negative_count = 0;

  [[nodiscard]] double at(std::size_t i, std::size_t j) const {
    return rho[i * x_values.size() + j];
  }
};

DensityGrid density_grid(const DensitySolution& sol, double t_min, double t_max, std::size_t nt,
                         double x_min, double x_max, std::size_t nx);

}  // namespace tunnelling
