#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "tunnelling/core_model.hpp"
#include "tunnelling/density.hpp"

namespace tunnelling {

struct TunnellingTimes {
  std::optional<double> tau_exact;  ///< absent when the flow never stops
  double tau_simplified;
  double tau_transfer;
};

/// Energy dispersion delta E(x) = E_inc - E(x) inside the barrier.
class DispersionProfile {
 public:
  enum class Kind { barrier_default, user_table };

  /// delta E(x) = U(x) - E_inc.
  static DispersionProfile barrier_default();
  /// Piecewise-linear interpolation of (x, delta E) samples. x must be
  /// strictly increasing; delta E must be positive except that it may vanish
  /// at the first and last sample (integrable edge singularity).
  static DispersionProfile user_table(std::vector<std::pair<double, double>> table);

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::vector<std::pair<double, double>>& table() const noexcept {
    return table_;
  }

 private:
  DispersionProfile(Kind kind, std::vector<std::pair<double, double>> table)
      : kind_(kind), table_(std::move(table)) {}

  Kind kind_;
  std::vector<std::pair<double, double>> table_;
};

/// tau = (2 / omega0) arcsin(m omega0 / (4 chi^2)); empty when the arcsine
/// argument exceeds 1. Throws NoPerturbation for omega0 = 0.
std::optional<double> stop_time_exact(double omega0, double chi_abs, double mass);

/// hbar / (4 (U0 - E)). Throws NotEvanescent when U0 <= E.
double stop_time_simplified(const Particle& p, double U0);

/// The same quantity written as m / (2 chi^2).
double stop_time_simplified_from_kappa(double chi_abs, double mass);

/// (1 / |alpha|) * integral over [0, L] of sqrt(m / delta E(x)) dx.
/// Throws InvalidDispersion when delta E <= 0 inside the barrier.
double traversal_time_transfer_matrix(double alpha_mag, const BarrierSpec& barrier,
                                      double incident_energy, double mass,
                                      const DispersionProfile& dispersion);

/// Lower bound hbar / (2 (E_inc - E_meas)) on the measured tunnelling time.
/// Throws InvalidMeasurement when E_meas >= E_inc.
double measured_time_bound(double incident_energy, double measured_energy);

/// First t > 0 at which the bracket of rho_spatial_derivative vanishes,
/// found by bisection. Empty when the bracket never reaches zero. Equals
/// stop_time_exact evaluated with omega in place of omega0.
std::optional<double> flow_stop_root(const DensitySolution& sol);

struct HartmanRow {
  double L;
  std::optional<double> tau_exact;
  double tau_simplified;
};

/// Stop times of a rectangular barrier of height U0 for each length, with
/// the measurement spanning the whole barrier and a constant perturbation V0.
std::vector<HartmanRow> hartman_scan(const Particle& p, double U0, double V0,
                                     const EnergyPair& ep, const std::vector<double>& L_values);

}  // namespace tunnelling
