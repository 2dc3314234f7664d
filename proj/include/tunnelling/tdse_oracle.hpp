#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "tunnelling/core_model.hpp"

namespace tunnelling::oracle {

using Complex = std::complex<double>;
using Wavefunction = std::vector<Complex>;

/// Uniform grid on [x_min, x_max] with Dirichlet walls at both ends.
class GridSpec {
 public:
  /// Throws DomainError unless x_min < 0 < barrier_length < x_max,
  /// n_points >= 256 and dt > 0.
  GridSpec(double x_min, double x_max, std::size_t n_points, double dt, double barrier_length);

  [[nodiscard]] double x_min() const noexcept { return x_min_; }
  [[nodiscard]] double x_max() const noexcept { return x_max_; }
  [[nodiscard]] std::size_t n_points() const noexcept { return n_points_; }
  [[nodiscard]] double dt() const noexcept { return dt_; }
  [[nodiscard]] double dx() const noexcept {
    return (x_max_ - x_min_) / static_cast<double>(n_points_ - 1);
  }
  [[nodiscard]] double x(std::size_t i) const noexcept {
    return x_min_ + dx() * static_cast<double>(i);
  }

 private:
  double x_min_;
  double x_max_;
  std::size_t n_points_;
  double dt_;
};

struct WavePacket {
  double x0;     ///< center, left of the barrier
  double sigma;  ///< spatial width
  double k0;     ///< mean wave vector

  /// Packet whose mean wave vector matches the particle energy.
  static WavePacket for_particle(const Particle& p, double x0, double sigma);
  /// Mean energy k0^2 / (2m) and energy spread k0 sigma_k / m, sigma_k = 1/(2 sigma).
  [[nodiscard]] double mean_energy(double mass) const { return k0 * k0 / (2.0 * mass); }
  [[nodiscard]] double energy_spread(double mass) const { return k0 / (2.0 * sigma * mass); }
};

/// Where the time-dependent perturbation acts.
enum class PerturbationRegion { barrier_only, everywhere };

struct PropagationOptions {
  PerturbationRegion region = PerturbationRegion::barrier_only;
  /// Propagate with dt -> -dt. Time runs down from t_start, which must stay
  /// non-negative over the run.
  bool backward = false;
  double t_start = 0.0;
  /// Called with (step, psi) every `snapshot_every` steps, including step 0;
  /// 0 disables snapshots.
  std::size_t snapshot_every = 0;
  std::function<void(std::size_t, std::span<const Complex>)> on_snapshot;
};

struct RegionNorms {
  double reflected;   ///< x < 0
  double barrier;     ///< 0 <= x <= L
  double transmitted; ///< x > L
  [[nodiscard]] double total() const { return reflected + barrier + transmitted; }
};

struct PropagationResult {
  Wavefunction psi_final;
  std::vector<double> norm_history;  ///< norm before the first step and after every step
  double transmission;
  double reflection;
  double in_barrier;
};

/// Normalized Gaussian exp(-(x - x0)^2 / (4 sigma^2) + i k0 x). Throws
/// GridTooSmall when |psi| at either wall exceeds 1e-12 of the peak.
Wavefunction init_packet(const GridSpec& grid, const WavePacket& wp);

/// Trapezoid norm on the grid.
double norm(std::span<const Complex> psi, const GridSpec& grid);

/// Trapezoid norm split into the regions left of, inside and right of [0, L].
RegionNorms region_norms(std::span<const Complex> psi, const GridSpec& grid, double L);

/// Crank-Nicolson propagation of
///   i dpsi/dt = [-1/(2m) d^2/dx^2 + U(x) + U(t)] psi
/// with a three-point Laplacian and U(t) evaluated at the step midpoint.
/// Throws NumericalBlowup when a non-finite value appears.
PropagationResult propagate(Wavefunction psi, const GridSpec& grid, const BarrierSpec& barrier,
                            const PerturbationSpec& pert, double mass, std::size_t steps,
                            const PropagationOptions& options = {});

/// Probability right of the barrier. Throws PrematureMeasurement while 1% or
/// more of the norm remains inside the barrier.
double transmission_probability(std::span<const Complex> psi, const GridSpec& grid, double L);

}  // namespace tunnelling::oracle
