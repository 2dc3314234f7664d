#pragma once

// Physical inputs of the tunnelling model. Natural units throughout:
// hbar = 1, mass and energy are dimensionless.

#include <vector>

namespace tunnelling {

class Particle {
 public:
  /// Throws DomainError unless mass > 0 and energy > 0.
  Particle(double mass, double energy);

  [[nodiscard]] double mass() const noexcept { return mass_; }
  [[nodiscard]] double energy() const noexcept { return energy_; }

  friend bool operator==(const Particle&, const Particle&) = default;

 private:
  double mass_;
  double energy_;
};

struct BarrierSegment {
  double x_start;
  double x_end;
  double value;

  friend bool operator==(const BarrierSegment&, const BarrierSegment&) = default;
};

/// Piecewise-constant static potential on [0, L]. Segments tile the interval
/// exactly: the first starts at 0 and each ends where the next begins.
class BarrierSpec {
 public:
  explicit BarrierSpec(std::vector<BarrierSegment> segments);

  static BarrierSpec rectangular(double height, double length);

  [[nodiscard]] const std::vector<BarrierSegment>& segments() const noexcept {
    return segments_;
  }
  [[nodiscard]] double length() const noexcept { return segments_.back().x_end; }
  [[nodiscard]] bool is_rectangular() const noexcept { return segments_.size() == 1; }
  /// Index of the segment owning x; interior boundaries belong to the right
  /// segment and x = L to the last one.
  [[nodiscard]] std::size_t segment_index(double x) const;

  friend bool operator==(const BarrierSpec&, const BarrierSpec&) = default;

 private:
  std::vector<BarrierSegment> segments_;
};

enum class PerturbationKind { constant, sinusoidal, gaussian_pulse };

/// U(t) = V0 * w(t). Only the parameters relevant to `kind` are meaningful.
class PerturbationSpec {
 public:
  static PerturbationSpec constant(double amplitude);
  /// w(t) = sin(angular_frequency * t).
  static PerturbationSpec sinusoidal(double amplitude, double angular_frequency);
  /// w(t) = exp(-(t - center)^2 / (2 width^2)).
  static PerturbationSpec gaussian_pulse(double amplitude, double center, double width);

  [[nodiscard]] PerturbationKind kind() const noexcept { return kind_; }
  [[nodiscard]] double amplitude() const noexcept { return amplitude_; }
  [[nodiscard]] double angular_frequency() const noexcept { return angular_frequency_; }
  [[nodiscard]] double center() const noexcept { return center_; }
  [[nodiscard]] double width() const noexcept { return width_; }

  /// Same envelope, different amplitude.
  [[nodiscard]] PerturbationSpec with_amplitude(double amplitude) const;

  friend bool operator==(const PerturbationSpec&, const PerturbationSpec&) = default;

 private:
  PerturbationSpec(PerturbationKind kind, double amplitude, double angular_frequency,
                   double center, double width);

  PerturbationKind kind_;
  double amplitude_;
  double angular_frequency_;
  double center_;
  double width_;
};

/// The two energies measured on either side of the barrier.
class EnergyPair {
 public:
  EnergyPair(double e_k, double e_j);

  [[nodiscard]] double e_k() const noexcept { return e_k_; }
  [[nodiscard]] double e_j() const noexcept { return e_j_; }
  /// (E_k - E_j) / hbar.
  [[nodiscard]] double omega_kj() const noexcept { return e_k_ - e_j_; }
  /// (E_j - E_k) / hbar = -omega_kj.
  [[nodiscard]] double omega_jk() const noexcept { return e_j_ - e_k_; }

  friend bool operator==(const EnergyPair&, const EnergyPair&) = default;

 private:
  double e_k_;
  double e_j_;
};

/// U(x). Throws DomainError outside [0, L].
double potential_at(const BarrierSpec& barrier, double x);

/// U(t) = V0 w(t). Throws DomainError for t < 0.
double perturbation_at(const PerturbationSpec& pert, double t);

/// Integral of U(t') over [0, t], in closed form (erf form for the pulse).
double perturbation_phase_integral(const PerturbationSpec& pert, double t);

}  // namespace tunnelling
