#pragma once

#include <utility>
#include <vector>

#include "tunnelling/core_model.hpp"
#include "tunnelling/stationary.hpp"

namespace tunnelling {

/// Spatial overlaps of the transmitted (T) and reflected (R) components over
/// [x_j, x_k]:
///   kk = <T|T>, kj = <T|R>, jk = <R|T>, jj = <R|R>.
struct OverlapMatrix {
  Complex kk;
  Complex kj;
  Complex jk;
  Complex jj;
  double x_j;
  double x_k;

  /// kk jj - kj jk.
  [[nodiscard]] Complex determinant() const { return kk * jj - kj * jk; }
};

/// Perturbation-weighted overlaps. The diagonal vanishes identically.
struct TransitionMatrix {
  Complex kj;
  Complex jk;
  static constexpr double kk = 0.0;
  static constexpr double jj = 0.0;
};

struct RabiParameters {
  double omega0;    ///< effective coupling frequency
  double omega;     ///< omega_jk - omega0
  double omega_kj;  ///< (E_k - E_j) / hbar
};

enum class OverlapMethod { closed_form, quadrature };

inline constexpr double kSingularityTolerance = 1e-14;

/// Overlaps of alpha exp(-chi x) and beta exp(+chi x) on [x_j, x_k].
/// Throws DomainError unless x_j < x_k and chi_abs > 0.
OverlapMatrix overlap_matrix(const MatchingCoefficients& mc, double chi_abs, double x_j,
                             double x_k, OverlapMethod method = OverlapMethod::closed_form);

/// Same overlaps for the chained profile of a piecewise barrier.
/// [x_j, x_k] must lie inside [0, L].
OverlapMatrix overlap_matrix(const PiecewiseMatching& pm, double x_j, double x_k,
                             OverlapMethod method = OverlapMethod::closed_form);

/// Y_jk = V0 X_kj, Y_kj = V0 X_jk: the perturbation is taken at unit
/// envelope so that the coupling frequency is time independent.
TransitionMatrix transition_matrix(const OverlapMatrix& X, const PerturbationSpec& pert);

/// omega0 = X_kj Y_jk / (X_kk X_jj - X_kj X_jk), omega = omega_jk - omega0.
/// Throws SingularOverlap when |D| <= tolerance |X_kk X_jj|.
RabiParameters rabi_frequencies(const OverlapMatrix& X, const TransitionMatrix& Y,
                                const EnergyPair& ep,
                                double singularity_tolerance = kSingularityTolerance);

struct Amplitudes {
  Complex a_k;
  Complex a_j;
};

/// a_k(t) = exp(i omega0 t),
/// a_j(t) = -i omega0 (X_kk / X_kj) exp(i omega0 t) sin(omega t / 2) / (omega / 2).
Amplitudes amplitude_coefficients(const RabiParameters& rp, const OverlapMatrix& X, double t);

/// Residuals of the two coupled amplitude equations, obtained by substituting
/// the closed-form amplitudes and central finite-difference derivatives.
struct CoupledResidual {
  double t;
  double residual_first;   ///< |lhs - rhs| of the <R|-projected equation
  double residual_second;  ///< |lhs - rhs| of the <T|-projected equation
  double relative_first;   ///< residual over the largest term magnitude
  double relative_second;
};

CoupledResidual coupled_equation_residual(const RabiParameters& rp, const OverlapMatrix& X,
                                          const TransitionMatrix& Y, double t);

/// Residuals on n uniformly spaced times in [0, t_max].
std::vector<CoupledResidual> coupled_residual_profile(const RabiParameters& rp,
                                                      const OverlapMatrix& X,
                                                      const TransitionMatrix& Y, double t_max,
                                                      std::size_t n);

/// Matching, overlap, transition and frequencies for one configuration.
struct CouplingSolution {
  WaveVectors wave_vectors;
  MatchingCoefficients matching;
  OverlapMatrix overlap;
  TransitionMatrix transition;
  RabiParameters rabi;
};

/// Solves the rectangular problem with measurement interval [x_j, x_k].
CouplingSolution solve_rectangular(const Particle& p, double U0, double L,
                                   const PerturbationSpec& pert, const EnergyPair& ep,
                                   double x_j, double x_k,
                                   Complex incident_amplitude = {1.0, 0.0});

}  // namespace tunnelling
