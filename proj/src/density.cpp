#include "tunnelling/density.hpp"

#include <cmath>
#include <limits>

#include "tunnelling/errors.hpp"
#include "tunnelling/numerics.hpp"

namespace tunnelling {

using numerics::SincPower;

namespace {

OverlapMatrix build_overlap(const PiecewiseMatching& profile, double x_j, double x_k) {
  if (x_j < 0.0 && x_k < 0.0) return overlap_matrix(profile, 0.0, profile.length());
  return overlap_matrix(profile, x_j, x_k);
}

void require_rectangular(const DensitySolution& sol) {
  if (!sol.is_rectangular()) {
    throw UnsupportedBarrier("closed-form density needs a rectangular barrier; "
                             "use rho_general on the piecewise profile");
  }
}

void require_point(const DensitySolution& sol, double t, double x) {
  if (!(t >= 0.0)) throw DomainError("time must be non-negative");
  if (!(x >= 0.0 && x <= sol.barrier().length())) {
    throw DomainError("position lies outside the barrier [0, L]");
  }
}

Complex overlap_ratio(const OverlapMatrix& X) {
  if (X.kj == Complex{}) throw SingularOverlap("X_kj vanishes; the density is undefined");
  return X.kk / X.kj;
}

// 4 |alpha|^2 chi^4 / m^2: stands in for |beta|^2 omega0^2 |X_kk|^2/|X_kj|^2,
// which vanishes identically without coupling.
double reflected_substitute(const DensitySolution& sol) {
  if (sol.rabi().omega0 == 0.0) return 0.0;
  const double chi2 = sol.chi_abs() * sol.chi_abs();
  const double m = sol.mass();
  return 4.0 * std::norm(sol.matching().alpha) * chi2 * chi2 / (m * m);
}

double interference_weight(const DensitySolution& sol) {
  const auto& mc = sol.matching();
  return 2.0 * sol.rabi().omega0 *
         (overlap_ratio(sol.overlap()) * std::conj(mc.alpha) * mc.beta).real();
}

}  // namespace

DensitySolution::DensitySolution(const Particle& p, const BarrierSpec& barrier,
                                 const PerturbationSpec& pert, const EnergyPair& ep,
                                 double x_j, double x_k, Complex incident_amplitude)
    : profile_(p, barrier, incident_amplitude),
      overlap_(build_overlap(profile_, x_j, x_k)),
      transition_(transition_matrix(overlap_, pert)),
      rabi_(rabi_frequencies(overlap_, transition_, ep)),
      mass_(p.mass()),
      barrier_(barrier) {}

double rho_general(Complex phi_t, Complex phi_r, const RabiParameters& rp,
                   const OverlapMatrix& X, double t) {
  if (!(t >= 0.0)) throw DomainError("time must be non-negative");
  const Complex ratio = overlap_ratio(X);
  const double w0 = rp.omega0;
  const double transmitted = std::norm(phi_t);
  const double reflected = w0 * w0 * std::norm(ratio) * std::norm(phi_r) *
                           numerics::sinc_sq_half(rp.omega, t, SincPower::second);
  const double interference = 2.0 * w0 * (ratio * std::conj(phi_t) * phi_r).real() *
                              numerics::sin_sq_over_half(rp.omega, t);
  return transmitted + reflected + interference;
}

double rho_rectangular(const DensitySolution& sol, double t, double x) {
  require_rectangular(sol);
  require_point(sol, t, x);
  const double omega = sol.rabi().omega;
  const double first = std::norm(sol.matching().alpha) * std::exp(-2.0 * sol.chi_abs() * x);
  const double second =
      reflected_substitute(sol) * numerics::sinc_sq_half(omega, t, SincPower::second);
  const double third = interference_weight(sol) * numerics::sin_sq_over_half(omega, t);
  return first + second + third;
}

DensityEnvelope envelope(const DensitySolution& sol, double x) {
  require_rectangular(sol);
  require_point(sol, 0.0, x);
  const double rho_min = std::norm(sol.matching().alpha) * std::exp(-2.0 * sol.chi_abs() * x);
  const double substitute = reflected_substitute(sol);
  const double interference = interference_weight(sol);
  if (substitute == 0.0 && interference == 0.0) return {rho_min, rho_min};
  const double half = 0.5 * sol.rabi().omega;
  if (half == 0.0) return {rho_min, std::numeric_limits<double>::infinity()};
  return {rho_min, rho_min + substitute / (half * half) + interference / half};
}

double rho_spatial_derivative(const DensitySolution& sol, double t, double x) {
  require_rectangular(sol);
  require_point(sol, t, x);
  const double chi = sol.chi_abs();
  const double alpha2 = std::norm(sol.matching().alpha);
  const double bracket =
      sol.rabi().omega0 == 0.0
          ? 1.0
          : 1.0 - 4.0 * std::pow(chi, 4) / (sol.mass() * sol.mass()) *
                      numerics::sinc_sq_half(sol.rabi().omega, t, SincPower::second);
  return -2.0 * alpha2 * chi * std::exp(-2.0 * chi * x) * bracket;
}

double density_at(const DensitySolution& sol, double t, double x) {
  if (sol.is_rectangular()) return rho_rectangular(sol, t, x);
  require_point(sol, t, x);
  return rho_general(sol.profile().phi_transmitted(x), sol.profile().phi_reflected(x),
                     sol.rabi(), sol.overlap(), t);
}

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  v.back() = hi;
  return v;
}

}  // namespace

DensityGrid density_grid(const DensitySolution& sol, double t_min, double t_max, std::size_t nt,
                         double x_min, double x_max, std::size_t nx) {
  if (nt < 2 || nx < 2) throw DomainError("density grid needs at least 2 points per axis");
  if (!(t_min >= 0.0) || !(t_max > t_min)) throw DomainError("time range must be 0 <= t_min < t_max");
  if (!(x_min >= 0.0) || !(x_max > x_min) || x_max > sol.barrier().length()) {
    throw DomainError("position range must satisfy 0 <= x_min < x_max <= L");
  }
  DensityGrid grid;
  grid.t_values = linspace(t_min, t_max, nt);
  grid.x_values = linspace(x_min, x_max, nx);
  grid.rho.reserve(nt * nx);
  for (double t : grid.t_values) {
    for (double x : grid.x_values) {
      const double rho = density_at(sol, t, x);
      if (rho < 0.0) ++grid.negative_count;
      grid.rho.push_back(rho);
    }
  }
  return grid;
}

}  // namespace tunnelling
