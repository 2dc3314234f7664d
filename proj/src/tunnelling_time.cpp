#include "tunnelling/tunnelling_time.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tunnelling/errors.hpp"
#include "tunnelling/numerics.hpp"
#include "tunnelling/stationary.hpp"

namespace tunnelling {

namespace {

constexpr double kTraversalTol = 1e-12;
constexpr int kRefinementSamples = 64;

}  // namespace

DispersionProfile DispersionProfile::barrier_default() { return {Kind::barrier_default, {}}; }

DispersionProfile DispersionProfile::user_table(std::vector<std::pair<double, double>> table) {
  if (table.size() < 2) throw InvalidDispersion("dispersion table needs at least two rows");
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto [x, de] = table[i];
    if (!std::isfinite(x) || !std::isfinite(de)) {
      throw InvalidDispersion("dispersion table entries must be finite");
    }
    if (i > 0 && !(x > table[i - 1].first)) {
      throw InvalidDispersion("dispersion table positions must be strictly increasing");
    }
    const bool edge = i == 0 || i + 1 == table.size();
    if (de < 0.0 || (de == 0.0 && !edge)) {
      throw InvalidDispersion("energy dispersion must be positive at x = " + std::to_string(x));
    }
  }
  return {Kind::user_table, std::move(table)};
}

std::optional<double> stop_time_exact(double omega0, double chi_abs, double mass) {
  if (omega0 == 0.0) {
    throw NoPerturbation("tunnelling time is undefined without the measurement coupling");
  }
  if (!(chi_abs > 0.0) || !(mass > 0.0)) throw DomainError("chi and mass must be positive");
  const double z = mass * omega0 / (4.0 * chi_abs * chi_abs);
  if (std::abs(z) > 1.0) return std::nullopt;
  return 2.0 / omega0 * std::asin(z);
}

double stop_time_simplified(const Particle& p, double U0) {
  if (!(U0 > p.energy())) {
    throw NotEvanescent("barrier height must exceed the particle energy");
  }
  return 1.0 / (4.0 * (U0 - p.energy()));
}

double stop_time_simplified_from_kappa(double chi_abs, double mass) {
  return mass / (2.0 * chi_abs * chi_abs);
}

namespace {

// Integral of sqrt(m / delta) over one piece, with delta linear from
// d0 (at offset 0) to d1 (at offset width). The piece is split at its
// midpoint and each half integrated from its outer end so a vanishing
// delta always sits at the quadrature origin.
double linear_piece_time(double width, double d0, double d1, double mass) {
  const double half = 0.5 * width;
  const double slope = (d1 - d0) / width;
  const auto left = numerics::endpoint_singular_quadrature(
      [&](double s) { return std::sqrt(mass / (d0 + slope * s)); },
      0.0, half, kTraversalTol);
  const auto right = numerics::endpoint_singular_quadrature(
      [&](double r) { return std::sqrt(mass / (d1 - slope * r)); },
      0.0, half, kTraversalTol);
  return left.value + right.value;
}

}  // namespace

double traversal_time_transfer_matrix(double alpha_mag, const BarrierSpec& barrier,
                                      double incident_energy, double mass,
                                      const DispersionProfile& dispersion) {
  if (!(alpha_mag > 0.0 && alpha_mag <= 1.0)) {
    throw DomainError("transmission amplitude |alpha| must lie in (0, 1]");
  }
  if (!(mass > 0.0)) throw DomainError("mass must be positive");
  double total = 0.0;
  if (dispersion.kind() == DispersionProfile::Kind::barrier_default) {
    for (const auto& s : barrier.segments()) {
      const double delta = s.value - incident_energy;
      if (!(delta > 0.0)) {
        throw InvalidDispersion("barrier does not exceed the incident energy on [" +
                                std::to_string(s.x_start) + ", " + std::to_string(s.x_end) + "]");
      }
      total += linear_piece_time(s.x_end - s.x_start, delta, delta, mass);
    }
    return total / alpha_mag;
  }

  const auto& table = dispersion.table();
  const double L = barrier.length();
  if (table.front().first > 0.0 || table.back().first < L) {
    throw InvalidDispersion("dispersion table must cover [0, L]");
  }
  for (std::size_t i = 0; i + 1 < table.size(); ++i) {
    auto [x0, d0] = table[i];
    auto [x1, d1] = table[i + 1];
    // Clip the piece to [0, L], interpolating the dispersion at the cut.
    const double lo = std::max(x0, 0.0);
    const double hi = std::min(x1, L);
    if (!(lo < hi)) continue;
    const double slope = (d1 - d0) / (x1 - x0);
    const double dlo = d0 + slope * (lo - x0);
    const double dhi = d0 + slope * (hi - x0);
    for (int k = 1; k < kRefinementSamples; ++k) {
      const double frac = static_cast<double>(k) / kRefinementSamples;
      if (!(dlo + frac * (dhi - dlo) > 0.0)) {
        throw InvalidDispersion("energy dispersion is not positive inside the barrier");
      }
    }
    total += linear_piece_time(hi - lo, dlo, dhi, mass);
  }
  return total / alpha_mag;
}

double measured_time_bound(double incident_energy, double measured_energy) {
  if (!(measured_energy < incident_energy)) {
    throw InvalidMeasurement("measured energy must be below the incident energy");
  }
  return 1.0 / (2.0 * (incident_energy - measured_energy));
}

std::optional<double> flow_stop_root(const DensitySolution& sol) {
  if (!sol.is_rectangular()) {
    throw UnsupportedBarrier("flow-stop root needs a rectangular barrier");
  }
  if (sol.rabi().omega0 == 0.0) return std::nullopt;
  const double chi2 = sol.chi_abs() * sol.chi_abs();
  const double coeff = 4.0 * chi2 * chi2 / (sol.mass() * sol.mass());
  const double omega = sol.rabi().omega;
  auto bracket = [&](double t) {
    return 1.0 - coeff * numerics::sinc_sq_half(omega, t, numerics::SincPower::second);
  };
  // The bracket decreases monotonically from 1 up to the first envelope peak.
  double hi;
  if (omega == 0.0) {
    hi = 2.0 / std::sqrt(coeff);
  } else {
    hi = std::numbers::pi / std::abs(omega);
    if (bracket(hi) > 0.0) return std::nullopt;
  }
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (bracket(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<HartmanRow> hartman_scan(const Particle& p, double U0, double V0,
                                     const EnergyPair& ep, const std::vector<double>& L_values) {
  const PerturbationSpec pert = PerturbationSpec::constant(V0);
  const double tau_simplified = stop_time_simplified(p, U0);
  std::vector<HartmanRow> rows;
  rows.reserve(L_values.size());
  for (double L : L_values) {
    if (!(L > 0.0)) throw DomainError("barrier lengths must be positive");
    const CouplingSolution s = solve_rectangular(p, U0, L, pert, ep, 0.0, L);
    rows.push_back({L, stop_time_exact(s.rabi.omega0, s.wave_vectors.chi_abs, p.mass()),
                    tau_simplified});
  }
  return rows;
}

}  // namespace tunnelling
