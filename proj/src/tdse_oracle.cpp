#include "tunnelling/tdse_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tunnelling/errors.hpp"

namespace tunnelling::oracle {

GridSpec::GridSpec(double x_min, double x_max, std::size_t n_points, double dt,
                   double barrier_length)
    : x_min_(x_min), x_max_(x_max), n_points_(n_points), dt_(dt) {
  if (!(x_min < 0.0 && barrier_length > 0.0 && barrier_length < x_max)) {
    throw DomainError("grid must bracket the barrier: x_min < 0 < L < x_max");
  }
  if (n_points < 256) throw DomainError("grid needs at least 256 points");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("time step must be positive");
}

WavePacket WavePacket::for_particle(const Particle& p, double x0, double sigma) {
  return {x0, sigma, std::sqrt(2.0 * p.mass() * p.energy())};
}

Wavefunction init_packet(const GridSpec& grid, const WavePacket& wp) {
  if (!(wp.sigma > 0.0) || !(wp.k0 > 0.0)) {
    throw DomainError("packet width and wave vector must be positive");
  }
  if (!(wp.x0 < 0.0)) throw DomainError("packet must start left of the barrier");
  auto envelope = [&](double x) {
    const double u = (x - wp.x0) / (2.0 * wp.sigma);
    return std::exp(-u * u);
  };
  if (envelope(grid.x_min()) > 1e-12 || envelope(grid.x_max()) > 1e-12) {
    throw GridTooSmall("packet tails reach the grid walls; widen the grid or narrow the packet");
  }
  Wavefunction psi(grid.n_points());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double x = grid.x(i);
    psi[i] = envelope(x) * std::polar(1.0, wp.k0 * x);
  }
  psi.front() = psi.back() = 0.0;
  const double scale = 1.0 / std::sqrt(norm(psi, grid));
  for (auto& v : psi) v *= scale;
  return psi;
}

double norm(std::span<const Complex> psi, const GridSpec& grid) {
  return region_norms(psi, grid, std::numeric_limits<double>::max()).total();
}

RegionNorms region_norms(std::span<const Complex> psi, const GridSpec& grid, double L) {
  RegionNorms r{0.0, 0.0, 0.0};
  const std::size_t n = psi.size();
  const double dx = grid.dx();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 * dx : dx;
    const double p = w * std::norm(psi[i]);
    const double x = grid.x(i);
    if (x < 0.0) {
      r.reflected += p;
    } else if (x > L) {
      r.transmitted += p;
    } else {
      r.barrier += p;
    }
  }
  return r;
}

namespace {

// Tridiagonal system with constant off-diagonals `off` and diagonal `diag`,
// solved by the Thomas algorithm on interior points.
class CrankNicolsonStepper {
 public:
  CrankNicolsonStepper(const GridSpec& grid, std::vector<double> static_potential,
                       std::vector<double> perturbed, double mass, double dt)
      : potential_(std::move(static_potential)),
        perturbed_(std::move(perturbed)),
        n_(potential_.size()),
        dt_(dt),
        kinetic_(1.0 / (2.0 * mass * grid.dx() * grid.dx())),
        c_prime_(n_),
        rhs_(n_) {}

  // Advance psi by one step with the perturbation value `u` at the midpoint.
  void step(std::vector<Complex>& psi, double u) {
    if (u != cached_u_ || !factored_) factor(u);
    const Complex half{0.0, 0.5 * dt_};
    // rhs = (I - i dt/2 H) psi on interior points; walls stay zero.
    for (std::size_t i = 1; i + 1 < n_; ++i) {
      const Complex h_psi = (2.0 * kinetic_ + local_potential(i, u)) * psi[i] -
                            kinetic_ * (psi[i - 1] + psi[i + 1]);
      rhs_[i] = psi[i] - half * h_psi;
    }
    // Forward sweep with the precomputed modified coefficients.
    const Complex off = -half * kinetic_;
    rhs_[1] = rhs_[1] / diag_first_;
    for (std::size_t i = 2; i + 1 < n_; ++i) {
      rhs_[i] = (rhs_[i] - off * rhs_[i - 1]) * inv_denominator_[i];
    }
    psi[n_ - 2] = rhs_[n_ - 2];
    for (std::size_t i = n_ - 2; i-- > 1;) {
      psi[i] = rhs_[i] - c_prime_[i] * psi[i + 1];
    }
    psi.front() = psi.back() = 0.0;
  }

 private:
  double local_potential(std::size_t i, double u) const {
    return potential_[i] + perturbed_[i] * u;
  }

  void factor(double u) {
    const Complex half{0.0, 0.5 * dt_};
    const Complex off = half * (-kinetic_);
    inv_denominator_.assign(n_, Complex{});
    auto diag = [&](std::size_t i) {
      return Complex{1.0, 0.0} + half * (2.0 * kinetic_ + local_potential(i, u));
    };
    diag_first_ = diag(1);
    c_prime_[1] = off / diag_first_;
    for (std::size_t i = 2; i + 1 < n_; ++i) {
      const Complex denom = diag(i) - off * c_prime_[i - 1];
      inv_denominator_[i] = 1.0 / denom;
      c_prime_[i] = off * inv_denominator_[i];
    }
    cached_u_ = u;
    factored_ = true;
  }

  std::vector<double> potential_;
  std::vector<double> perturbed_;  ///< fraction of each cell exposed to U(t)
  std::size_t n_;
  double dt_;
  double kinetic_;
  std::vector<Complex> c_prime_;
  std::vector<Complex> inv_denominator_;
  std::vector<Complex> rhs_;
  Complex diag_first_;
  double cached_u_ = 0.0;
  bool factored_ = false;
};

}  // namespace

PropagationResult propagate(Wavefunction psi, const GridSpec& grid, const BarrierSpec& barrier,
                            const PerturbationSpec& pert, double mass, std::size_t steps,
                            const PropagationOptions& options) {
  if (psi.size() != grid.n_points()) {
    throw DomainError("wavefunction size does not match the grid");
  }
  if (!(mass > 0.0)) throw DomainError("mass must be positive");
  if (options.t_start < 0.0 ||
      (options.backward && options.t_start < static_cast<double>(steps) * grid.dt())) {
    throw DomainError("propagation time must stay non-negative");
  }
  const double L = barrier.length();
  std::vector<double> potential(grid.n_points(), 0.0);
  std::vector<double> perturbed(grid.n_points(), 0.0);
  const double dx = grid.dx();
  for (std::size_t i = 0; i < grid.n_points(); ++i) {
    const double x = grid.x(i);
    // Cell averages keep the discrete barrier width equal to L whatever the
    // grid alignment.
    const double lo = x - 0.5 * dx;
    const double hi = x + 0.5 * dx;
    double integral = 0.0;
    double covered = 0.0;
    for (const auto& s : barrier.segments()) {
      const double overlap = std::min(hi, s.x_end) - std::max(lo, s.x_start);
      if (overlap > 0.0) {
        integral += s.value * overlap;
        covered += overlap;
      }
    }
    potential[i] = integral / dx;
    perturbed[i] = options.region == PerturbationRegion::everywhere ? 1.0 : covered / dx;
  }
  const double dt = options.backward ? -grid.dt() : grid.dt();
  CrankNicolsonStepper stepper(grid, std::move(potential), std::move(perturbed), mass, dt);

  PropagationResult result;
  result.norm_history.reserve(steps + 1);
  result.norm_history.push_back(norm(psi, grid));
  const bool snapshots = options.snapshot_every > 0 && options.on_snapshot;
  if (snapshots) options.on_snapshot(0, psi);

  for (std::size_t n = 0; n < steps; ++n) {
    const double t_mid = options.t_start + (static_cast<double>(n) + 0.5) * dt;
    const double u = perturbation_at(pert, t_mid);
    stepper.step(psi, u);
    const double nrm = norm(psi, grid);
    if (!std::isfinite(nrm)) {
      throw NumericalBlowup("non-finite wavefunction at step " + std::to_string(n + 1), n + 1);
    }
    result.norm_history.push_back(nrm);
    if (snapshots && (n + 1) % options.snapshot_every == 0) options.on_snapshot(n + 1, psi);
  }

  const RegionNorms regions = region_norms(psi, grid, L);
  result.transmission = regions.transmitted;
  result.reflection = regions.reflected;
  result.in_barrier = regions.barrier;
  result.psi_final = std::move(psi);
  return result;
}

double transmission_probability(std::span<const Complex> psi, const GridSpec& grid, double L) {
  const RegionNorms regions = region_norms(psi, grid, L);
  if (regions.barrier > 0.0 && regions.barrier >= 0.01 * regions.total()) {
    throw PrematureMeasurement("packet has not cleared the barrier: " +
                               std::to_string(regions.barrier / regions.total()) +
                               " of the norm remains inside");
  }
  return regions.transmitted;
}

}  // namespace tunnelling::oracle
