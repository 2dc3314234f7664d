#include <doctest.h>

#include <cmath>
#include <random>

#include "tunnelling/errors.hpp"
#include "tunnelling/stationary.hpp"
#include "worked_case.hpp"

using namespace tunnelling;

TEST_CASE("incident wave vector") {
  CHECK(incident_wavevector(Particle(1, 0.5)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(incident_wavevector(Particle(1, 2)) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(incident_wavevector(Particle(0.5, 1)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("evanescent kappa") {
  CHECK(evanescent_kappa(Particle(1, 1), 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(evanescent_kappa(Particle(1, 0.5), 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(evanescent_kappa(Particle(1, 1), 1), NotEvanescent);
  CHECK_THROWS_AS(evanescent_kappa(Particle(1, 1), 0.5), NotEvanescent);

  SUBCASE("recovers the potential") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> mass(0.1, 10), energy(0.01, 5), excess(1e-3, 5);
    for (int i = 0; i < 500; ++i) {
      const Particle p(mass(rng), energy(rng));
      const double U = p.energy() + excess(rng);
      const double chi = evanescent_kappa(p, U);
      CHECK(chi * chi / (2 * p.mass()) + p.energy() == doctest::Approx(U).epsilon(1e-12));
    }
  }
}

TEST_CASE("evanescent waves") {
  auto w = evanescent_waves(1, 0);
  CHECK(w.f == 1.0);
  CHECK(w.g == 1.0);
  w = evanescent_waves(1, 1);
  CHECK(w.f == doctest::Approx(std::exp(-1.0)));
  CHECK(w.g == doctest::Approx(std::exp(1.0)));
  w = evanescent_waves(2, 0.5);
  CHECK(w.f == doctest::Approx(std::exp(-1.0)));
  for (double chi : {0.1, 1.0, 3.7}) {
    for (double x = -2; x < 4; x += 0.25) {
      const auto v = evanescent_waves(chi, x);
      CHECK(v.f * v.g == doctest::Approx(1.0).epsilon(1e-15));
    }
  }
}

TEST_CASE("boundary matching") {
  auto mc = match_boundaries({1, 0}, 1, 1);
  CHECK(mc.alpha == Complex(1, 0));
  CHECK(mc.beta.real() == doctest::Approx(0.1353352832366127).epsilon(1e-15));
  CHECK(mc.beta.imag() == 0.0);
  mc = match_boundaries({1, 0}, 2, 3);
  CHECK(mc.beta.real() == doctest::Approx(std::exp(-12.0)).epsilon(1e-15));
  mc = match_boundaries({1, 0}, 1, 1e-12);
  CHECK(mc.beta.real() == doctest::Approx(1.0).epsilon(1e-11));
  CHECK_THROWS_AS(match_boundaries({1, 0}, 1, 0), DomainError);

  SUBCASE("ratio and magnitudes") {
    const Complex amp = std::polar(1.0, 0.7);
    mc = match_boundaries(amp, 0.8, 1.5);
    CHECK(std::abs(mc.alpha) == doctest::Approx(1.0));
    CHECK(std::abs(mc.beta) == doctest::Approx(std::exp(-2 * 0.8 * 1.5)).epsilon(1e-15));
    const Complex ratio = mc.beta / mc.alpha;
    CHECK(ratio.real() == doctest::Approx(std::exp(-2 * 0.8 * 1.5)).epsilon(1e-15));
    CHECK(std::abs(ratio.imag()) < 1e-16);
  }
}

TEST_CASE("exact rectangular transmission") {
  // 50-digit golden for m = 1, E = 0.5, U0 = 1, L = 2.
  CHECK(exact_rectangular_transmission(Particle(1, 0.5), 1, 2) ==
        doctest::Approx(worked::kTransmissionL2).epsilon(1e-13));
  CHECK(exact_rectangular_transmission(Particle(1, 0.5), 1, 1e-9) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(exact_rectangular_transmission(Particle(1, 1), 1, 1), NotEvanescent);

  SUBCASE("strictly decreasing in length and height") {
    const Particle p(1, 0.5);
    double prev = 1.0;
    for (double L = 0.1; L < 6; L *= 1.3) {
      const double t = exact_rectangular_transmission(p, 1, L);
      CHECK(t < prev);
      CHECK(t > 0.0);
      prev = t;
    }
    prev = 1.0;
    for (double U = 0.6; U < 5; U += 0.2) {
      const double t = exact_rectangular_transmission(p, U, 1);
      CHECK(t < prev);
      prev = t;
    }
  }
}

TEST_CASE("piecewise matching chains the evanescent envelope") {
  const Particle p(1, 0.5);
  SUBCASE("single segment reduces to match_boundaries") {
    const PiecewiseMatching pm(p, BarrierSpec::rectangular(1, 1));
    const auto mc = match_boundaries({1, 0}, 1, 1);
    CHECK(pm.coefficients().beta.real() == doctest::Approx(mc.beta.real()).epsilon(1e-15));
    CHECK(pm.phi_transmitted(0.3).real() == doctest::Approx(std::exp(-0.3)).epsilon(1e-15));
    CHECK(pm.phi_reflected(0.3).real() ==
          doctest::Approx(mc.beta.real() * std::exp(0.3)).epsilon(1e-15));
  }
  SUBCASE("two segments") {
    const BarrierSpec b({{0, 0.4, 1.0}, {0.4, 1.0, 2.5}});
    const PiecewiseMatching pm(p, b);
    const double chi1 = 1.0, chi2 = std::sqrt(4.0);
    const double total = chi1 * 0.4 + chi2 * 0.6;
    CHECK(pm.decay_exponent(1.0) == doctest::Approx(total).epsilon(1e-15));
    CHECK(pm.coefficients().beta.real() == doctest::Approx(std::exp(-2 * total)).epsilon(1e-14));
    // Envelopes continuous at the interior boundary.
    CHECK(std::abs(pm.phi_transmitted(0.4 - 1e-12) - pm.phi_transmitted(0.4)) < 1e-11);
    CHECK(std::abs(pm.phi_reflected(0.4 - 1e-12) - pm.phi_reflected(0.4)) < 1e-11);
    // Outer condition: transmitted equals reflected at x = L.
    CHECK(std::abs(pm.phi_transmitted(1.0) - pm.phi_reflected(1.0)) < 1e-15);
  }
  CHECK_THROWS_AS(PiecewiseMatching(p, BarrierSpec({{0, 1, 1.0}, {1, 2, 0.2}})), NotEvanescent);
}
