// Acceptance driver: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Usage: acceptance [artifact_dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tunnelling/cli_io.hpp"
#include "tunnelling/coupling.hpp"
#include "tunnelling/density.hpp"
#include "tunnelling/numerics.hpp"
#include "tunnelling/stationary.hpp"
#include "tunnelling/tdse_oracle.hpp"
#include "tunnelling/tunnelling_time.hpp"

using namespace tunnelling;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

bool rel_close(double got, double want, double rel) {
  return std::abs(got - want) <= rel * std::abs(want);
}

fs::path artifacts;

// Small-argument limit of the exact stop time.
Outcome small_argument_limit() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> mass(0.2, 5), energy(0.05, 2), gap(0.1, 3), len(0.2, 4),
      frac(1e-3, 1.0);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const Particle p(mass(rng), energy(rng));
    const auto barrier = BarrierSpec::rectangular(p.energy() + gap(rng), len(rng));
    const EnergyPair ep(p.energy(), p.energy());
    const DensitySolution unit(p, barrier, PerturbationSpec::constant(1.0), ep);
    const double chi = unit.chi_abs();
    // omega0 is linear in V0, so pick V0 to land z in (0, 1e-3].
    const double z_unit = p.mass() * unit.rabi().omega0 / (4 * chi * chi);
    const double v0 = frac(rng) * 1e-3 / std::abs(z_unit);
    const DensitySolution sol(p, barrier, PerturbationSpec::constant(v0), ep);
    const double z = p.mass() * sol.rabi().omega0 / (4 * chi * chi);
    if (std::abs(z) > 1e-3 * (1 + 1e-12)) return {false, "sampled z above 1e-3"};
    const double exact = *stop_time_exact(sol.rabi().omega0, chi, p.mass());
    const double simple = stop_time_simplified_from_kappa(chi, p.mass());
    worst = std::max(worst, std::abs(exact - simple) / simple);
  }
  return {worst <= 1e-5, fmt("max relative difference %.3e (limit 1e-5)", worst)};
}

Outcome worked_goldens() {
  const Particle p(1, 0.5);
  const DensitySolution sol(p, BarrierSpec::rectangular(1, 1), PerturbationSpec::constant(0.1),
                            EnergyPair(0.5, 0.5));
  const auto& X = sol.overlap();
  const auto Xq = overlap_matrix(sol.matching(), 1.0, 0, 1,
                                 OverlapMethod::quadrature);
  struct Row {
    const char* name;
    double got, want;
  };
  const Row rows[] = {
      {"X_kj", X.kj.real(), 0.13533528323661269189},
      {"X_kk", X.kk.real(), 0.43233235838169365405},
      {"X_jj", X.jj.real(), 0.0585098221739392558},
      {"X_kj quadrature", Xq.kj.real(), 0.13533528323661269189},
      {"X_kk quadrature", Xq.kk.real(), 0.43233235838169365405},
      {"X_jj quadrature", Xq.jj.real(), 0.0585098221739392558},
      {"omega0", sol.rabi().omega0, 0.26239980406561380232},
      {"tau_exact", stop_time_exact(sol.rabi().omega0, sol.chi_abs(), 1).value_or(NAN),
       0.50035930903882032228},
      {"tau_simplified", stop_time_simplified(p, 1.0), 0.5},
  };
  double worst = 0;
  std::string bad;
  for (const auto& r : rows) {
    const double e = std::abs(r.got - r.want) / std::abs(r.want);
    if (!(e <= 1e-6)) bad += std::string(" ") + r.name;
    worst = std::max(worst, e);
  }
  return {bad.empty(), fmt("max relative error %.3e (limit 1e-6)", worst) + bad};
}

Outcome overlap_consistency() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> mag(0.05, 2), phase(-3.1, 3.1), chi(0.05, 5), pos(0, 3);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const MatchingCoefficients mc{std::polar(mag(rng), phase(rng)),
                                  std::polar(mag(rng), phase(rng))};
    const double c = chi(rng);
    double a = pos(rng), b = pos(rng);
    if (a > b) std::swap(a, b);
    if (b - a < 1e-3) b = a + 1e-3;
    const auto cf = overlap_matrix(mc, c, a, b, OverlapMethod::closed_form);
    const auto q = overlap_matrix(mc, c, a, b, OverlapMethod::quadrature);
    for (auto [u, v] : {std::pair{cf.kk, q.kk}, {cf.kj, q.kj}, {cf.jk, q.jk}, {cf.jj, q.jj}}) {
      worst = std::max(worst, std::abs(u - v) / std::max(std::abs(u), std::abs(v)));
    }
  }
  return {worst <= 1e-10, fmt("max entry-wise relative difference %.3e (limit 1e-10)", worst)};
}

Outcome envelope_containment() {
  const DensitySolution sol(Particle(1, 0.5), BarrierSpec::rectangular(1, 1),
                            PerturbationSpec::constant(0.1), EnergyPair(0.5, 0.5));
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> tt(0, 100), xx(0, 1);
  double worst = -INFINITY;
  for (int i = 0; i < 10000; ++i) {
    const double t = tt(rng), x = xx(rng);
    const auto e = envelope(sol, x);
    const double rho = rho_rectangular(sol, t, x);
    worst = std::max({worst, e.rho_min - rho, rho - e.rho_max});
  }
  return {worst <= 1e-12, fmt("largest excursion outside the envelope %.3e (limit 1e-12)", worst)};
}

Outcome initial_density() {
  const DensitySolution sol(Particle(1, 0.5), BarrierSpec::rectangular(1, 1),
                            PerturbationSpec::constant(0.1), EnergyPair(0.5, 0.5));
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const double x = i / 999.0;
    const double expected = std::norm(sol.matching().alpha) * std::exp(-2 * x);
    worst = std::max(worst, std::abs(rho_rectangular(sol, 0, x) - expected) / expected);
  }
  return {worst <= 1e-14, fmt("max relative difference %.3e (limit 1e-14)", worst)};
}

Outcome hartman_diagnostic() {
  const std::vector<double> lengths{0.5, 1, 2, 4, 8};
  const auto rows =
      hartman_scan(Particle(1, 0.5), 1.0, 0.1, EnergyPair(0.5, 0.5), lengths);
  std::ofstream out(artifacts / "hartman.csv");
  out << "L,tau_exact,tau_simplified\n";
  bool identical = rows.size() == lengths.size();
  std::string exact_col;
  for (const auto& r : rows) {
    out << io::format_number(r.L) << ',' << (r.tau_exact ? io::format_number(*r.tau_exact) : "")
        << ',' << io::format_number(r.tau_simplified) << '\n';
    identical = identical && r.tau_simplified == rows.front().tau_simplified;
    exact_col += r.tau_exact ? fmt(" %.10f", *r.tau_exact) : " -";
  }
  return {identical, "tau_simplified bit-identical: " + std::string(identical ? "yes" : "no") +
                         "; tau_exact over L:" + exact_col};
}

double max_drift(const std::vector<double>& history) {
  double d = 0;
  for (double n : history) d = std::max(d, std::abs(n - history.front()));
  return d;
}

Outcome oracle_unitarity() {
  using namespace oracle;
  const auto start = std::chrono::steady_clock::now();
  const GridSpec grid(-150, 150, 4096, 0.05, 2);
  const auto psi = init_packet(grid, WavePacket{-60, 8, 1.0});
  const auto none = PerturbationSpec::constant(0.0);
  const double free = max_drift(
      propagate(psi, grid, BarrierSpec::rectangular(0.0, 2), none, 1.0, 10000).norm_history);
  const double barrier = max_drift(
      propagate(psi, grid, BarrierSpec::rectangular(1.0, 2), none, 1.0, 10000).norm_history);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool pass = free <= 1e-8 && barrier <= 1e-8 && secs < 30;
  return {pass, fmt("drift free %.2e", free) + fmt(", barrier %.2e", barrier) +
                    fmt(" (limit 1e-8), %.1f s", secs)};
}

double golden_transmission(double scale, double& mean_energy) {
  using namespace oracle;
  const Particle p(1, 0.5);
  const auto n = static_cast<std::size_t>(17000 * scale) + 1;
  const GridSpec grid(-400, 450, n, 0.05 / scale, 2);
  const auto wp = WavePacket::for_particle(p, -150, 20);
  mean_energy = wp.mean_energy(p.mass());
  const auto steps = static_cast<std::size_t>(7000 * scale);
  const auto res = propagate(init_packet(grid, wp), grid, BarrierSpec::rectangular(1, 2),
                             PerturbationSpec::constant(0.0), p.mass(), steps);
  return transmission_probability(res.psi_final, grid, 2);
}

Outcome oracle_transmission() {
  const auto start = std::chrono::steady_clock::now();
  const double exact = exact_rectangular_transmission(Particle(1, 0.5), 1, 2);
  double e = 0;
  const double coarse = golden_transmission(1, e);
  const double fine = golden_transmission(2, e);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double dc = (coarse - exact) / exact, df = (fine - exact) / exact;
  const double dh = std::abs(coarse - fine) / exact;
  const bool pass = std::abs(dc) <= 0.02 && std::abs(df) <= 0.02 && dh <= 0.02 && secs < 120;
  return {pass, fmt("exact %.6f", exact) + fmt(", grid %+.3f%%", 100 * dc) +
                    fmt(", halved grid %+.3f%%", 100 * df) + fmt(", %.1f s", secs)};
}

Outcome gauge_phase() {
  using namespace oracle;
  const Particle p(1, 0.5);
  const GridSpec grid(-400, 450, 17001, 0.05, 2);
  const auto psi = init_packet(grid, WavePacket::for_particle(p, -150, 20));
  const auto barrier = BarrierSpec::rectangular(1, 2);
  PropagationOptions everywhere;
  everywhere.region = PerturbationRegion::everywhere;
  const auto base =
      propagate(psi, grid, barrier, PerturbationSpec::constant(0.0), p.mass(), 7000);
  const auto gauged = propagate(psi, grid, barrier, PerturbationSpec::sinusoidal(0.1, 0.3),
                                p.mass(), 7000, everywhere);
  const auto confined = propagate(psi, grid, barrier, PerturbationSpec::sinusoidal(0.1, 0.3),
                                  p.mass(), 7000);
  const double t0 = transmission_probability(base.psi_final, grid, 2);
  const double tg = transmission_probability(gauged.psi_final, grid, 2);
  const double tc = transmission_probability(confined.psi_final, grid, 2);
  const double diff = std::abs(tg - t0);
  return {diff <= 1e-10, fmt("uniform U(t) changes T by %.3e (limit 1e-10)", diff) +
                             fmt("; barrier-confined U(t) changes T by %.3e", std::abs(tc - t0))};
}

Outcome sinc_branches() {
  using numerics::SincPower;
  using numerics::sinc_sq_half;
  double even = 0, jump = 0;
  for (int i = 0; i <= 20000; ++i) {
    const double t = 0.5 + 2.5 * i / 20000.0;
    for (double w : {1e-9, 3e-5, 0.7, 4.0, 123.0}) {
      for (auto pw : {SincPower::first, SincPower::second}) {
        const double a = sinc_sq_half(w, t, pw), b = sinc_sq_half(-w, t, pw);
        even = std::max(even, std::abs(a - b) / std::max(std::abs(a), 1e-300));
      }
    }
  }
  for (int i = 0; i <= 100000; ++i) {
    const double phase = 0.5e-4 + 1.5e-4 * i / 100000.0;
    for (double t : {0.3, 1.0, 7.0}) {
      const double w = phase / t;
      const double series = t * (1.0 - phase * phase / 24.0);
      const double direct = std::sin(0.5 * phase) / (0.5 * w);
      jump = std::max(jump, std::abs(series - direct) / std::abs(direct));
      const double lib = sinc_sq_half(w, t, SincPower::first);
      const double to_branch = std::min(std::abs(lib - series), std::abs(lib - direct));
      if (to_branch > 1e-15 * std::abs(direct)) {
        return {false, "library value matches neither branch"};
      }
    }
  }
  return {even <= 1e-14 && jump <= 1e-11,
          fmt("evenness %.2e (limit 1e-14)", even) + fmt(", branch jump %.2e (limit 1e-11)", jump)};
}

Outcome measurement_bound() {
  const double v = measured_time_bound(1.0, 0.9);
  bool raised = false;
  try {
    measured_time_bound(1.0, 1.0);
  } catch (const InvalidMeasurement&) {
    raised = true;
  }
  bool raised_above = false;
  try {
    measured_time_bound(1.0, 1.1);
  } catch (const InvalidMeasurement&) {
    raised_above = true;
  }
  const bool pass = rel_close(v, 5.0, 4 * 2.2e-16) && raised && raised_above;
  return {pass, fmt("bound(1.0, 0.9) = %.17g", v) +
                    std::string(raised && raised_above ? ", error raised for E_meas >= E_inc"
                                                       : ", error NOT raised")};
}

Outcome residual_report() {
  const DensitySolution sol(Particle(1, 0.5), BarrierSpec::rectangular(1, 1),
                            PerturbationSpec::constant(0.1), EnergyPair(0.5, 0.5));
  const double t_max = 10.0 / std::abs(sol.rabi().omega0);
  const auto profile =
      coupled_residual_profile(sol.rabi(), sol.overlap(), sol.transition(), t_max, 201);
  std::ofstream out(artifacts / "residuals.csv");
  out << "t,residual_first,residual_second,relative_first,relative_second\n";
  double r1 = 0, r2 = 0;
  bool finite = !profile.empty();
  for (const auto& r : profile) {
    out << io::format_number(r.t) << ',' << io::format_number(r.residual_first) << ','
        << io::format_number(r.residual_second) << ',' << io::format_number(r.relative_first)
        << ',' << io::format_number(r.relative_second) << '\n';
    finite = finite && std::isfinite(r.relative_first) && std::isfinite(r.relative_second);
    r1 = std::max(r1, r.relative_first);
    r2 = std::max(r2, r.relative_second);
  }
  out.close();
  const bool persisted = fs::exists(artifacts / "residuals.csv");
  return {finite && persisted,
          fmt("max relative residual %.3e (first)", r1) + fmt(", %.3e (second)", r2) +
              "; profile written to " + (artifacts / "residuals.csv").string()};
}

}  // namespace

int main(int argc, char** argv) {
  artifacts = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_artifacts");
  fs::create_directories(artifacts);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"small-argument stop-time limit", small_argument_limit},
      {"worked-case goldens", worked_goldens},
      {"closed-form vs quadrature overlaps", overlap_consistency},
      {"envelope containment", envelope_containment},
      {"t = 0 density reduction", initial_density},
      {"Hartman diagnostic", hartman_diagnostic},
      {"oracle unitarity", oracle_unitarity},
      {"oracle transmission", oracle_transmission},
      {"gauge-phase property", gauge_phase},
      {"sinc branch continuity and evenness", sinc_branches},
      {"measured-time bound", measurement_bound},
      {"coupled-equation residual report", residual_report},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
