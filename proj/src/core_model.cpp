#include "tunnelling/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tunnelling/errors.hpp"

namespace tunnelling {

namespace {

void require_positive_finite(double value, const char* what) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

void require_non_negative_time(double t) {
  if (!(t >= 0.0)) throw DomainError("time must be non-negative");
}

}  // namespace

Particle::Particle(double mass, double energy) : mass_(mass), energy_(energy) {
  require_positive_finite(mass, "mass");
  require_positive_finite(energy, "energy");
}

BarrierSpec::BarrierSpec(std::vector<BarrierSegment> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty()) throw DomainError("barrier needs at least one segment");
  if (segments_.front().x_start != 0.0) {
    throw DomainError("first barrier segment must start at x = 0");
  }
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    if (!std::isfinite(s.value)) throw DomainError("barrier potential must be finite");
    if (!std::isfinite(s.x_end) || !(s.x_end > s.x_start)) {
      throw DomainError("barrier segment " + std::to_string(i) + " is empty or reversed");
    }
    if (i + 1 < segments_.size() && segments_[i + 1].x_start != s.x_end) {
      throw DomainError("barrier segments " + std::to_string(i) + " and " +
                        std::to_string(i + 1) + " are not contiguous");
    }
  }
}

BarrierSpec BarrierSpec::rectangular(double height, double length) {
  require_positive_finite(length, "barrier length");
  return BarrierSpec({{0.0, length, height}});
}

std::size_t BarrierSpec::segment_index(double x) const {
  if (!(x >= 0.0 && x <= length())) {
    throw DomainError("position " + std::to_string(x) + " lies outside the barrier [0, L]");
  }
  // First segment whose end lies strictly beyond x; x == L falls through to the last.
  auto it = std::upper_bound(segments_.begin(), segments_.end(), x,
                             [](double v, const BarrierSegment& s) { return v < s.x_end; });
  if (it == segments_.end()) return segments_.size() - 1;
  return static_cast<std::size_t>(it - segments_.begin());
}

double potential_at(const BarrierSpec& barrier, double x) {
  return barrier.segments()[barrier.segment_index(x)].value;
}

PerturbationSpec::PerturbationSpec(PerturbationKind kind, double amplitude,
                                   double angular_frequency, double center, double width)
    : kind_(kind),
      amplitude_(amplitude),
      angular_frequency_(angular_frequency),
      center_(center),
      width_(width) {
  if (!std::isfinite(amplitude)) throw DomainError("perturbation amplitude must be finite");
}

PerturbationSpec PerturbationSpec::constant(double amplitude) {
  return {PerturbationKind::constant, amplitude, 0.0, 0.0, 0.0};
}

PerturbationSpec PerturbationSpec::sinusoidal(double amplitude, double angular_frequency) {
  require_positive_finite(angular_frequency, "perturbation angular frequency");
  return {PerturbationKind::sinusoidal, amplitude, angular_frequency, 0.0, 0.0};
}

PerturbationSpec PerturbationSpec::gaussian_pulse(double amplitude, double center,
                                                  double width) {
  require_positive_finite(center, "pulse center");
  require_positive_finite(width, "pulse width");
  return {PerturbationKind::gaussian_pulse, amplitude, 0.0, center, width};
}

PerturbationSpec PerturbationSpec::with_amplitude(double amplitude) const {
  return {kind_, amplitude, angular_frequency_, center_, width_};
}

double perturbation_at(const PerturbationSpec& pert, double t) {
  require_non_negative_time(t);
  switch (pert.kind()) {
    case PerturbationKind::constant:
      return pert.amplitude();
    case PerturbationKind::sinusoidal:
      return pert.amplitude() * std::sin(pert.angular_frequency() * t);
    case PerturbationKind::gaussian_pulse: {
      const double u = (t - pert.center()) / pert.width();
      return pert.amplitude() * std::exp(-0.5 * u * u);
    }
  }
  return 0.0;
}

double perturbation_phase_integral(const PerturbationSpec& pert, double t) {
  require_non_negative_time(t);
  switch (pert.kind()) {
    case PerturbationKind::constant:
      return pert.amplitude() * t;
    case PerturbationKind::sinusoidal: {
      // 1 - cos(x) = 2 sin^2(x/2) avoids cancellation at small x.
      const double half = 0.5 * pert.angular_frequency() * t;
      const double s = std::sin(half);
      return pert.amplitude() * 2.0 * s * s / pert.angular_frequency();
    }
    case PerturbationKind::gaussian_pulse: {
      const double scale = pert.width() * std::numbers::sqrt2;
      const double upper = (t - pert.center()) / scale;
      const double lower = -pert.center() / scale;
      // erf(upper) - erf(lower) via erfc keeps precision when both sit in the
      // same tail.
      double diff;
      if (lower >= 0.0) {
        diff = std::erfc(lower) - std::erfc(upper);
      } else if (upper <= 0.0) {
        diff = std::erfc(-upper) - std::erfc(-lower);
      } else {
        diff = std::erf(upper) - std::erf(lower);
      }
      return pert.amplitude() * pert.width() * std::sqrt(std::numbers::pi / 2.0) * diff;
    }
  }
  return 0.0;
}

EnergyPair::EnergyPair(double e_k, double e_j) : e_k_(e_k), e_j_(e_j) {
  require_positive_finite(e_k, "E_k");
  require_positive_finite(e_j, "E_j");
}

}  // namespace tunnelling
