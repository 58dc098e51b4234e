#include "popper/source.hpp"

#include <cmath>
#include <numbers>

#include "popper/errors.hpp"

namespace popper {

namespace {

using cd = std::complex<double>;

// Normalized 1-D factor for exp(-x^2 / d) evolved from the real d0 = Re(d).
// Free evolution multiplies by sqrt(d0 / d); |.|^2 integrates to one over x.
cd evolved_gaussian(cd d, double x) {
  const double d0 = d.real();
  return std::pow(2.0 / (std::numbers::pi * d0), 0.25) * std::sqrt(d0 / d) * std::exp(-x * x / d);
}

}  // namespace

void validate(const SourceSpec& src) {
  if (!(src.lc.m() > 0.0) || !std::isfinite(src.lc.m())) {
    throw DomainError("correlation length lc must be positive and finite");
  }
  if (!(src.omega.m() > 0.0) || std::isnan(src.omega.m())) {
    throw DomainError("centre-of-mass spread omega must be positive");
  }
}

PairState initial_state(const SourceSpec& src) {
  validate(src);
  const double lc2 = src.lc.m() * src.lc.m();
  const double om2 = src.omega.m() * src.omega.m();
  return PairState{ComplexArea(Area(lc2)), ComplexArea(Area(om2)), Length(0.0), src.scale};
}

PairState evolve_pair(const PairState& s, Length L) {
  if (L.m() < 0.0) throw DomainError("negative propagation distance");
  const double phase = s.scale.reduced_wavelength().m() * L.m();
  PairState out = s;
  out.d_rel = s.d_rel + ComplexArea(cd(0.0, 2.0 * phase));
  out.d_com = s.d_com + ComplexArea(cd(0.0, 0.5 * phase));
  out.distance = s.distance + L;
  return out;
}

std::complex<double> pair_amplitude(const PairState& s, Length y1, Length y2) {
  if (s.com_unbounded()) throw DomainError("pair state with unbounded omega is not normalizable");
  const double u = y1.m() - y2.m();
  const double v = y1.m() + y2.m();
  // dy1 dy2 = du dv / 2
  return std::sqrt(2.0) * evolved_gaussian(s.d_rel.value(), u) *
         evolved_gaussian(4.0 * s.d_com.value(), v);
}

Wavenumber initial_momentum_spread(const SourceSpec& src) {
  validate(src);
  const double lc = src.lc.m();
  const double om = src.omega.m();
  return Wavenumber(std::sqrt(1.0 / (lc * lc) + 1.0 / (4.0 * om * om)));
}

Length initial_position_spread(const SourceSpec& src) {
  validate(src);
  const double lc = src.lc.m();
  const double om = src.omega.m();
  return Length(0.5 * std::sqrt(om * om + lc * lc / 4.0));
}

Length beam_sigma(const SourceSpec& src, Length L) {
  validate(src);
  if (L.m() < 0.0) throw DomainError("negative propagation distance");
  const double lc2 = src.lc.m() * src.lc.m();
  const double om2 = src.omega.m() * src.omega.m();
  const double phase = src.scale.reduced_wavelength().m() * L.m();
  // y2 = (v - u) / 2 with u, v independent.
  const double var_u = lc2 / 4.0 + phase * phase / lc2;
  const double var_v = om2 + phase * phase / (4.0 * om2);
  return Length(0.5 * std::sqrt(var_u + var_v));
}

}  // namespace popper
