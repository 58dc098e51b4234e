#pragma once

#include <complex>

#include "popper/packet.hpp"
#include "popper/units.hpp"

namespace popper {

/// Momentum-entangled pair source.
///
/// `lc` is the correlation length hbar/sigma of the relative coordinate and
/// `omega` the centre-of-mass spread. `omega` may be +infinity, the limit in
/// which the centre-of-mass envelope is dropped.
struct SourceSpec {
  Length lc;
  Length omega;
  DiffractionScale scale;

  friend bool operator==(const SourceSpec&, const SourceSpec&) = default;
};

/// Throws DomainError unless lc > 0 and omega > 0.
void validate(const SourceSpec& src);

/// Two-particle Gaussian exp(-(y1-y2)^2 / d_rel) exp(-(y1+y2)^2 / (4 d_com)).
///
/// Free propagation over a distance L (both particles) maps
/// d_rel -> d_rel + 2i Lambda L and d_com -> d_com + i Lambda L / 2; the real
/// parts stay lc^2 and omega^2.
struct PairState {
  ComplexArea d_rel;
  ComplexArea d_com;
  Length distance;
  DiffractionScale scale;

  bool com_unbounded() const { return !std::isfinite(d_com.value().real()); }

  friend bool operator==(const PairState&, const PairState&) = default;
};

PairState initial_state(const SourceSpec& src);

/// Propagates both particles by L >= 0. evolve(a) then evolve(b) equals evolve(a + b).
PairState evolve_pair(const PairState& s, Length L);

/// Normalized amplitude psi(y1, y2). Requires a bounded centre-of-mass envelope.
std::complex<double> pair_amplitude(const PairState& s, Length y1, Length y2);

/// sqrt(sigma^2 + hbar^2 / 4 omega^2), in units of hbar: sqrt(1/lc^2 + 1/(4 omega^2)).
Wavenumber initial_momentum_spread(const SourceSpec& src);

/// (1/2) sqrt(omega^2 + lc^2 / 4).
Length initial_position_spread(const SourceSpec& src);

/// Intensity standard deviation of either particle's marginal (no
/// conditioning) after both have travelled L:
///   (1/2) sqrt(omega^2 + lc^2/4 + Lambda^2 L^2 / (4 omega^2) + Lambda^2 L^2 / lc^2).
Length beam_sigma(const SourceSpec& src, Length L);

}  // namespace popper
