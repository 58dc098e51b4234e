#pragma once

#include <complex>

#include "popper/units.hpp"

namespace popper {

enum class Normalization { normalized, unnormalized };

/// Single-particle Gaussian amplitude exp(-y^2 / gamma).
///
/// `waist_hint` is the real waist the packet had at its last focus or origin;
/// the lens uses it to pick between the two waists compatible with width
/// continuity.
struct GaussianPacket {
  ComplexArea gamma;
  Area waist_hint;
  Normalization norm = Normalization::normalized;

  friend bool operator==(const GaussianPacket&, const GaussianPacket&) = default;
};

/// Builds a packet, rejecting gamma with non-positive real part.
GaussianPacket make_packet(ComplexArea gamma, Area waist_hint,
                           Normalization norm = Normalization::normalized);

/// Throws InvalidPacket unless Re(gamma) > 0 and gamma is finite.
void require_normalizable(ComplexArea gamma);

/// Standard deviation of |phi|^2: dy^2 = |gamma|^2 / (4 Re gamma).
Length packet_intensity_sigma(const GaussianPacket& p);

/// Gaussian width W of the intensity exp(-2 y^2 / W^2); W = 2 * sigma.
Length packet_width(const GaussianPacket& p);

/// Exact momentum spread; the momentum density is exp(-Re(gamma) k^2 / 2),
/// so dk = 1 / sqrt(Re gamma) regardless of the chirp.
Wavenumber packet_momentum_sigma(const GaussianPacket& p);

/// Normalized amplitude at y, prefactor (2 Re(1/gamma) / pi)^(1/4).
std::complex<double> packet_amplitude(const GaussianPacket& p, Length y);

}  // namespace popper
