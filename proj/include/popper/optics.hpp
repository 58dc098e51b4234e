#pragma once

#include <complex>
#include <optional>
#include <span>
#include <variant>

#include "popper/packet.hpp"
#include "popper/source.hpp"
#include "popper/units.hpp"

namespace popper {

/// Gaussian width epsilon per unit rectangular full width for a real slit.
inline constexpr double kRealSlitConversion = 0.5;
/// Alternative calibration (rect 0.16 mm -> epsilon 0.11 mm).
inline constexpr double kWideSlitConversion = 0.6875;

/// Gaussian slit exp(-y^2 / epsilon^2). An infinite epsilon is a wide-open slit.
struct SlitSpec {
  Length epsilon;
  std::optional<Length> rect_full_width;
  double conversion = 1.0;

  static SlitSpec gaussian(Length epsilon);
  static SlitSpec from_rect(Length full_width, double conversion = kRealSlitConversion);
  static SlitSpec open();

  bool is_open() const { return !std::isfinite(epsilon.m()); }

  friend bool operator==(const SlitSpec&, const SlitSpec&) = default;
};

void validate(const SlitSpec& slit);

struct FreeSpace {
  Length distance;
  friend bool operator==(const FreeSpace&, const FreeSpace&) = default;
};

struct Lens {
  Length focal_length;
  friend bool operator==(const Lens&, const Lens&) = default;
};

struct Slit {
  SlitSpec spec;
  friend bool operator==(const Slit&, const Slit&) = default;
};

struct Detector {
  std::optional<Length> width;
  friend bool operator==(const Detector&, const Detector&) = default;
};

using OpticalElement = std::variant<FreeSpace, Lens, Slit, Detector>;

/// Particle-1 state right behind the slit: gamma = epsilon^2.
GaussianPacket slit_packet(const SlitSpec& slit);

/// Particle-2 packet obtained by projecting particle 1 onto the slit state
/// once both have travelled `pair.distance` (= L1):
///
///   gamma = [s + lc^2 / (1 + lc^2 / 4 omega^2)] / [1 + s / (omega^2 + lc^2 / 4)] + i Lambda L1,
///   s = epsilon^2 + i Lambda L1.
///
/// waist_hint is the large-omega value epsilon^2 + lc^2. An open slit yields
/// the projection onto zero transverse momentum of particle 1.
GaussianPacket condition_on_slit(const PairState& pair, const SlitSpec& slit);

/// Conditioning at the source plane against a slit amplitude exp(-y1^2 / s),
/// where s is the complex conjugate of the slit state carried back to the
/// source. Same algebra as condition_on_slit with L1 = 0 and complex s.
GaussianPacket condition_at_source(const SourceSpec& src, std::complex<double> s);

/// gamma += i Lambda L. Throws DomainError for L < 0.
GaussianPacket free_propagate(const GaussianPacket& p, Length L, const DiffractionScale& scale);

/// gamma += 2i hbar t / m. Massive mode only.
GaussianPacket free_propagate_for(const GaussianPacket& p, Seconds t, const DiffractionScale& scale);

enum class LensRoot {
  nearest_waist,  ///< root closest to the packet's waist_hint
  other,          ///< the remaining root of the continuity quadratic
};

/// Idealized imaging lens acting on Gaussians.
///
/// A packet sigma0^2 + i Lambda L (waist sigma0^2 = Re gamma, a distance L
/// past its waist) leaves as sigma~^2 + i Lambda (L - 4f), where sigma~^2
/// solves t^2 - W^2 t + Lambda^2 (L - 4f)^2 = 0 with
/// W^2 = sigma0^2 + Lambda^2 L^2 / sigma0^2, so the intensity width is
/// continuous across the lens. A waist 2f before the lens is re-imaged 2f
/// after it. Throws NoRealWaist when the quadratic has no real root.
GaussianPacket lens_transform(const GaussianPacket& p, Length f, const DiffractionScale& scale,
                              LensRoot root = LensRoot::nearest_waist);

/// Inverse of lens_transform(., f, ., nearest_waist): returns the packet q with
/// lens_transform(q, f) == p. Throws NoRealWaist if p is not in the lens image.
GaussianPacket lens_inverse(const GaussianPacket& p, Length f, const DiffractionScale& scale);

struct PipelineResult {
  /// Particle-2 packet at the end of arm 2.
  GaussianPacket packet;
  /// False when slit A is wide open; the packet is then the zero-momentum
  /// projection and the observable pattern is the unconditioned beam.
  bool conditioned = true;
  /// Source-plane packet before particle 2's own propagation.
  GaussianPacket at_source;
  /// Total free distance travelled by particle 2.
  Length arm2_distance;
};

/// Conditions particle 2 on particle 1 passing slit A.
///
/// arm1 runs source -> (free | lens)* -> slit [-> free | detector]*; arm2 holds
/// free segments and ends at a Detector. The slit state is carried back
/// through arm 1 to the source, conjugated, used to condition the source
/// state, and particle 2 is then propagated through arm 2.
PipelineResult run_pipeline(const SourceSpec& src, std::span<const OpticalElement> arm1,
                            std::span<const OpticalElement> arm2);

}  // namespace popper
