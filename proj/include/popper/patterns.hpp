#pragma once

#include <optional>
#include <span>
#include <vector>

#include "popper/units.hpp"

namespace popper {

/// Constant c in W^2 = x + c Lambda^2 D^2 / x that reproduces the Kim-Shih
/// no-lens inversion (0.657 mm FWHM over 2 m -> 0.632 mm). With c = 4 those
/// numbers have no real solution; `test_patterns` re-derives this choice.
inline constexpr double kPinnedWidthConstant = 1.0;

/// FWHM per Gaussian width in the reproduction convention (W_fwhm = ln2 W).
double paper_fwhm_factor();
/// FWHM per Gaussian width for the literal profile exp(-2 y^2 / W^2): sqrt(2 ln 2).
double exact_fwhm_factor();

struct WidthConvention {
  enum class Kind { paper, exact };
  Kind kind = Kind::paper;
  double c = kPinnedWidthConstant;

  static WidthConvention paper(double c = kPinnedWidthConstant) { return {Kind::paper, c}; }
  /// Literal intensity profile; c is fixed at 1.
  static WidthConvention exact() { return {Kind::exact, 1.0}; }

  /// FWHM / W ratio of this convention.
  double fwhm_factor() const;
};

struct PatternStats {
  Area x;       ///< epsilon^2 + lc^2 (real part of the detector-plane parameter)
  Length D;     ///< effective propagation distance
  Length W;     ///< Gaussian width under the active convention
  Length fwhm_paper;
  Length fwhm_exact;

  /// FWHM under `conv`.
  Length fwhm(const WidthConvention& conv) const;
};

/// W^2 = x + c Lambda^2 D^2 / x; fwhm_paper = ln2 W; fwhm_exact from the
/// literal profile of gamma = x + i Lambda D.
PatternStats pattern_width(Area x, Length D, Length Lambda,
                           const WidthConvention& conv = WidthConvention::paper());

struct WidthRoots {
  Area x_small;
  Area x_large;
};

/// Both roots of x^2 - W^2 x + c Lambda^2 D^2 = 0 with W recovered from the
/// observed FWHM. Throws DiffractionLimit when the discriminant is negative.
WidthRoots invert_width(Length fwhm_obs, Length D, Length Lambda,
                        const WidthConvention& conv = WidthConvention::paper());

/// lc^2 = x - epsilon^2. Throws InconsistentCalibration when x < epsilon^2.
Area fit_correlation_length(Area x, Length epsilon);

struct SweepPoint {
  Length slit_full_width;
  PatternStats stats;
};

/// Pattern width against the rectangular full width a of slit A with
/// epsilon = conversion * a and x = epsilon^2 + lc^2. lc may be zero.
std::vector<SweepPoint> width_vs_slit_sweep(Length lc, Length D, Length Lambda,
                                            std::span<const Length> slit_full_widths,
                                            const WidthConvention& conv = WidthConvention::paper(),
                                            double conversion = 0.5);

/// Full width at which the sweep is narrowest: x(a*) = sqrt(c) Lambda D.
/// Empty when lc^2 >= sqrt(c) Lambda D (curve monotone in a).
std::optional<Length> sweep_minimum(Length lc, Length D, Length Lambda,
                                    const WidthConvention& conv = WidthConvention::paper(),
                                    double conversion = 0.5);

/// Quadrature widening fwhm' = sqrt(fwhm^2 + (k w)^2) applied to both FWHMs.
std::vector<SweepPoint> detector_convolution(std::span<const SweepPoint> curve, Length detector_width,
                                             double k = 1.0);

}  // namespace popper
