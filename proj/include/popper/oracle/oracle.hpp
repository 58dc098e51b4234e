#pragma once

// Brute-force numerics used to validate the closed forms. Nothing here calls
// into the analytic modules; states are sampled from their defining integrals
// and evolved with an FFT-based free-particle propagator.

#include <complex>
#include <span>

#include "popper/oracle/grid.hpp"
#include "popper/source.hpp"
#include "popper/units.hpp"

namespace popper::oracle {

/// Mass allowed within 10% of the window edge before a grid counts as truncated.
inline constexpr double kEdgeMassLimit = 1e-8;

struct InitialPairSample {
  /// Pair amplitude from direct quadrature over p, normalized to unit mass.
  Grid2D grid;
  /// Largest pointwise relative deviation of the quadrature from the closed
  /// form exp(-u^2/lc^2) exp(-v^2/4 omega^2) over the central 99% of the mass.
  double closed_form_rel_err = 0.0;
};

/// psi(y1, y2) = int dk exp(-k^2 lc^2 / 4) exp(i k (y1 - y2)) exp(-(y1 + y2)^2 / 4 omega^2).
InitialPairSample sample_initial_pair(const SourceSpec& src, const GridSpec& spec);

enum class Particles { first, second, both };

/// Free evolution over L as the momentum-space phase exp(-i Lambda L k^2 / 4)
/// applied to the selected particles. Throws ExtentTooSmall if the result
/// leaks into the window edge.
Grid2D spectral_propagate(Grid2D grid, Length L, Length Lambda, Particles which);
Grid1D spectral_propagate(Grid1D grid, Length L, Length Lambda);

/// exp(-y^2 / gamma) sampled on the window, peak value 1.
Grid1D sample_gaussian(std::complex<double> gamma, const GridSpec& spec);

/// Enlarges the window by `factor` (power of two) at fixed step, padding zeros.
Grid1D zero_pad(const Grid1D& grid, std::size_t factor);

/// phi2(y2) = sum_y1 conj(slit(y1)) psi(y1, y2) dy1.
/// Throws ResolutionError if the slit is unresolved or sampled on another window.
Grid1D quadrature_condition(const Grid2D& pair, const Grid1D& slit);

/// Same with a hard aperture |y1| <= full_width / 2 (cell-overlap weights).
Grid1D rect_slit_condition(const Grid2D& pair, Length full_width);

struct Moments {
  Length dy;
  Wavenumber dk;
};

/// Position and momentum standard deviations of a 1-D amplitude.
/// Throws ExtentTooSmall / ResolutionError if mass reaches the window or band edge.
Moments grid_moments(const Grid1D& grid);

/// Position standard deviation of one particle's marginal density (1 or 2).
Length marginal_sigma(const Grid2D& grid, int particle);

/// Momentum standard deviation of one particle's marginal.
Wavenumber marginal_momentum_sigma(const Grid2D& grid, int particle);

/// Least-squares gamma of a centred Gaussian amplitude exp(-y^2 / gamma),
/// from the phase-unwrapped log amplitude around y = 0.
std::complex<double> fit_gaussian_parameter(const Grid1D& grid);

/// Full width at half maximum of |psi|^2 (linear interpolation at crossings).
Length intensity_fwhm(const Grid1D& grid);

/// Number of local maxima of |psi|^2 above `floor` times the peak.
std::size_t count_intensity_peaks(const Grid1D& grid, double floor);

/// Fraction of the mass within 10% of the window edge.
double edge_mass_fraction(const Grid1D& grid);
double edge_mass_fraction(const Grid2D& grid);

/// max |numeric - reference| / |reference| over the highest-density samples
/// of `reference` that together hold `mass_fraction` of its mass.
double central_mass_rel_err(std::span<const std::complex<double>> numeric,
                            std::span<const std::complex<double>> reference, double mass_fraction);

}  // namespace popper::oracle
