#include "popper/oracle/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>

#include "fft.hpp"
#include "popper/errors.hpp"

namespace popper::oracle {

using detail::dft_inplace;
using detail::FftDirection;

namespace {

constexpr double kPi = std::numbers::pi;
// Fraction of the window / band treated as its edge.
constexpr double kEdgeBand = 0.9;

struct DensityMoments {
  double mean = 0.0;
  double variance = 0.0;
  double total = 0.0;
};

template <class Coordinate>
DensityMoments moments_of(std::span<const double> density, Coordinate coordinate) {
  DensityMoments m;
  for (std::size_t j = 0; j < density.size(); ++j) {
    m.total += density[j];
    m.mean += coordinate(j) * density[j];
  }
  if (!(m.total > 0.0)) throw GridError("grid holds no probability mass");
  m.mean /= m.total;
  for (std::size_t j = 0; j < density.size(); ++j) {
    const double d = coordinate(j) - m.mean;
    m.variance += d * d * density[j];
  }
  m.variance /= m.total;
  return m;
}

std::vector<double> intensity(std::span<const cd> values) {
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), [](cd v) { return std::norm(v); });
  return out;
}

double spectral_edge_fraction(std::span<const double> spectrum, std::size_t n, double step) {
  const double k_edge = kEdgeBand * kPi / step;
  double total = 0.0;
  double edge = 0.0;
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    total += spectrum[j];
    if (std::abs(fft_wavenumber(j, n, step)) > k_edge) edge += spectrum[j];
  }
  return total > 0.0 ? edge / total : 0.0;
}

void require_inside(double edge_fraction, const char* what) {
  if (edge_fraction > kEdgeMassLimit) {
    std::ostringstream msg;
    msg << what << ": " << edge_fraction << " of the mass sits at the window edge";
    throw ExtentTooSmall(msg.str());
  }
}

}  // namespace

void validate(const GridSpec& spec) {
  if (spec.n < 64 || !std::has_single_bit(spec.n)) {
    throw GridError("grid size must be a power of two >= 64");
  }
  if (!(spec.extent.m() > 0.0)) throw GridError("grid extent must be positive");
}

double fft_wavenumber(std::size_t j, std::size_t n, double step) {
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  auto m = static_cast<std::ptrdiff_t>(j);
  if (m >= half) m -= static_cast<std::ptrdiff_t>(n);
  return 2.0 * kPi * static_cast<double>(m) / (static_cast<double>(n) * step);
}

InitialPairSample sample_initial_pair(const SourceSpec& src, const GridSpec& spec) {
  validate(spec);
  validate(src);
  if (!std::isfinite(src.omega.m())) throw GridError("cannot sample a pair with unbounded omega");

  const std::size_t n = spec.n;
  Grid2D grid(spec.extent, n);
  const double dy = grid.step();
  const double lc = src.lc.m();
  const double om = src.omega.m();

  // Trapezoid rule over k; the step keeps the periodic images of the
  // relative-coordinate profile outside the sampled u range.
  const double u_max = static_cast<double>(n - 1) * dy;
  const double k_max = 12.5 / lc;
  const double h_target = 2.0 * kPi / (2.0 * u_max + 20.0 * lc);
  const auto nodes = static_cast<std::size_t>(std::ceil(2.0 * k_max / h_target)) + 1;
  const double h = 2.0 * k_max / static_cast<double>(nodes - 1);

  std::vector<double> weight(nodes);
  std::vector<double> k(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    k[j] = -k_max + static_cast<double>(j) * h;
    const double end = (j == 0 || j + 1 == nodes) ? 0.5 : 1.0;
    weight[j] = end * h * std::exp(-k[j] * k[j] * lc * lc / 4.0);
  }

  // Relative-coordinate profile for every lattice offset m = i1 - i2.
  const std::size_t offsets = 2 * n - 1;
  std::vector<double> quadrature(offsets);
  std::vector<double> closed(offsets);
  for (std::size_t m = 0; m < offsets; ++m) {
    const double u = (static_cast<double>(m) - static_cast<double>(n - 1)) * dy;
    double acc = 0.0;
    for (std::size_t j = 0; j < nodes; ++j) acc += weight[j] * std::cos(k[j] * u);
    quadrature[m] = acc;
    closed[m] = 2.0 * std::sqrt(kPi) / lc * std::exp(-u * u / (lc * lc));
  }

  std::vector<cd> reference(n * n);
  for (std::size_t i1 = 0; i1 < n; ++i1) {
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      const double v = grid.coordinate(i1) + grid.coordinate(i2);
      const double com = std::exp(-v * v / (4.0 * om * om));
      const std::size_t m = i1 + n - 1 - i2;
      grid.at(i1, i2) = quadrature[m] * com;
      reference[i1 * n + i2] = closed[m] * com;
    }
  }

  InitialPairSample out;
  out.closed_form_rel_err = central_mass_rel_err(grid.values, reference, 0.99);

  double mass = 0.0;
  for (const auto& v : grid.values) mass += std::norm(v);
  mass *= dy * dy;
  const double scale = 1.0 / std::sqrt(mass);
  for (auto& v : grid.values) v *= scale;
  require_inside(edge_mass_fraction(grid), "initial pair");
  out.grid = std::move(grid);
  return out;
}

Grid2D spectral_propagate(Grid2D grid, Length L, Length Lambda, Particles which) {
  if (L.m() == 0.0) return grid;
  const std::size_t n = grid.n;
  const double dy = grid.step();
  const double a = -Lambda.m() * L.m() / 4.0;
  const double s1 = which == Particles::second ? 0.0 : 1.0;
  const double s2 = which == Particles::first ? 0.0 : 1.0;
  const double norm = 1.0 / (static_cast<double>(n) * static_cast<double>(n));

  std::vector<cd> phase2(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double k = fft_wavenumber(j, n, dy);
    phase2[j] = std::polar(1.0, a * s2 * k * k);
  }

  dft_inplace(grid.values, n, n, FftDirection::forward);
  for (std::size_t i1 = 0; i1 < n; ++i1) {
    const double k1 = fft_wavenumber(i1, n, dy);
    const cd row = std::polar(norm, a * s1 * k1 * k1);
    for (std::size_t i2 = 0; i2 < n; ++i2) grid.at(i1, i2) *= row * phase2[i2];
  }
  dft_inplace(grid.values, n, n, FftDirection::backward);
  require_inside(edge_mass_fraction(grid), "2-D spectral propagation");
  return grid;
}

Grid1D spectral_propagate(Grid1D grid, Length L, Length Lambda) {
  if (L.m() == 0.0) return grid;
  const std::size_t n = grid.n();
  const double dy = grid.step();
  const double a = -Lambda.m() * L.m() / 4.0;
  const double norm = 1.0 / static_cast<double>(n);
  dft_inplace(grid.values, 0, n, FftDirection::forward);
  for (std::size_t j = 0; j < n; ++j) {
    const double k = fft_wavenumber(j, n, dy);
    grid.values[j] *= std::polar(norm, a * k * k);
  }
  dft_inplace(grid.values, 0, n, FftDirection::backward);
  require_inside(edge_mass_fraction(grid), "1-D spectral propagation");
  return grid;
}

Grid1D sample_gaussian(std::complex<double> gamma, const GridSpec& spec) {
  validate(spec);
  Grid1D g(spec.extent, spec.n);
  for (std::size_t j = 0; j < g.n(); ++j) {
    const double y = g.coordinate(j);
    g.values[j] = std::exp(-y * y / gamma);
  }
  return g;
}

Grid1D zero_pad(const Grid1D& grid, std::size_t factor) {
  if (factor == 0 || !std::has_single_bit(factor)) throw GridError("pad factor must be a power of two");
  Grid1D out(static_cast<double>(factor) * grid.extent, grid.n() * factor);
  const std::size_t offset = (factor - 1) * grid.n() / 2;
  std::copy(grid.values.begin(), grid.values.end(), out.values.begin() + static_cast<std::ptrdiff_t>(offset));
  return out;
}

Grid1D quadrature_condition(const Grid2D& pair, const Grid1D& slit) {
  if (slit.n() != pair.n || slit.extent != pair.extent) {
    throw ResolutionError("slit and pair grids must share extent and resolution");
  }
  const double dy = pair.step();
  const auto slit_density = intensity(slit.values);
  double total = 0.0;
  double second = 0.0;
  for (std::size_t j = 0; j < slit.n(); ++j) {
    const double y = slit.coordinate(j);
    total += slit_density[j];
    second += y * y * slit_density[j];
  }
  if (!(total > 0.0) || std::sqrt(second / total) < 2.0 * dy) {
    throw ResolutionError("slit is narrower than the grid can resolve (needs epsilon >= 4 dy)");
  }

  Grid1D phi(pair.extent, pair.n);
  for (std::size_t i1 = 0; i1 < pair.n; ++i1) {
    const cd w = std::conj(slit.values[i1]) * dy;
    if (w == cd(0.0, 0.0)) continue;
    for (std::size_t i2 = 0; i2 < pair.n; ++i2) phi.values[i2] += w * pair.at(i1, i2);
  }
  return phi;
}

Grid1D rect_slit_condition(const Grid2D& pair, Length full_width) {
  const double dy = pair.step();
  const double half = 0.5 * full_width.m();
  if (full_width.m() < 2.0 * dy) {
    throw ResolutionError("rectangular slit narrower than two grid steps");
  }
  Grid1D phi(pair.extent, pair.n);
  for (std::size_t i1 = 0; i1 < pair.n; ++i1) {
    const double y = pair.coordinate(i1);
    const double overlap = std::min(y + dy / 2.0, half) - std::max(y - dy / 2.0, -half);
    if (overlap <= 0.0) continue;
    for (std::size_t i2 = 0; i2 < pair.n; ++i2) phi.values[i2] += overlap * pair.at(i1, i2);
  }
  return phi;
}

Moments grid_moments(const Grid1D& grid) {
  require_inside(edge_mass_fraction(grid), "moments");
  const double dy = grid.step();
  const auto density = intensity(grid.values);
  const auto pos = moments_of(density, [&](std::size_t j) { return grid.coordinate(j); });

  std::vector<cd> spectrum_values = grid.values;
  dft_inplace(spectrum_values, 0, grid.n(), FftDirection::forward);
  const auto spectrum = intensity(spectrum_values);
  if (spectral_edge_fraction(spectrum, grid.n(), dy) > kEdgeMassLimit) {
    throw ResolutionError("momentum distribution reaches the Nyquist band");
  }
  const auto mom = moments_of(spectrum, [&](std::size_t j) { return fft_wavenumber(j, grid.n(), dy); });
  return {Length(std::sqrt(pos.variance)), Wavenumber(std::sqrt(mom.variance))};
}

Length marginal_sigma(const Grid2D& grid, int particle) {
  std::vector<double> marginal(grid.n, 0.0);
  for (std::size_t i1 = 0; i1 < grid.n; ++i1) {
    for (std::size_t i2 = 0; i2 < grid.n; ++i2) {
      marginal[particle == 1 ? i1 : i2] += std::norm(grid.at(i1, i2));
    }
  }
  const auto m = moments_of(marginal, [&](std::size_t j) { return grid.coordinate(j); });
  return Length(std::sqrt(m.variance));
}

Wavenumber marginal_momentum_sigma(const Grid2D& grid, int particle) {
  std::vector<cd> spectrum = grid.values;
  dft_inplace(spectrum, grid.n, grid.n, FftDirection::forward);
  std::vector<double> marginal(grid.n, 0.0);
  for (std::size_t i1 = 0; i1 < grid.n; ++i1) {
    for (std::size_t i2 = 0; i2 < grid.n; ++i2) {
      marginal[particle == 1 ? i1 : i2] += std::norm(spectrum[i1 * grid.n + i2]);
    }
  }
  if (spectral_edge_fraction(marginal, grid.n, grid.step()) > kEdgeMassLimit) {
    throw ResolutionError("pair momentum distribution reaches the Nyquist band");
  }
  const double dy = grid.step();
  const auto m = moments_of(marginal, [&](std::size_t j) { return fft_wavenumber(j, grid.n, dy); });
  return Wavenumber(std::sqrt(m.variance));
}

std::complex<double> fit_gaussian_parameter(const Grid1D& grid) {
  const std::size_t n = grid.n();
  const std::size_t centre = n / 2;
  const cd peak = grid.values[centre];
  const double peak2 = std::norm(peak);
  if (!(peak2 > 0.0)) throw GridError("amplitude vanishes at y = 0");
  const double floor = 1e-6 * peak2;

  cd s1(0.0, 0.0);
  double s2 = 0.0;
  auto walk = [&](int direction) {
    double phase = 0.0;
    cd previous = peak;
    for (std::size_t m = 1;; ++m) {
      const auto j = static_cast<std::ptrdiff_t>(centre) + direction * static_cast<std::ptrdiff_t>(m);
      if (j < 0 || j >= static_cast<std::ptrdiff_t>(n)) break;
      const cd value = grid.values[static_cast<std::size_t>(j)];
      const double density = std::norm(value);
      if (density < floor) break;
      phase += std::arg(value / previous);
      previous = value;
      const cd log_ratio(0.5 * std::log(density / peak2), phase);
      const double y2 = grid.coordinate(static_cast<std::size_t>(j)) * grid.coordinate(static_cast<std::size_t>(j));
      const double w = density / peak2;
      s1 += w * y2 * log_ratio;
      s2 += w * y2 * y2;
    }
  };
  walk(+1);
  walk(-1);
  if (!(s2 > 0.0)) throw ResolutionError("Gaussian is narrower than one grid step");
  return 1.0 / (-s1 / s2);
}

Length intensity_fwhm(const Grid1D& grid) {
  const auto density = intensity(grid.values);
  const auto peak_it = std::max_element(density.begin(), density.end());
  const auto peak = static_cast<std::size_t>(peak_it - density.begin());
  const double half = 0.5 * *peak_it;
  auto crossing = [&](int direction) {
    auto j = static_cast<std::ptrdiff_t>(peak);
    const auto last = static_cast<std::ptrdiff_t>(density.size()) - 1;
    while (true) {
      const auto next = j + direction;
      if (next < 0 || next > last) throw ExtentTooSmall("half maximum lies outside the window");
      if (density[static_cast<std::size_t>(next)] < half) {
        const double a = density[static_cast<std::size_t>(j)];
        const double b = density[static_cast<std::size_t>(next)];
        const double t = (a - half) / (a - b);
        return grid.coordinate(static_cast<std::size_t>(j)) + direction * t * grid.step();
      }
      j = next;
    }
  };
  return Length(crossing(+1) - crossing(-1));
}

std::size_t count_intensity_peaks(const Grid1D& grid, double floor) {
  const auto density = intensity(grid.values);
  const double threshold = floor * *std::max_element(density.begin(), density.end());
  std::size_t peaks = 0;
  for (std::size_t j = 1; j + 1 < density.size(); ++j) {
    if (density[j] > threshold && density[j] > density[j - 1] && density[j] >= density[j + 1]) ++peaks;
  }
  return peaks;
}

double edge_mass_fraction(const Grid1D& grid) {
  const double edge = kEdgeBand * grid.extent.m();
  double total = 0.0;
  double outer = 0.0;
  for (std::size_t j = 0; j < grid.n(); ++j) {
    const double d = std::norm(grid.values[j]);
    total += d;
    if (std::abs(grid.coordinate(j)) > edge) outer += d;
  }
  return total > 0.0 ? outer / total : 0.0;
}

double edge_mass_fraction(const Grid2D& grid) {
  const double edge = kEdgeBand * grid.extent.m();
  double total = 0.0;
  double outer = 0.0;
  for (std::size_t i1 = 0; i1 < grid.n; ++i1) {
    const bool row_outer = std::abs(grid.coordinate(i1)) > edge;
    for (std::size_t i2 = 0; i2 < grid.n; ++i2) {
      const double d = std::norm(grid.at(i1, i2));
      total += d;
      if (row_outer || std::abs(grid.coordinate(i2)) > edge) outer += d;
    }
  }
  return total > 0.0 ? outer / total : 0.0;
}

double central_mass_rel_err(std::span<const cd> numeric, std::span<const cd> reference, double mass_fraction) {
  if (numeric.size() != reference.size()) throw GridError("compared grids differ in size");
  auto density = intensity(reference);
  const double total = std::accumulate(density.begin(), density.end(), 0.0);
  std::vector<double> sorted = density;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double acc = 0.0;
  double threshold = sorted.back();
  for (double d : sorted) {
    acc += d;
    threshold = d;
    if (acc >= mass_fraction * total) break;
  }
  double worst = 0.0;
  for (std::size_t j = 0; j < reference.size(); ++j) {
    if (density[j] < threshold) continue;
    worst = std::max(worst, std::abs(numeric[j] - reference[j]) / std::abs(reference[j]));
  }
  return worst;
}

}  // namespace popper::oracle
