#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "popper/units.hpp"

namespace popper::oracle {

using cd = std::complex<double>;

/// Uniform samples y_j = -extent + j * step, j = 0..n-1 (y = 0 at j = n/2).
struct Grid1D {
  Length extent;
  std::vector<cd> values;

  Grid1D() = default;
  Grid1D(Length extent, std::size_t n) : extent(extent), values(n) {}

  std::size_t n() const { return values.size(); }
  double step() const { return 2.0 * extent.m() / static_cast<double>(values.size()); }
  double coordinate(std::size_t j) const {
    return -extent.m() + static_cast<double>(j) * step();
  }
};

/// n x n samples of psi(y1, y2), row-major with y1 as the row index.
struct Grid2D {
  Length extent;
  std::size_t n = 0;
  std::vector<cd> values;

  Grid2D() = default;
  Grid2D(Length extent, std::size_t n) : extent(extent), n(n), values(n * n) {}

  double step() const { return 2.0 * extent.m() / static_cast<double>(n); }
  double coordinate(std::size_t j) const { return -extent.m() + static_cast<double>(j) * step(); }
  cd& at(std::size_t i1, std::size_t i2) { return values[i1 * n + i2]; }
  const cd& at(std::size_t i1, std::size_t i2) const { return values[i1 * n + i2]; }
};

/// Window and sample count of a run.
struct GridSpec {
  Length extent;
  std::size_t n = 1024;

  GridSpec refined() const { return {extent, 2 * n}; }
  GridSpec widened() const { return {2.0 * extent, 2 * n}; }
};

/// Throws GridError unless n is a power of two >= 64 and extent > 0.
void validate(const GridSpec& spec);

/// Angular wavenumber of FFT bin j for n samples spaced `step` apart.
double fft_wavenumber(std::size_t j, std::size_t n, double step);

}  // namespace popper::oracle
