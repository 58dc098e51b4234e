#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace popper::oracle::detail {

enum class FftDirection { forward, backward };

/// Unnormalized in-place DFT of a 1-D (rows == 0) or rows x cols array.
/// The backward transform is not rescaled.
void dft_inplace(std::vector<std::complex<double>>& data, std::size_t rows, std::size_t cols,
                 FftDirection dir);

}  // namespace popper::oracle::detail
