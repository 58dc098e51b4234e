#pragma once

#include <cstddef>
#include <string>

#include "popper/units.hpp"

namespace popper::oracle {

/// One analytic-versus-numeric comparison.
struct OracleReport {
  std::string quantity;
  std::string unit;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_err = 0.0;
  double tolerance = 0.0;
  /// Grid size and half-window of the reported measurement (0 for algebraic checks).
  std::size_t n = 0;
  Length extent;
  /// rel_err moved by less than a tenth of the tolerance under doubling of n
  /// and of the window.
  bool converged = false;
  std::string note;

  bool passed() const { return converged && rel_err < tolerance; }
};

}  // namespace popper::oracle
