#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "popper/oracle/report.hpp"

namespace popper::oracle {

struct SuiteOptions {
  /// Report the base grid only; never refine automatically.
  bool strict = false;
  /// Replaces each check's base sample count (the window is kept).
  std::optional<std::size_t> base_n;
  /// Largest automatic refinement for 2-D grids.
  std::size_t max_n_2d = 2048;
  /// Largest automatic refinement for 1-D grids.
  std::size_t max_n_1d = std::size_t{1} << 18;
  /// Worker threads (0: hardware concurrency).
  unsigned workers = 0;
  /// Seed for the randomized parameter points.
  unsigned long long seed = 20240917ULL;
};

/// Names accepted by run_suite, in execution order.
const std::vector<std::string>& suite_names();

/// Runs one named suite. Throws std::invalid_argument for an unknown name.
std::vector<OracleReport> run_suite(std::string_view name, const SuiteOptions& options = {});

/// Runs every suite in order.
std::vector<OracleReport> run_all(const SuiteOptions& options = {});

}  // namespace popper::oracle
