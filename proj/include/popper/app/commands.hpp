#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "popper/app/scenario.hpp"
#include "popper/optics.hpp"
#include "popper/oracle/report.hpp"
#include "popper/oracle/suite.hpp"
#include "popper/patterns.hpp"

namespace popper::app {

/// Detector-plane parameter of the Omega -> infinity pipeline,
/// gamma = x + i Lambda D, read back as (x, D).
struct EffectiveGeometry {
  Area x;
  Length D;
};

/// Throws InvalidPacket for a wide-open slit (no conditioned packet exists
/// without a centre-of-mass envelope).
EffectiveGeometry effective_geometry(const Scenario& s);

struct FitReport {
  WidthConvention convention;
  Length observed_fwhm;
  Length epsilon;
  Length D;
  WidthRoots roots;
  bool double_root = false;
  Area selected_x;
  Area lc_squared;
  /// Predicted minus observed FWHM at the selected root.
  Length residual;
};

/// Inverts the observed FWHM at the scenario's effective distance and
/// subtracts epsilon^2. The smallest root with x >= epsilon^2 is selected;
/// InconsistentCalibration if neither qualifies.
FitReport cmd_fit(const Scenario& s, Length observed_fwhm,
                  const WidthConvention& conv = WidthConvention::paper());

struct FitAttempt {
  WidthConvention convention;
  std::variant<FitReport, std::string> outcome;  // report or the verbatim error
};

struct SimulateReport {
  std::string scenario;
  std::string hash;
  PipelineResult pipeline;
  /// Present unless slit A is wide open.
  std::optional<EffectiveGeometry> geometry;
  /// Pattern at the detector. For an open slit this is the unconditioned beam.
  PatternStats pattern;
  Length beam_sigma;
  Length beam_width;
  /// Width of the finite-omega conditioned packet and its literal FWHM.
  Length packet_width;
  Length packet_fwhm_exact;
  Wavenumber conditioned_momentum;
  Wavenumber initial_momentum;
  bool momentum_bound_ok = false;
  bool pattern_within_beam_ok = false;
  std::vector<FitAttempt> fits;
};

SimulateReport cmd_simulate(const Scenario& s);

struct SweepReport {
  std::string scenario;
  Length lc;
  Length D;
  double conversion = 1.0;
  WidthConvention convention;
  std::optional<Length> detector_width;
  std::vector<SweepPoint> points;
  std::optional<Length> minimum;
};

/// Parses "a:b:step" (inclusive, in mm) or a comma-separated list of widths in mm.
/// Throws ConfigError on malformed input.
std::vector<Length> parse_width_list(std::string_view spec);

SweepReport cmd_sweep(const Scenario& s, std::span<const Length> widths,
                      std::optional<Length> detector_width = std::nullopt,
                      const WidthConvention& conv = WidthConvention::paper(), unsigned workers = 0);

struct OracleRun {
  std::string suite;
  oracle::OracleReport report;
};

/// Runs the named suites (all when empty), in suite order.
std::vector<OracleRun> cmd_oracle(const std::vector<std::string>& suites,
                                  const oracle::SuiteOptions& options = {});

bool all_passed(const std::vector<OracleRun>& runs);

}  // namespace popper::app
