#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "popper/optics.hpp"
#include "popper/source.hpp"
#include "popper/units.hpp"

namespace popper::app {

/// A complete experiment: source, both arms, and optional measured data.
///
/// arm1 holds particle 1's free segments, optional lens and slit A; arm2
/// holds particle 2's free segments up to its detector.
struct Scenario {
  std::string name;
  std::string description;
  SourceSpec source;
  std::vector<OpticalElement> arm1;
  std::vector<OpticalElement> arm2;
  std::optional<Length> observed_fwhm;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Throws ConfigError (field-qualified) for any geometric or structural breach.
void validate(const Scenario& s);

/// Slit A of arm 1. Throws ConfigError if arm 1 has no slit.
const SlitSpec& slit_a(const Scenario& s);

/// Detector width in arm 2, if one is given.
std::optional<Length> detector_width(const Scenario& s);

/// Parses the structured text form (YAML). Every dimensioned value carries
/// its unit, e.g. "0.16 mm", "702 nm", "0.049 mm^2".
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical text: fixed key order, every length in metres with 17 digits.
std::string save_scenario(const Scenario& s);

/// SHA-256 (hex) of the canonical text.
std::string scenario_hash(const Scenario& s);

}  // namespace popper::app
