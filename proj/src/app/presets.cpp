#include "popper/app/presets.hpp"

#include <filesystem>

#include "popper/errors.hpp"

namespace popper::app {

namespace {

using namespace popper::units;

DiffractionScale photon_702() { return DiffractionScale::photon(nm(702.0)); }

Scenario popper_nolens() {
  return {"popper-nolens",
          "Kim-Shih numbers read without the lens: 2 L1 + L2 = 2 m",
          SourceSpec{sqrt(mm2(0.049)), mm(2.0), photon_702()},
          {FreeSpace{meters(0.5)}, Slit{SlitSpec::from_rect(mm(0.16), 0.5)}},
          {FreeSpace{meters(0.5)}, FreeSpace{meters(1.0)}, Detector{}},
          mm(0.657)};
}

Scenario kim_shih() {
  return {"kim-shih",
          "Lens f = 0.5 m at b1 = 0.485 m images slit A onto slit B; detector L2 = 0.97 m behind slit B",
          SourceSpec{sqrt(mm2(0.049)), mm(2.0), photon_702()},
          {FreeSpace{meters(0.485)}, Lens{meters(0.5)}, FreeSpace{meters(1.0)},
           Slit{SlitSpec::from_rect(mm(0.16), 0.5)}},
          {FreeSpace{meters(0.515)}, FreeSpace{meters(0.97)}, Detector{}},
          mm(0.657)};
}

Scenario strekalov() {
  return {"strekalov",
          "Ghost-interference geometry with 2 L1 + L2 = 1.8 m and 0.5 mm detectors",
          SourceSpec{mm(0.04), mm(2.0), photon_702()},
          {FreeSpace{meters(0.5)}, Slit{SlitSpec::from_rect(mm(0.2), 0.5)}},
          {FreeSpace{meters(0.5)}, FreeSpace{meters(0.8)}, Detector{mm(0.5)}},
          std::nullopt};
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"popper-nolens", "kim-shih", "strekalov"};
  return names;
}

Scenario preset(std::string_view name) {
  if (name == "popper-nolens") return popper_nolens();
  if (name == "kim-shih") return kim_shih();
  if (name == "strekalov") return strekalov();
  throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
}

Scenario resolve_scenario(const std::string& ref) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(ref, ec)) return load_scenario(ref);
  for (const auto& name : preset_names()) {
    if (name == ref) return preset(ref);
  }
  throw ConfigError("", "'" + ref + "' is neither a readable file nor a preset name");
}

}  // namespace popper::app
