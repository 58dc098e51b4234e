#include "popper/app/scenario.hpp"

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "popper/errors.hpp"

namespace popper::app {

namespace {

enum class Dimension { length, area, time, mass, speed };

struct UnitEntry {
  std::string_view symbol;
  Dimension dim;
  double factor;
};

// Factors match the constructors in popper::units so parsed and built-in
// values are bit-identical.
constexpr std::array<UnitEntry, 14> kUnits{{
    {"m", Dimension::length, 1.0},
    {"mm", Dimension::length, 1e-3},
    {"um", Dimension::length, 1e-6},
    {"nm", Dimension::length, 1e-9},
    {"m^2", Dimension::area, 1.0},
    {"mm^2", Dimension::area, 1e-6},
    {"um^2", Dimension::area, 1e-12},
    {"s", Dimension::time, 1.0},
    {"ms", Dimension::time, 1e-3},
    {"us", Dimension::time, 1e-6},
    {"kg", Dimension::mass, 1.0},
    {"u", Dimension::mass, 1.66053906660e-27},
    {"m/s", Dimension::speed, 1.0},
    {"mm/s", Dimension::speed, 1e-3},
}};

std::string_view dimension_name(Dimension d) {
  switch (d) {
    case Dimension::length: return "length";
    case Dimension::area: return "area";
    case Dimension::time: return "time";
    case Dimension::mass: return "mass";
    case Dimension::speed: return "speed";
  }
  return "quantity";
}

struct Quantity {
  double value;
  Dimension dim;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

Quantity parse_quantity(const std::string& field, const std::string& raw) {
  const std::string text = trim(raw);
  if (text == "inf") return {std::numeric_limits<double>::infinity(), Dimension::length};
  double number = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, number);
  if (ec != std::errc() || ptr == begin) throw ConfigError(field, "expected a number with a unit, got '" + raw + "'");
  const std::string unit = trim(std::string_view(ptr, static_cast<std::size_t>(end - ptr)));
  if (unit.empty()) throw ConfigError(field, "missing unit in '" + raw + "'");
  for (const auto& u : kUnits) {
    if (u.symbol == unit) return {number * u.factor, u.dim};
  }
  throw ConfigError(field, "unknown unit '" + unit + "'");
}

Quantity expect(const std::string& field, const YAML::Node& node, std::initializer_list<Dimension> dims) {
  if (!node || !node.IsScalar()) throw ConfigError(field, "expected a scalar value with a unit");
  const auto q = parse_quantity(field, node.as<std::string>());
  for (auto d : dims) {
    if (q.dim == d) return q;
  }
  throw ConfigError(field, fmt::format("expected a {}", dimension_name(*dims.begin())));
}

Length length_at(const std::string& field, const YAML::Node& node) {
  return Length(expect(field, node, {Dimension::length}).value);
}

double number_at(const std::string& field, const YAML::Node& node) {
  if (!node || !node.IsScalar()) throw ConfigError(field, "expected a number");
  const std::string text = trim(node.as<std::string>());
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw ConfigError(field, "expected a plain number");
  return v;
}

void only_keys(const std::string& field, const YAML::Node& node, const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw ConfigError(field, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) throw ConfigError(field.empty() ? key : field + "." + key, "unknown key");
  }
}

OpticalElement parse_element(const std::string& field, const YAML::Node& node, const DiffractionScale& scale) {
  if (!node.IsMap() || node.size() != 1) {
    throw ConfigError(field, "each element is a single-key mapping (free, lens, slit or detector)");
  }
  const auto key = node.begin()->first.as<std::string>();
  const YAML::Node value = node.begin()->second;
  const std::string where = field + "." + key;
  if (key == "free") {
    const auto q = expect(where, value, {Dimension::length, Dimension::time});
    if (q.value < 0.0) throw ConfigError(where, "must be non-negative");
    if (q.dim == Dimension::time) {
      if (scale.mode() != DiffractionScale::Mode::massive) {
        throw ConfigError(where, "flight times need a massive particle");
      }
      return FreeSpace{time_to_distance(Seconds(q.value), scale)};
    }
    return FreeSpace{Length(q.value)};
  }
  if (key == "lens") {
    const Length f = length_at(where, value);
    if (!(f.m() > 0.0) || !std::isfinite(f.m())) throw ConfigError(where, "focal length must be positive");
    return Lens{f};
  }
  if (key == "slit") {
    if (value.IsScalar() && value.as<std::string>() == "open") return Slit{SlitSpec::open()};
    only_keys(where, value, {"width", "conversion", "epsilon"});
    try {
      if (value["epsilon"]) {
        if (value["width"] || value["conversion"]) throw ConfigError(where, "give either epsilon or width, not both");
        return Slit{SlitSpec::gaussian(length_at(where + ".epsilon", value["epsilon"]))};
      }
      if (!value["width"]) throw ConfigError(where, "needs width (rectangular) or epsilon (Gaussian)");
      const double conversion = value["conversion"] ? number_at(where + ".conversion", value["conversion"])
                                                    : kRealSlitConversion;
      return Slit{SlitSpec::from_rect(length_at(where + ".width", value["width"]), conversion)};
    } catch (const DomainError& e) {
      throw ConfigError(where, e.what());
    }
  }
  if (key == "detector") {
    if (!value || value.IsNull()) return Detector{};
    only_keys(where, value, {"width"});
    if (!value["width"]) return Detector{};
    const Length w = length_at(where + ".width", value["width"]);
    if (w.m() < 0.0) throw ConfigError(where + ".width", "must be non-negative");
    return Detector{w};
  }
  throw ConfigError(where, "unknown element (expected free, lens, slit or detector)");
}

std::vector<OpticalElement> parse_arm(const std::string& field, const YAML::Node& node, const DiffractionScale& scale) {
  if (!node) throw ConfigError(field, "missing");
  if (!node.IsSequence()) throw ConfigError(field, "expected a list of elements");
  std::vector<OpticalElement> arm;
  for (std::size_t i = 0; i < node.size(); ++i) {
    arm.push_back(parse_element(fmt::format("{}[{}]", field, i), node[i], scale));
  }
  return arm;
}

std::string metres(Length v) {
  if (!std::isfinite(v.m())) return "inf";
  return fmt::format("{:.17g} m", v.m());
}

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

void emit_arm(std::ostringstream& out, const char* key, const std::vector<OpticalElement>& arm) {
  out << key << ":\n";
  for (const auto& e : arm) {
    out << "  - ";
    if (const auto* f = std::get_if<FreeSpace>(&e)) {
      out << "free: " << metres(f->distance) << "\n";
    } else if (const auto* l = std::get_if<Lens>(&e)) {
      out << "lens: " << metres(l->focal_length) << "\n";
    } else if (const auto* s = std::get_if<Slit>(&e)) {
      if (s->spec.is_open()) {
        out << "slit: open\n";
      } else if (s->spec.rect_full_width) {
        out << "slit: {width: " << metres(*s->spec.rect_full_width)
            << ", conversion: " << fmt::format("{:.17g}", s->spec.conversion) << "}\n";
      } else {
        out << "slit: {epsilon: " << metres(s->spec.epsilon) << "}\n";
      }
    } else if (const auto* d = std::get_if<Detector>(&e)) {
      if (d->width) {
        out << "detector: {width: " << metres(*d->width) << "}\n";
      } else {
        out << "detector: {}\n";
      }
    }
  }
}

}  // namespace

void validate(const Scenario& s) {
  if (s.name.empty()) throw ConfigError("name", "must not be empty");
  try {
    validate(s.source);
  } catch (const DomainError& e) {
    throw ConfigError("source", e.what());
  }
  auto check_arm = [](const std::vector<OpticalElement>& arm, const char* name) {
    for (std::size_t i = 0; i < arm.size(); ++i) {
      const std::string field = fmt::format("{}[{}]", name, i);
      if (const auto* f = std::get_if<FreeSpace>(&arm[i]); f && !(f->distance.m() >= 0.0)) {
        throw ConfigError(field + ".free", "must be non-negative");
      }
      if (const auto* l = std::get_if<Lens>(&arm[i]); l && !(l->focal_length.m() > 0.0)) {
        throw ConfigError(field + ".lens", "focal length must be positive");
      }
    }
  };
  check_arm(s.arm1, "arm1");
  check_arm(s.arm2, "arm2");

  int slits = 0;
  bool after_slit = false;
  for (std::size_t i = 0; i < s.arm1.size(); ++i) {
    const auto& e = s.arm1[i];
    const std::string field = fmt::format("arm1[{}]", i);
    if (std::holds_alternative<Slit>(e)) {
      ++slits;
      after_slit = true;
    } else if (std::holds_alternative<Detector>(e) && !after_slit) {
      throw ConfigError(field, "detector in front of slit A");
    } else if (std::holds_alternative<Lens>(e) && after_slit) {
      throw ConfigError(field, "lens behind slit A is not supported");
    }
  }
  if (slits != 1) throw ConfigError("arm1", fmt::format("needs exactly one slit, found {}", slits));
  for (std::size_t i = 0; i < s.arm2.size(); ++i) {
    const std::string field = fmt::format("arm2[{}]", i);
    if (std::holds_alternative<Slit>(s.arm2[i])) throw ConfigError(field, "slit B stays open; no slit allowed");
    if (std::holds_alternative<Lens>(s.arm2[i])) throw ConfigError(field, "lens in arm 2 is not supported");
  }
  if (s.arm2.empty() || !std::holds_alternative<Detector>(s.arm2.back())) {
    throw ConfigError("arm2", "must end with a detector");
  }
  if (s.observed_fwhm && !(s.observed_fwhm->m() > 0.0)) throw ConfigError("observed_fwhm", "must be positive");
}

const SlitSpec& slit_a(const Scenario& s) {
  for (const auto& e : s.arm1) {
    if (const auto* slit = std::get_if<Slit>(&e)) return slit->spec;
  }
  throw ConfigError("arm1", "no slit");
}

std::optional<Length> detector_width(const Scenario& s) {
  if (s.arm2.empty()) return std::nullopt;
  if (const auto* d = std::get_if<Detector>(&s.arm2.back())) return d->width;
  return std::nullopt;
}

Scenario parse_scenario(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("", std::string("malformed file: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("", "top level must be a mapping");
  only_keys("", root, {"name", "description", "source", "wavelength", "particle", "arm1", "arm2", "observed_fwhm"});

  if (!root["name"] || !root["name"].IsScalar()) throw ConfigError("name", "missing");
  std::string name = root["name"].as<std::string>();
  std::string description;
  if (root["description"]) description = root["description"].as<std::string>();

  std::optional<DiffractionScale> scale;
  try {
    if (root["wavelength"] && root["particle"]) throw ConfigError("wavelength", "give wavelength or particle, not both");
    if (root["wavelength"]) {
      scale = DiffractionScale::photon(length_at("wavelength", root["wavelength"]));
    } else if (root["particle"]) {
      const auto p = root["particle"];
      only_keys("particle", p, {"mass", "speed"});
      const double mass = expect("particle.mass", p["mass"], {Dimension::mass}).value;
      const double speed = expect("particle.speed", p["speed"], {Dimension::speed}).value;
      scale = DiffractionScale::massive(mass, speed);
    } else {
      throw ConfigError("wavelength", "missing (or give particle: {mass, speed})");
    }
  } catch (const DomainError& e) {
    throw ConfigError(root["wavelength"] ? "wavelength" : "particle", e.what());
  }

  const auto src = root["source"];
  if (!src) throw ConfigError("source", "missing");
  only_keys("source", src, {"lc", "lc_squared", "omega"});
  if (src["lc"] && src["lc_squared"]) throw ConfigError("source", "give lc or lc_squared, not both");
  Length lc;
  if (src["lc"]) {
    lc = length_at("source.lc", src["lc"]);
  } else if (src["lc_squared"]) {
    const double a = expect("source.lc_squared", src["lc_squared"], {Dimension::area}).value;
    if (a < 0.0) throw ConfigError("source.lc_squared", "must be positive");
    lc = Length(std::sqrt(a));
  } else {
    throw ConfigError("source.lc", "missing (or give lc_squared)");
  }
  if (!src["omega"]) throw ConfigError("source.omega", "missing (use inf for an unbounded envelope)");
  const Length omega = length_at("source.omega", src["omega"]);
  if (!(lc.m() > 0.0)) throw ConfigError("source.lc", "must be positive");
  if (!(omega.m() > 0.0)) throw ConfigError("source.omega", "must be positive");
  Scenario s{std::move(name), std::move(description), SourceSpec{lc, omega, *scale}, {}, {}, {}};

  s.arm1 = parse_arm("arm1", root["arm1"], *scale);
  s.arm2 = parse_arm("arm2", root["arm2"], *scale);
  if (root["observed_fwhm"]) s.observed_fwhm = length_at("observed_fwhm", root["observed_fwhm"]);
  validate(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string save_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "name: " << quoted(s.name) << "\n";
  if (!s.description.empty()) out << "description: " << quoted(s.description) << "\n";
  out << "source:\n";
  out << "  lc: " << metres(s.source.lc) << "\n";
  out << "  omega: " << metres(s.source.omega) << "\n";
  const auto& scale = s.source.scale;
  if (scale.mode() == DiffractionScale::Mode::photon) {
    out << "wavelength: " << metres(scale.wavelength()) << "\n";
  } else {
    out << "particle:\n";
    out << fmt::format("  mass: {:.17g} kg\n", scale.mass_kg());
    out << fmt::format("  speed: {:.17g} m/s\n", scale.speed());
  }
  emit_arm(out, "arm1", s.arm1);
  emit_arm(out, "arm2", s.arm2);
  if (s.observed_fwhm) out << "observed_fwhm: " << metres(*s.observed_fwhm) << "\n";
  return out.str();
}

std::string scenario_hash(const Scenario& s) {
  const std::string text = save_scenario(s);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int size = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), text.data(), text.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &size) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < size; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

}  // namespace popper::app
