#include "popper/app/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "popper/errors.hpp"
#include "popper/packet.hpp"
#include "popper/parallel.hpp"
#include "popper/source.hpp"

namespace popper::app {

namespace {

// Relative gap between the roots below which they count as one.
constexpr double kDoubleRootGap = 1e-6;
// Relative slack on the per-run inequality checks.
constexpr double kInvariantSlack = 1e-12;

Length reduced_wavelength(const Scenario& s) { return s.source.scale.reduced_wavelength(); }

double parse_mm(std::string_view text, std::string_view whole) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError("widths", fmt::format("cannot read '{}' in '{}' as a width in mm", text, whole));
  }
  return v;
}

}  // namespace

EffectiveGeometry effective_geometry(const Scenario& s) {
  SourceSpec ideal = s.source;
  ideal.omega = Length(std::numeric_limits<double>::infinity());
  const auto result = run_pipeline(ideal, s.arm1, s.arm2);
  const auto g = result.packet.gamma.value();
  return {Area(g.real()), Length(std::abs(g.imag()) / reduced_wavelength(s).m())};
}

FitReport cmd_fit(const Scenario& s, Length observed_fwhm, const WidthConvention& conv) {
  validate(s);
  const SlitSpec& slit = slit_a(s);
  if (slit.is_open()) throw DomainError("fit needs a finite slit A");
  const auto geom = effective_geometry(s);
  const Length lam = reduced_wavelength(s);

  FitReport r;
  r.convention = conv;
  r.observed_fwhm = observed_fwhm;
  r.epsilon = slit.epsilon;
  r.D = geom.D;
  r.roots = invert_width(observed_fwhm, geom.D, lam, conv);
  r.double_root = (r.roots.x_large - r.roots.x_small) <= kDoubleRootGap * r.roots.x_large;

  const Area e2 = slit.epsilon * slit.epsilon;
  if (r.roots.x_small >= e2) {
    r.selected_x = r.roots.x_small;
  } else if (r.roots.x_large >= e2) {
    r.selected_x = r.roots.x_large;
  } else {
    throw InconsistentCalibration(
        fmt::format("both roots ({:.6g}, {:.6g} mm^2) lie below epsilon^2 = {:.6g} mm^2",
                    r.roots.x_small.mm2(), r.roots.x_large.mm2(), e2.mm2()));
  }
  r.lc_squared = fit_correlation_length(r.selected_x, slit.epsilon);
  r.residual = pattern_width(r.selected_x, geom.D, lam, conv).fwhm(conv) - observed_fwhm;
  return r;
}

SimulateReport cmd_simulate(const Scenario& s) {
  validate(s);
  SimulateReport r;
  r.scenario = s.name;
  r.hash = scenario_hash(s);
  r.pipeline = run_pipeline(s.source, s.arm1, s.arm2);
  const Length lam = reduced_wavelength(s);

  r.beam_sigma = beam_sigma(s.source, r.pipeline.arm2_distance);
  r.beam_width = 2.0 * r.beam_sigma;
  r.packet_width = packet_width(r.pipeline.packet);
  r.packet_fwhm_exact = exact_fwhm_factor() * r.packet_width;

  if (r.pipeline.conditioned) {
    r.geometry = effective_geometry(s);
    r.pattern = pattern_width(r.geometry->x, r.geometry->D, lam);
  } else {
    // Wide-open slit: what reaches the detector is the beam itself.
    const Length W = r.beam_width;
    r.pattern = PatternStats{Area(r.pipeline.packet.gamma.value().real()), r.pipeline.arm2_distance, W,
                             paper_fwhm_factor() * W, exact_fwhm_factor() * W};
    r.packet_width = W;
    r.packet_fwhm_exact = exact_fwhm_factor() * W;
  }

  r.conditioned_momentum = packet_momentum_sigma(r.pipeline.at_source);
  r.initial_momentum = initial_momentum_spread(s.source);
  r.momentum_bound_ok =
      r.conditioned_momentum.per_m() <= r.initial_momentum.per_m() * (1.0 + kInvariantSlack);
  r.pattern_within_beam_ok = r.packet_width.m() <= r.beam_width.m() * (1.0 + kInvariantSlack);

  if (s.observed_fwhm && r.pipeline.conditioned) {
    for (const auto& conv : {WidthConvention::paper(), WidthConvention::exact()}) {
      FitAttempt attempt{conv, std::string()};
      try {
        attempt.outcome = cmd_fit(s, *s.observed_fwhm, conv);
      } catch (const DomainError& e) {
        attempt.outcome = std::string(e.what());
      }
      r.fits.push_back(std::move(attempt));
    }
  }
  return r;
}

std::vector<Length> parse_width_list(std::string_view spec) {
  std::vector<Length> out;
  if (spec.find(':') != std::string_view::npos) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (true) {
      const auto colon = spec.find(':', start);
      parts.push_back(parse_mm(spec.substr(start, colon - start), spec));
      if (colon == std::string_view::npos) break;
      start = colon + 1;
    }
    if (parts.size() != 3) throw ConfigError("widths", "range must be start:stop:step");
    const double a = parts[0], b = parts[1], step = parts[2];
    if (!(step > 0.0) || b < a) throw ConfigError("widths", "range needs start <= stop and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step * (1.0 + 1e-12))) + 1;
    if (count > 1'000'000) throw ConfigError("widths", "range has more than 10^6 points");
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back(units::mm(a + static_cast<double>(i) * step));
    }
  } else {
    std::size_t start = 0;
    while (true) {
      const auto comma = spec.find(',', start);
      out.push_back(units::mm(parse_mm(spec.substr(start, comma - start), spec)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  for (Length w : out) {
    if (!(w.m() > 0.0)) throw ConfigError("widths", "slit widths must be positive");
  }
  return out;
}

SweepReport cmd_sweep(const Scenario& s, std::span<const Length> widths,
                      std::optional<Length> detector_width, const WidthConvention& conv,
                      unsigned workers) {
  validate(s);
  const SlitSpec& slit = slit_a(s);
  if (slit.is_open()) throw ConfigError("arm1", "sweep needs a finite slit A to fix the geometry");
  if (widths.empty()) throw ConfigError("widths", "no slit widths given");

  SweepReport r;
  r.scenario = s.name;
  r.lc = s.source.lc;
  r.D = effective_geometry(s).D;
  r.conversion = slit.conversion;
  r.convention = conv;
  r.detector_width = detector_width;
  const Length lam = reduced_wavelength(s);

  auto rows = ordered_parallel_map(
      widths,
      [&](const Length& a) {
        const Length one[] = {a};
        return width_vs_slit_sweep(r.lc, r.D, lam, one, conv, r.conversion).front();
      },
      workers);
  r.points = detector_width ? detector_convolution(rows, *detector_width) : std::move(rows);
  r.minimum = sweep_minimum(r.lc, r.D, lam, conv, r.conversion);
  return r;
}

std::vector<OracleRun> cmd_oracle(const std::vector<std::string>& suites,
                                  const oracle::SuiteOptions& options) {
  const auto& names = suites.empty() ? oracle::suite_names() : suites;
  std::vector<OracleRun> runs;
  for (const auto& name : names) {
    std::vector<oracle::OracleReport> reports;
    try {
      reports = oracle::run_suite(name, options);
    } catch (const std::invalid_argument&) {
      throw ConfigError("suite", fmt::format("unknown suite '{}'", name));
    }
    for (auto& rep : reports) runs.push_back({name, std::move(rep)});
  }
  return runs;
}

bool all_passed(const std::vector<OracleRun>& runs) {
  return std::all_of(runs.begin(), runs.end(), [](const OracleRun& r) { return r.report.passed(); });
}

}  // namespace popper::app
