#include "popper/oracle/suite.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "popper/errors.hpp"
#include "popper/optics.hpp"
#include "popper/oracle/oracle.hpp"
#include "popper/packet.hpp"
#include "popper/parallel.hpp"
#include "popper/patterns.hpp"
#include "popper/source.hpp"

namespace popper::oracle {

namespace {

using namespace popper::units;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Measurement {
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_err = 0.0;
};

struct Check {
  std::string quantity;
  std::string unit;
  double tolerance = 0.0;
  int dims = 2;  // 0: algebraic, no grid
  GridSpec base;
  std::function<Measurement(const GridSpec&)> measure;
};

// Deterministic uniform draws, independent of the standard library's
// distribution implementations.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : state_(seed) {}

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
};

DiffractionScale photon_702() { return DiffractionScale::photon(nm(702.0)); }

double rel(double numeric, double analytic) { return std::abs(numeric - analytic) / std::abs(analytic); }

double rel(std::complex<double> numeric, std::complex<double> analytic) {
  return std::abs(numeric - analytic) / std::abs(analytic);
}

// Window of 8 widths, resolution of a quarter of the finest feature.
GridSpec grid_for(Length width, Length finest, std::size_t min_n = 256) {
  GridSpec spec{8.0 * width, min_n};
  while (2.0 * spec.extent.m() / static_cast<double>(spec.n) > finest.m() / 4.0) spec.n *= 2;
  return spec;
}

std::optional<Measurement> attempt(const Check& c, const GridSpec& spec, std::string& error) {
  try {
    validate(spec);
    return c.measure(spec);
  } catch (const GridError& e) {
    error = e.what();
    return std::nullopt;
  }
}

OracleReport converge(const Check& c, const SuiteOptions& options) {
  OracleReport r;
  r.quantity = c.quantity;
  r.unit = c.unit;
  r.tolerance = c.tolerance;

  if (c.dims == 0) {
    const auto m = c.measure(GridSpec{});
    r.analytic = m.analytic;
    r.numeric = m.numeric;
    r.rel_err = m.rel_err;
    r.converged = true;
    return r;
  }

  const std::size_t max_n = c.dims == 2 ? options.max_n_2d : options.max_n_1d;
  GridSpec spec = c.base;
  if (options.base_n) spec.n = *options.base_n;

  while (true) {
    std::string error;
    const auto base = attempt(c, spec, error);
    std::optional<Measurement> fine;
    std::optional<Measurement> wide;
    const bool can_check = spec.refined().n <= max_n;
    if (base && can_check) {
      fine = attempt(c, spec.refined(), error);
      wide = attempt(c, spec.widened(), error);
    }

    r.n = spec.n;
    r.extent = spec.extent;
    if (base) {
      r.analytic = base->analytic;
      r.numeric = base->numeric;
      r.rel_err = base->rel_err;
    } else {
      r.analytic = r.numeric = std::numeric_limits<double>::quiet_NaN();
      r.rel_err = kInf;
    }

    const double slack = 0.1 * c.tolerance;
    const bool fine_ok = base && fine && std::abs(fine->rel_err - base->rel_err) <= slack;
    const bool wide_ok = base && wide && std::abs(wide->rel_err - base->rel_err) <= slack;
    if (fine_ok && wide_ok) {
      r.converged = true;
      r.note.clear();
      return r;
    }

    if (!error.empty()) {
      r.note = error;
    } else if (!can_check) {
      r.note = "refinement limit reached";
    } else {
      r.note = fine_ok ? "unstable under widening" : "unstable under refinement";
    }
    if (options.strict || spec.refined().refined().n > max_n) return r;
    spec = (fine_ok && !wide_ok) ? spec.widened() : spec.refined();
  }
}

std::vector<OracleReport> run_checks(const std::vector<Check>& checks, const SuiteOptions& options) {
  return ordered_parallel_map(std::span<const Check>(checks),
                              [&](const Check& c) { return converge(c, options); }, options.workers);
}

std::string indexed(const std::string& label, std::size_t i) {
  std::ostringstream s;
  s << label << " #" << i + 1;
  return s.str();
}

// ---- suites ---------------------------------------------------------------

std::vector<Check> initial_state_checks(Draw& draw) {
  std::vector<Check> checks;
  const SourceSpec src{mm(draw.uniform(0.04, 0.06)), mm(draw.uniform(0.15, 0.25)), photon_702()};
  Check c;
  c.quantity = "initial pair: p-quadrature vs closed form";
  c.unit = "1";
  c.tolerance = 1e-8;
  c.base = grid_for(initial_position_spread(src), src.lc, 256);
  c.measure = [src](const GridSpec& spec) {
    const auto sample = sample_initial_pair(src, spec);
    return Measurement{0.0, sample.closed_form_rel_err, sample.closed_form_rel_err};
  };
  checks.push_back(std::move(c));
  return checks;
}

std::vector<Check> pair_evolution_checks(Draw& draw) {
  std::vector<Check> checks;
  const SourceSpec src{mm(draw.uniform(0.04, 0.06)), mm(draw.uniform(0.15, 0.25)), photon_702()};
  const Length L = meters(draw.uniform(0.01, 0.03));
  const Length Lambda = src.scale.reduced_wavelength();
  const GridSpec base = grid_for(beam_sigma(src, L), src.lc, 256);

  Check field;
  field.quantity = "pair amplitude after free evolution";
  field.unit = "1";
  field.tolerance = 1e-6;
  field.base = base;
  field.measure = [=](const GridSpec& spec) {
    auto grid = sample_initial_pair(src, spec).grid;
    grid = spectral_propagate(std::move(grid), L, Lambda, Particles::both);
    const PairState evolved = evolve_pair(initial_state(src), L);
    std::vector<cd> reference(grid.values.size());
    for (std::size_t i1 = 0; i1 < grid.n; ++i1) {
      for (std::size_t i2 = 0; i2 < grid.n; ++i2) {
        reference[i1 * grid.n + i2] =
            pair_amplitude(evolved, Length(grid.coordinate(i1)), Length(grid.coordinate(i2)));
      }
    }
    const double err = central_mass_rel_err(grid.values, reference, 0.90);
    return Measurement{0.0, err, err};
  };
  checks.push_back(std::move(field));

  Check norm;
  norm.quantity = "pair norm after free evolution";
  norm.unit = "1";
  norm.tolerance = 1e-12;
  norm.base = base;
  norm.measure = [=](const GridSpec& spec) {
    auto grid = spectral_propagate(sample_initial_pair(src, spec).grid, L, Lambda, Particles::both);
    double mass = 0.0;
    for (const auto& v : grid.values) mass += std::norm(v);
    mass *= grid.step() * grid.step();
    return Measurement{1.0, mass, rel(mass, 1.0)};
  };
  checks.push_back(std::move(norm));

  Check split;
  split.quantity = "two half steps vs one full step";
  split.unit = "1";
  split.tolerance = 1e-12;
  split.base = base;
  split.measure = [=](const GridSpec& spec) {
    const auto start = sample_initial_pair(src, spec).grid;
    const auto whole = spectral_propagate(start, L, Lambda, Particles::both);
    auto halves = spectral_propagate(start, 0.5 * L, Lambda, Particles::both);
    halves = spectral_propagate(std::move(halves), 0.5 * L, Lambda, Particles::both);
    double peak = 0.0;
    double diff = 0.0;
    for (std::size_t j = 0; j < whole.values.size(); ++j) {
      peak = std::max(peak, std::abs(whole.values[j]));
      diff = std::max(diff, std::abs(whole.values[j] - halves.values[j]));
    }
    return Measurement{0.0, diff / peak, diff / peak};
  };
  checks.push_back(std::move(split));
  return checks;
}

std::vector<Check> initial_spread_checks(Draw& draw) {
  std::vector<Check> checks;
  for (std::size_t i = 0; i < 3; ++i) {
    const SourceSpec src{mm(draw.uniform(0.03, 0.08)), mm(draw.uniform(0.05, 0.25)), photon_702()};
    const GridSpec base = grid_for(initial_position_spread(src), src.lc, 256);

    Check dk;
    dk.quantity = indexed("initial momentum spread", i);
    dk.unit = "1/mm";
    dk.tolerance = 1e-6;
    dk.base = base;
    dk.measure = [src](const GridSpec& spec) {
      const double analytic = initial_momentum_spread(src).per_mm();
      const double numeric = marginal_momentum_sigma(sample_initial_pair(src, spec).grid, 1).per_mm();
      return Measurement{analytic, numeric, rel(numeric, analytic)};
    };
    checks.push_back(std::move(dk));

    Check dy;
    dy.quantity = indexed("initial position spread", i);
    dy.unit = "mm";
    dy.tolerance = 1e-6;
    dy.base = base;
    dy.measure = [src](const GridSpec& spec) {
      const double analytic = initial_position_spread(src).mm();
      const double numeric = marginal_sigma(sample_initial_pair(src, spec).grid, 1).mm();
      return Measurement{analytic, numeric, rel(numeric, analytic)};
    };
    checks.push_back(std::move(dy));
  }
  return checks;
}

struct ConditioningPoint {
  SourceSpec src;
  SlitSpec slit;
  Length L1;
  Length L2;
};

ConditioningPoint draw_point(Draw& draw) {
  ConditioningPoint p{
      SourceSpec{mm(draw.uniform(0.03, 0.06)), mm(draw.uniform(0.1, 0.2)), photon_702()},
      SlitSpec::gaussian(mm(draw.uniform(0.04, 0.12))),
      meters(draw.uniform(0.0, 0.03)),
      meters(draw.uniform(0.0, 0.2)),
  };
  return p;
}

GaussianPacket analytic_conditioned(const ConditioningPoint& p) {
  return condition_on_slit(evolve_pair(initial_state(p.src), p.L1), p.slit);
}

GridSpec conditioning_grid(const ConditioningPoint& p) {
  const Length width = std::max({beam_sigma(p.src, p.L1), packet_intensity_sigma(analytic_conditioned(p)),
                                 0.5 * p.slit.epsilon});
  return grid_for(width, std::min(p.src.lc, p.slit.epsilon), 256);
}

Grid1D numeric_conditioned(const ConditioningPoint& p, const GridSpec& spec) {
  auto pair = sample_initial_pair(p.src, spec).grid;
  pair = spectral_propagate(std::move(pair), p.L1, p.src.scale.reduced_wavelength(), Particles::both);
  const double eps = p.slit.epsilon.m();
  const auto slit = sample_gaussian({eps * eps, 0.0}, spec);
  return quadrature_condition(pair, slit);
}

std::vector<Check> conditioning_checks(Draw& draw) {
  std::vector<Check> checks;
  for (std::size_t i = 0; i < 10; ++i) {
    const ConditioningPoint p = draw_point(draw);
    Check c;
    c.quantity = indexed("conditioned |gamma|", i);
    c.unit = "mm^2";
    c.tolerance = 1e-8;
    c.base = conditioning_grid(p);
    c.measure = [p](const GridSpec& spec) {
      const auto analytic = analytic_conditioned(p).gamma.value();
      const auto numeric = fit_gaussian_parameter(numeric_conditioned(p, spec));
      return Measurement{std::abs(analytic) * 1e6, std::abs(numeric) * 1e6, rel(numeric, analytic)};
    };
    checks.push_back(std::move(c));
  }
  return checks;
}

std::vector<Check> conditioned_momentum_checks(Draw& draw) {
  std::vector<Check> checks;
  for (std::size_t i = 0; i < 3; ++i) {
    const ConditioningPoint p = draw_point(draw);
    Check dk;
    dk.quantity = indexed("conditioned momentum spread", i);
    dk.unit = "1/mm";
    dk.tolerance = 1e-8;
    dk.base = conditioning_grid(p);
    dk.measure = [p](const GridSpec& spec) {
      const double analytic = packet_momentum_sigma(analytic_conditioned(p)).per_mm();
      const double numeric = grid_moments(numeric_conditioned(p, spec)).dk.per_mm();
      return Measurement{analytic, numeric, rel(numeric, analytic)};
    };
    checks.push_back(std::move(dk));

    Check dy;
    dy.quantity = indexed("conditioned position spread", i);
    dy.unit = "mm";
    dy.tolerance = 1e-8;
    dy.base = conditioning_grid(p);
    dy.measure = [p](const GridSpec& spec) {
      const double analytic = packet_intensity_sigma(analytic_conditioned(p)).mm();
      const double numeric = grid_moments(numeric_conditioned(p, spec)).dy.mm();
      return Measurement{analytic, numeric, rel(numeric, analytic)};
    };
    checks.push_back(std::move(dy));
  }
  return checks;
}

std::size_t pad_factor(Length have, Length need) {
  std::size_t factor = 1;
  while (static_cast<double>(factor) * have.m() < need.m()) factor *= 2;
  return factor;
}

std::vector<Check> detector_plane_checks(Draw& draw) {
  std::vector<Check> checks;
  for (std::size_t i = 0; i < 3; ++i) {
    const ConditioningPoint p = draw_point(draw);
    const std::vector<OpticalElement> arm1{FreeSpace{p.L1}, Slit{p.slit}};
    const std::vector<OpticalElement> arm2{FreeSpace{p.L1}, FreeSpace{p.L2}, Detector{}};
    const GaussianPacket detector = run_pipeline(p.src, arm1, arm2).packet;

    Check c;
    c.quantity = indexed("detector-plane |gamma|", i);
    c.unit = "mm^2";
    c.tolerance = 1e-8;
    c.base = conditioning_grid(p);
    c.measure = [p, detector](const GridSpec& spec) {
      auto phi = numeric_conditioned(p, spec);
      phi = zero_pad(phi, pad_factor(phi.extent, 8.0 * packet_intensity_sigma(detector)));
      phi = spectral_propagate(std::move(phi), p.L2, p.src.scale.reduced_wavelength());
      const auto numeric = fit_gaussian_parameter(phi);
      const auto analytic = detector.gamma.value();
      return Measurement{std::abs(analytic) * 1e6, std::abs(numeric) * 1e6, rel(numeric, analytic)};
    };
    checks.push_back(std::move(c));
  }
  return checks;
}

std::vector<Check> beam_width_checks(Draw& draw) {
  std::vector<Check> checks;
  for (std::size_t i = 0; i < 3; ++i) {
    const SourceSpec src{mm(draw.uniform(0.03, 0.06)), mm(draw.uniform(0.1, 0.2)), photon_702()};
    const Length L = meters(draw.uniform(0.01, 0.05));
    Check c;
    c.quantity = indexed("beam width", i);
    c.unit = "mm";
    c.tolerance = 1e-4;
    c.base = grid_for(beam_sigma(src, L), src.lc, 256);
    c.measure = [src, L](const GridSpec& spec) {
      auto grid = spectral_propagate(sample_initial_pair(src, spec).grid, L,
                                     src.scale.reduced_wavelength(), Particles::both);
      const double analytic = beam_sigma(src, L).mm();
      const double numeric = marginal_sigma(grid, 2).mm();
      return Measurement{analytic, numeric, rel(numeric, analytic)};
    };
    checks.push_back(std::move(c));
  }
  return checks;
}

std::vector<Check> rect_slit_checks() {
  // Kim-Shih real slit with the fitted correlation length.
  const SourceSpec src{sqrt(mm2(0.049)), mm(1.0), photon_702()};
  const Length a = mm(0.16);
  const Length L1 = meters(0.5);
  const Length L2 = meters(1.0);
  const std::vector<OpticalElement> arm1{FreeSpace{L1}, Slit{SlitSpec::from_rect(a)}};
  const std::vector<OpticalElement> arm2{FreeSpace{L1}, FreeSpace{L2}, Detector{}};
  const GaussianPacket detector = run_pipeline(src, arm1, arm2).packet;
  const Length analytic = exact_fwhm_factor() * packet_width(detector);

  Check c;
  c.quantity = "rect slit envelope FWHM vs Gaussian slit";
  c.unit = "mm";
  c.tolerance = 0.15;
  c.base = grid_for(beam_sigma(src, L1), std::min(src.lc, a), 256);
  c.measure = [=](const GridSpec& spec) {
    const Length Lambda = src.scale.reduced_wavelength();
    auto pair = spectral_propagate(sample_initial_pair(src, spec).grid, L1, Lambda, Particles::both);
    auto phi = rect_slit_condition(pair, a);
    phi = zero_pad(phi, pad_factor(phi.extent, 8.0 * beam_sigma(src, L1 + L2)));
    phi = spectral_propagate(std::move(phi), L2, Lambda);
    const double numeric = intensity_fwhm(phi).mm();
    return Measurement{analytic.mm(), numeric, rel(numeric, analytic.mm())};
  };
  return {c};
}

std::vector<Check> lens_contract_checks() {
  std::vector<Check> checks;
  const auto scale = photon_702();
  const double lam = scale.reduced_wavelength().m();
  const Length f = meters(0.5);
  const Area waist = mm2(0.01);

  Check round;
  round.quantity = "lens 2f-2f round trip";
  round.unit = "mm^2";
  round.tolerance = 1e-12;
  round.dims = 0;
  round.measure = [=](const GridSpec&) {
    GaussianPacket p = make_packet(ComplexArea(waist), waist);
    p = free_propagate(p, 2.0 * f, scale);
    p = lens_transform(p, f, scale);
    p = free_propagate(p, 2.0 * f, scale);
    const auto analytic = std::complex<double>(waist.m2(), 0.0);
    return Measurement{waist.mm2(), std::abs(p.gamma.value()) * 1e6, rel(p.gamma.value(), analytic)};
  };
  checks.push_back(std::move(round));

  Check continuity;
  continuity.quantity = "lens width continuity";
  continuity.unit = "mm";
  continuity.tolerance = 1e-12;
  continuity.dims = 0;
  continuity.measure = [=](const GridSpec&) {
    const GaussianPacket in = make_packet(ComplexArea(waist, Area(lam * 0.9)), waist);
    const GaussianPacket out = lens_transform(in, f, scale);
    const double before = packet_width(in).mm();
    const double after = packet_width(out).mm();
    return Measurement{before, after, rel(after, before)};
  };
  checks.push_back(std::move(continuity));

  Check inverse;
  inverse.quantity = "lens inverse";
  inverse.unit = "mm^2";
  inverse.tolerance = 1e-12;
  inverse.dims = 0;
  inverse.measure = [=](const GridSpec&) {
    const GaussianPacket in = make_packet(ComplexArea(waist, Area(lam * 0.7)), waist);
    const GaussianPacket back = lens_inverse(lens_transform(in, f, scale), f, scale);
    return Measurement{std::abs(in.gamma.value()) * 1e6, std::abs(back.gamma.value()) * 1e6,
                       rel(back.gamma.value(), in.gamma.value())};
  };
  checks.push_back(std::move(inverse));
  return checks;
}

std::vector<Check> checks_for(std::string_view name, std::uint64_t seed) {
  // Each suite draws from its own stream so subsets reproduce the full run.
  std::uint64_t salt = 0;
  for (char ch : name) salt = salt * 131 + static_cast<unsigned char>(ch);
  Draw draw(seed ^ salt);
  if (name == "initial_state") return initial_state_checks(draw);
  if (name == "pair_evolution") return pair_evolution_checks(draw);
  if (name == "initial_spreads") return initial_spread_checks(draw);
  if (name == "conditioning") return conditioning_checks(draw);
  if (name == "conditioned_momentum") return conditioned_momentum_checks(draw);
  if (name == "detector_plane") return detector_plane_checks(draw);
  if (name == "beam_width") return beam_width_checks(draw);
  if (name == "rect_slit") return rect_slit_checks();
  if (name == "lens_contract") return lens_contract_checks();
  throw std::invalid_argument("unknown oracle suite '" + std::string(name) + "'");
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "initial_state", "pair_evolution", "initial_spreads", "conditioning", "conditioned_momentum",
      "detector_plane", "beam_width", "rect_slit", "lens_contract"};
  return names;
}

std::vector<OracleReport> run_suite(std::string_view name, const SuiteOptions& options) {
  return run_checks(checks_for(name, options.seed), options);
}

std::vector<OracleReport> run_all(const SuiteOptions& options) {
  std::vector<OracleReport> all;
  for (const auto& name : suite_names()) {
    auto part = run_suite(name, options);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

}  // namespace popper::oracle
