#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "generators.hpp"
#include "popper/errors.hpp"
#include "popper/oracle/oracle.hpp"
#include "popper/source.hpp"

using namespace popper;
using namespace popper::units;

namespace {

using cd = std::complex<double>;

const double kInf = std::numeric_limits<double>::infinity();

SourceSpec source(double lc_mm, double omega_mm) {
  return {mm(lc_mm), omega_mm == kInf ? Length(kInf) : mm(omega_mm), testing::photon_702()};
}

oracle::GridSpec pair_grid(const SourceSpec& src, Length L, std::size_t n = 256) {
  oracle::GridSpec spec{8.0 * beam_sigma(src, L), n};
  while (2.0 * spec.extent.m() / static_cast<double>(spec.n) > src.lc.m() / 4.0) spec.n *= 2;
  return spec;
}

std::vector<cd> sample_closed_form(const PairState& s, const oracle::Grid2D& grid) {
  std::vector<cd> out(grid.values.size());
  for (std::size_t i1 = 0; i1 < grid.n; ++i1) {
    for (std::size_t i2 = 0; i2 < grid.n; ++i2) {
      out[i1 * grid.n + i2] = pair_amplitude(s, Length(grid.coordinate(i1)), Length(grid.coordinate(i2)));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("initial relative width parameter is lc squared") {
  const auto s = initial_state(source(0.04, 1.0));
  CHECK(s.d_rel.mm2().real() == doctest::Approx(1.6e-3).epsilon(1e-14));
  CHECK(s.d_rel.mm2().imag() == 0.0);
  CHECK(s.distance.m() == 0.0);
}

TEST_CASE("unbounded omega leaves only the relative coordinate") {
  const auto s = initial_state(source(0.04, kInf));
  CHECK(s.com_unbounded());
  CHECK_THROWS_AS(pair_amplitude(s, mm(0.0), mm(0.0)), DomainError);

  // For a very wide envelope, a common shift of both coordinates is invisible.
  const auto wide = initial_state(source(0.04, 1e6));
  const auto a = pair_amplitude(wide, mm(0.01), mm(-0.02));
  const auto b = pair_amplitude(wide, mm(5.01), mm(4.98));
  CHECK(std::abs(b / a - 1.0) < 1e-10);
}

TEST_CASE("closed form agrees with momentum quadrature of the source state") {
  const auto src = source(0.05, 0.2);
  const auto spec = pair_grid(src, Length(0.0));
  CHECK(spec.n == 256);
  const auto sample = oracle::sample_initial_pair(src, spec);
  CHECK(sample.closed_form_rel_err < 1e-8);
  const auto closed = sample_closed_form(initial_state(src), sample.grid);
  CHECK(oracle::central_mass_rel_err(sample.grid.values, closed, 0.99) < 1e-8);
}

TEST_CASE("evolve_pair over zero distance is the identity") {
  const auto s = initial_state(source(0.04, 1.0));
  CHECK(evolve_pair(s, Length(0.0)) == s);
}

TEST_CASE("evolve_pair composes") {
  const auto s = initial_state(source(0.04, 1.0));
  const auto twice = evolve_pair(evolve_pair(s, meters(1.0)), meters(1.0));
  const auto once = evolve_pair(s, meters(2.0));
  CHECK(std::abs(twice.d_rel.value() - once.d_rel.value()) <= 1e-15 * std::abs(once.d_rel.value()));
  CHECK(std::abs(twice.d_com.value() - once.d_com.value()) <= 1e-15 * std::abs(once.d_com.value()));
  CHECK(twice.distance.m() == doctest::Approx(2.0));
}

TEST_CASE("evolve_pair keeps the real parts and rejects negative distance") {
  const auto s = initial_state(source(0.04, 1.0));
  const auto e = evolve_pair(s, meters(0.7));
  CHECK(e.d_rel.real() == s.d_rel.real());
  CHECK(e.d_com.real() == s.d_com.real());
  CHECK_THROWS_AS(evolve_pair(s, meters(-0.1)), DomainError);
}

TEST_CASE("closed-form evolution matches spectral propagation on the central mass") {
  const auto src = source(0.05, 0.2);
  const Length L = meters(0.02);
  const auto spec = pair_grid(src, L);
  auto grid = oracle::sample_initial_pair(src, spec).grid;
  grid = oracle::spectral_propagate(std::move(grid), L, src.scale.reduced_wavelength(), oracle::Particles::both);
  const auto closed = sample_closed_form(evolve_pair(initial_state(src), L), grid);
  CHECK(oracle::central_mass_rel_err(grid.values, closed, 0.90) < 1e-6);
}

TEST_CASE("pair amplitude is symmetric under joint inversion") {
  testing::Gen g(21);
  for (int i = 0; i < testing::kPropertySamples; ++i) {
    const auto s = evolve_pair(initial_state({g.length_mm(0.01, 1.0), g.length_mm(0.01, 5.0), testing::photon_702()}),
                               meters(g.uniform(0.0, 2.0)));
    const Length y1 = mm(g.uniform(-1.0, 1.0));
    const Length y2 = mm(g.uniform(-1.0, 1.0));
    const auto a = pair_amplitude(s, y1, y2);
    const auto b = pair_amplitude(s, -y1, -y2);
    REQUIRE(std::abs(a - b) <= 1e-14 * std::abs(a) + 1e-300);
  }
}

TEST_CASE("initial momentum spread limits") {
  CHECK(initial_momentum_spread(source(0.04, kInf)).per_m() == doctest::Approx(1.0 / 0.04e-3).epsilon(1e-14));
  // lc = 2 omega doubles the squared spread.
  const auto dk = initial_momentum_spread(source(0.04, 0.02)).per_m();
  CHECK(dk * dk == doctest::Approx(2.0 / (0.04e-3 * 0.04e-3)).epsilon(1e-14));
}

TEST_CASE("initial position spread limits") {
  CHECK(initial_position_spread(source(1e-9, 0.3)).mm() == doctest::Approx(0.15).epsilon(1e-12));
  // omega = lc / 2 gives omega / sqrt 2.
  CHECK(initial_position_spread(source(0.08, 0.04)).mm() == doctest::Approx(0.04 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("initial spreads match grid moments of the sampled source") {
  testing::Gen g(5);
  for (int i = 0; i < 3; ++i) {
    const auto src = source(g.uniform(0.03, 0.08), g.uniform(0.05, 0.25));
    const auto grid = oracle::sample_initial_pair(src, pair_grid(src, Length(0.0))).grid;
    CHECK(oracle::marginal_momentum_sigma(grid, 1).per_m() ==
          doctest::Approx(initial_momentum_spread(src).per_m()).epsilon(1e-6));
    CHECK(oracle::marginal_momentum_sigma(grid, 2).per_m() ==
          doctest::Approx(initial_momentum_spread(src).per_m()).epsilon(1e-6));
    CHECK(oracle::marginal_sigma(grid, 1).m() == doctest::Approx(initial_position_spread(src).m()).epsilon(1e-6));
  }
}

TEST_CASE("free evolution preserves each particle's momentum distribution") {
  const auto src = source(0.05, 0.15);
  const Length L = meters(0.03);
  const auto start = oracle::sample_initial_pair(src, pair_grid(src, L)).grid;
  const auto end = oracle::spectral_propagate(start, L, src.scale.reduced_wavelength(), oracle::Particles::both);
  CHECK(oracle::marginal_momentum_sigma(end, 2).per_m() ==
        doctest::Approx(oracle::marginal_momentum_sigma(start, 2).per_m()).epsilon(1e-12));
}

TEST_CASE("beam sigma matches propagated marginal moments") {
  testing::Gen g(6);
  for (int i = 0; i < 3; ++i) {
    const auto src = source(g.uniform(0.03, 0.06), g.uniform(0.1, 0.2));
    const Length L = meters(g.uniform(0.01, 0.05));
    auto grid = oracle::sample_initial_pair(src, pair_grid(src, L)).grid;
    grid = oracle::spectral_propagate(std::move(grid), L, src.scale.reduced_wavelength(), oracle::Particles::both);
    CHECK(oracle::marginal_sigma(grid, 2).m() == doctest::Approx(beam_sigma(src, L).m()).epsilon(1e-4));
  }
}

TEST_CASE("uncorrected beam expression overstates centre-of-mass spreading") {
  // sqrt(omega^2 + Lambda^2 L^2 / omega^2 + lc^2 / 4 + Lambda^2 L^2 / lc^2) tracks the full
  // width 2 sigma only when omega dominates; the centre-of-mass term should carry 1 / (4 omega^2).
  auto uncorrected = [](const SourceSpec& s, Length L) {
    const double lam = s.scale.reduced_wavelength().m() * L.m();
    const double om2 = s.omega.m() * s.omega.m();
    const double lc2 = s.lc.m() * s.lc.m();
    return std::sqrt(om2 + lam * lam / om2 + lc2 / 4.0 + lam * lam / lc2);
  };
  const auto wide = source(0.05, 50.0);
  CHECK(uncorrected(wide, meters(1.0)) == doctest::Approx(2.0 * beam_sigma(wide, meters(1.0)).m()).epsilon(1e-6));
  const auto narrow = source(0.05, 0.2);
  const Length L = meters(0.5);
  CHECK(std::abs(uncorrected(narrow, L) / (2.0 * beam_sigma(narrow, L).m()) - 1.0) > 1e-3);
}

TEST_CASE("invalid sources are rejected") {
  CHECK_THROWS_AS(initial_state(source(0.0, 1.0)), DomainError);
  CHECK_THROWS_AS(initial_state(source(0.04, 0.0)), DomainError);
  CHECK_THROWS_AS(initial_state(source(-0.04, 1.0)), DomainError);
}
