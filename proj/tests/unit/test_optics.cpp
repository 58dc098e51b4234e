#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "generators.hpp"
#include "popper/errors.hpp"
#include "popper/optics.hpp"
#include "popper/oracle/oracle.hpp"

using namespace popper;
using namespace popper::units;

namespace {

using cd = std::complex<double>;

const double kInf = std::numeric_limits<double>::infinity();
const auto kScale = testing::photon_702();
const double kLam = kScale.reduced_wavelength().m();

SourceSpec source(Length lc, Length omega) { return {lc, omega, kScale}; }

double rel(cd a, cd b) { return std::abs(a - b) / std::abs(b); }

struct KimShih {
  Length b1 = meters(0.485);
  Length f = meters(0.5);
  Length L1 = meters(0.515);
};

std::vector<OpticalElement> kim_shih_arm1(const KimShih& k, const SlitSpec& slit) {
  return {FreeSpace{k.b1}, Lens{k.f}, FreeSpace{2.0 * k.f}, Slit{slit}};
}

}  // namespace

TEST_CASE("slit packet: epsilon 0.08 mm localizes to 0.04 mm") {
  const auto p = slit_packet(SlitSpec::gaussian(mm(0.08)));
  CHECK(packet_intensity_sigma(p).mm() == doctest::Approx(0.04).epsilon(1e-14));
  CHECK(p.gamma.value() == cd(p.waist_hint.m2(), 0.0));
}

TEST_CASE("rectangular slit calibrations") {
  const auto wide = SlitSpec::from_rect(mm(0.16), kWideSlitConversion);
  CHECK(wide.epsilon.mm() == doctest::Approx(0.11).epsilon(1e-14));
  const auto real = SlitSpec::from_rect(mm(0.16));
  CHECK(real.epsilon.mm() == doctest::Approx(0.08).epsilon(1e-14));
  CHECK(real.conversion == 0.5);
  CHECK_THROWS_AS(SlitSpec::gaussian(mm(-0.1)), DomainError);
  CHECK_THROWS_AS(SlitSpec::from_rect(mm(0.16), 0.0), DomainError);
}

TEST_CASE("conditioning at the source with unbounded omega gives epsilon^2 + lc^2") {
  const auto src = source(mm(0.05), Length(kInf));
  const auto p = condition_on_slit(initial_state(src), SlitSpec::gaussian(mm(0.08)));
  CHECK(p.gamma.mm2().real() == doctest::Approx(0.08 * 0.08 + 0.05 * 0.05).epsilon(1e-14));
  CHECK(p.gamma.mm2().imag() == 0.0);
}

TEST_CASE("conditioned width after a flight time matches the localization formula") {
  // Massive particles; width sqrt(x + 16 hbar^2 t^2 / (m^2 x)) with x = epsilon^2 + lc^2.
  const double mass = 1.443160648e-25;
  const auto scale = DiffractionScale::massive(mass, 0.05);
  const SourceSpec src{mm(0.03), Length(kInf), scale};
  const Length eps = mm(0.02);
  const Seconds t(0.4);
  const auto pair = evolve_pair(initial_state(src), time_to_distance(t, scale));
  const auto p = condition_on_slit(pair, SlitSpec::gaussian(eps));
  const double x = eps.m() * eps.m() + src.lc.m() * src.lc.m();
  const double ht = kHbar * t.count() / mass;
  const double expected = std::sqrt(x + 16.0 * ht * ht / x);
  CHECK(packet_width(p).m() == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("conditioned gamma matches quadrature of the overlap integral") {
  testing::Gen g(8);
  for (int i = 0; i < 2; ++i) {
    const auto src = source(mm(g.uniform(0.03, 0.06)), mm(g.uniform(0.1, 0.2)));
    const Length eps = mm(g.uniform(0.04, 0.12));
    const Length L1 = meters(g.uniform(0.0, 0.03));
    const auto analytic = condition_on_slit(evolve_pair(initial_state(src), L1), SlitSpec::gaussian(eps));

    const Length width = std::max({beam_sigma(src, L1), packet_intensity_sigma(analytic), 0.5 * eps});
    oracle::GridSpec spec{8.0 * width, 256};
    while (2.0 * spec.extent.m() / static_cast<double>(spec.n) > std::min(src.lc, eps).m() / 4.0) spec.n *= 2;
    auto pair = oracle::sample_initial_pair(src, spec).grid;
    pair = oracle::spectral_propagate(std::move(pair), L1, kScale.reduced_wavelength(), oracle::Particles::both);
    const auto phi = oracle::quadrature_condition(pair, oracle::sample_gaussian({eps.m() * eps.m(), 0.0}, spec));
    CHECK(rel(oracle::fit_gaussian_parameter(phi), analytic.gamma.value()) < 1e-8);
  }
}

TEST_CASE("free propagation adds i Lambda L") {
  const auto p = make_packet(ComplexArea(mm2(0.01)), mm2(0.01));
  CHECK(free_propagate(p, Length(0.0), kScale) == p);
  const auto q = free_propagate(p, meters(2.0), kScale);
  CHECK(q.gamma.value().imag() == doctest::Approx(2.0 * kLam).epsilon(1e-15));
  CHECK(q.waist_hint == p.waist_hint);
  const auto ab = free_propagate(free_propagate(p, meters(0.3), kScale), meters(0.9), kScale);
  const auto sum = free_propagate(p, meters(1.2), kScale);
  CHECK(rel(ab.gamma.value(), sum.gamma.value()) < 1e-15);
  CHECK_THROWS_AS(free_propagate(p, meters(-1.0), kScale), DomainError);
}

TEST_CASE("no-lens detector plane: x + i Lambda (2 L1 + L2)") {
  const auto src = source(mm(0.05), Length(kInf));
  const Length L1 = meters(0.6);
  const Length L2 = meters(0.8);
  const auto slit = SlitSpec::gaussian(mm(0.08));
  const std::vector<OpticalElement> arm1{FreeSpace{L1}, Slit{slit}};
  const std::vector<OpticalElement> arm2{FreeSpace{L1}, FreeSpace{L2}, Detector{}};
  const auto result = run_pipeline(src, arm1, arm2);
  const cd expected(0.08e-3 * 0.08e-3 + 0.05e-3 * 0.05e-3, kLam * (2.0 * L1.m() + L2.m()));
  CHECK(rel(result.packet.gamma.value(), expected) < 1e-12);
  CHECK(result.conditioned);
  CHECK(result.arm2_distance.m() == doctest::Approx(1.4));
}

TEST_CASE("lens re-images a waist from 2f to 2f") {
  const Length f = meters(0.5);
  const Area waist = mm2(0.01);
  auto p = make_packet(ComplexArea(waist), waist);
  p = free_propagate(p, 2.0 * f, kScale);
  p = lens_transform(p, f, kScale);
  p = free_propagate(p, 2.0 * f, kScale);
  CHECK(rel(p.gamma.value(), cd(waist.m2(), 0.0)) < 1e-12);
}

TEST_CASE("lens keeps the intensity width continuous and selects the nearer waist") {
  const Length f = meters(0.5);
  const auto in = make_packet(ComplexArea(cd(1e-8, kLam * 0.9)), Area(1e-8));
  const auto near = lens_transform(in, f, kScale);
  const auto far = lens_transform(in, f, kScale, LensRoot::other);
  CHECK(packet_width(near).m() == doctest::Approx(packet_width(in).m()).epsilon(1e-12));
  CHECK(packet_width(far).m() == doctest::Approx(packet_width(in).m()).epsilon(1e-12));
  CHECK(std::abs(near.gamma.value().real() - 1e-8) < std::abs(far.gamma.value().real() - 1e-8));
  CHECK(near.gamma.value().imag() == doctest::Approx(kLam * (0.9 - 2.0)).epsilon(1e-14));
}

TEST_CASE("lens accepts a double root") {
  // Real gamma a with f = a / (8 Lambda): W^2 = a = 2 Lambda |L - 4f|.
  const double a = 1e-8;
  const Length f(a / (8.0 * kLam));
  const auto out = lens_transform(make_packet(ComplexArea(Area(a)), Area(a)), f, kScale);
  CHECK(out.gamma.value().real() == doctest::Approx(a / 2.0).epsilon(1e-6));
}

TEST_CASE("lens without a real waist reports its parameters") {
  // A narrow waist far from the lens plane with a long focal length.
  const auto p = make_packet(ComplexArea(cd(1e-8, kLam * 0.3)), Area(1e-8));
  CHECK_THROWS_AS(lens_transform(p, meters(0.5), kScale), NoRealWaist);
  CHECK_THROWS_AS(lens_transform(p, meters(1e6), kScale), NoRealWaist);
  try {
    lens_transform(p, meters(0.5), kScale);
  } catch (const NoRealWaist& e) {
    CHECK(std::string(e.what()).find("f = 0.5") != std::string::npos);
  }
  CHECK_THROWS_AS(lens_transform(p, meters(0.0), kScale), DomainError);
}

TEST_CASE("lens inverse undoes the lens") {
  testing::Gen g(9);
  int checked = 0;
  for (int i = 0; i < testing::kPropertySamples; ++i) {
    const double waist = g.log_uniform(1e-10, 1e-6);
    const auto in = make_packet(ComplexArea(cd(waist, kLam * g.uniform(0.0, 3.0))), Area(waist));
    const Length f = meters(g.uniform(0.1, 1.0));
    GaussianPacket out;
    try {
      out = lens_transform(in, f, kScale);
    } catch (const NoRealWaist&) {
      continue;
    }
    const auto back = lens_inverse(out, f, kScale);
    REQUIRE(rel(lens_transform(back, f, kScale).gamma.value(), out.gamma.value()) < 1e-9);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("ghost image: gamma is real at L = 2f - b1") {
  const KimShih k;
  const auto src = source(sqrt(mm2(0.049)), Length(kInf));
  const auto slit = SlitSpec::from_rect(mm(0.16));
  const auto arm1 = kim_shih_arm1(k, slit);
  const std::vector<OpticalElement> arm2{FreeSpace{2.0 * k.f - k.b1}, Detector{}};
  const auto result = run_pipeline(src, arm1, arm2);
  const auto g = result.packet.gamma.value();
  CHECK(std::abs(g.imag()) < 1e-12 * std::abs(g));
  const double x = slit.epsilon.m() * slit.epsilon.m() + src.lc.m() * src.lc.m();
  CHECK(g.real() == doctest::Approx(x).epsilon(1e-12));
  CHECK(packet_width(result.packet).m() == doctest::Approx(std::sqrt(x)).epsilon(1e-12));
}

TEST_CASE("with-lens conditioned form: x + i Lambda (b1 - 2f) + i Lambda L") {
  const KimShih k;
  const auto src = source(mm(0.1), Length(kInf));
  const auto slit = SlitSpec::gaussian(mm(0.08));
  const Length L = meters(0.97);
  const std::vector<OpticalElement> arm2{FreeSpace{L}, Detector{}};
  const auto g = run_pipeline(src, kim_shih_arm1(k, slit), arm2).packet.gamma.value();
  const cd expected(0.08e-3 * 0.08e-3 + 0.1e-3 * 0.1e-3, kLam * (k.b1.m() - 2.0 * k.f.m() + L.m()));
  CHECK(rel(g, expected) < 1e-12);
}

TEST_CASE("pipeline rejects malformed arms") {
  const auto src = source(mm(0.05), mm(1.0));
  const auto slit = Slit{SlitSpec::gaussian(mm(0.08))};
  const std::vector<OpticalElement> arm2{FreeSpace{meters(1.0)}, Detector{}};
  const std::vector<OpticalElement> none{FreeSpace{meters(1.0)}};
  const std::vector<OpticalElement> two{slit, FreeSpace{meters(1.0)}, slit};
  const std::vector<OpticalElement> lens_after{slit, Lens{meters(0.5)}};
  const std::vector<OpticalElement> detector_first{Detector{}, slit};
  const std::vector<OpticalElement> one{FreeSpace{meters(0.5)}, slit};
  CHECK_THROWS_AS(run_pipeline(src, none, arm2), PipelineError);
  CHECK_THROWS_AS(run_pipeline(src, two, arm2), PipelineError);
  CHECK_THROWS_AS(run_pipeline(src, lens_after, arm2), PipelineError);
  CHECK_THROWS_AS(run_pipeline(src, detector_first, arm2), PipelineError);
  const std::vector<OpticalElement> slit_in_2{FreeSpace{meters(1.0)}, slit, Detector{}};
  const std::vector<OpticalElement> lens_in_2{Lens{meters(0.5)}, Detector{}};
  const std::vector<OpticalElement> no_detector{FreeSpace{meters(1.0)}};
  CHECK_THROWS_AS(run_pipeline(src, one, slit_in_2), PipelineError);
  CHECK_THROWS_AS(run_pipeline(src, one, lens_in_2), PipelineError);
  CHECK_THROWS_AS(run_pipeline(src, one, no_detector), PipelineError);
  CHECK_NOTHROW(run_pipeline(src, one, arm2));
}

TEST_CASE("open slit at the source plane reproduces the unconditioned marginal") {
  const auto src = source(mm(0.05), mm(0.15));
  const std::vector<OpticalElement> arm1{FreeSpace{Length(0.0)}, Slit{SlitSpec::open()}};
  const std::vector<OpticalElement> arm2{FreeSpace{Length(0.0)}, Detector{}};
  const auto result = run_pipeline(src, arm1, arm2);
  CHECK_FALSE(result.conditioned);
  CHECK(packet_intensity_sigma(result.packet).m() ==
        doctest::Approx(initial_position_spread(src).m()).epsilon(1e-14));

  oracle::GridSpec spec{8.0 * initial_position_spread(src), 512};
  const auto grid = oracle::sample_initial_pair(src, spec).grid;
  CHECK(oracle::marginal_sigma(grid, 2).m() ==
        doctest::Approx(packet_intensity_sigma(result.packet).m()).epsilon(1e-8));

  const std::vector<OpticalElement> arm1_inf{Slit{SlitSpec::open()}};
  CHECK_THROWS_AS(run_pipeline(source(mm(0.05), Length(kInf)), arm1_inf, arm2), InvalidPacket);
}

TEST_CASE("conditioning never increases the momentum spread") {
  testing::Gen g(12);
  for (int i = 0; i < testing::kPropertySamples; ++i) {
    const auto s = testing::draw_conditioning(g);
    const auto p = condition_on_slit(evolve_pair(initial_state(s.src), s.L1), s.slit);
    REQUIRE(packet_momentum_sigma(p).per_m() <= initial_momentum_spread(s.src).per_m() * (1.0 + 1e-9));
  }
}

TEST_CASE("conditioned pattern is never wider than the beam") {
  testing::Gen g(13);
  for (int i = 0; i < testing::kPropertySamples; ++i) {
    const auto s = testing::draw_conditioning(g);
    const std::vector<OpticalElement> arm1{FreeSpace{s.L1}, Slit{s.slit}};
    const std::vector<OpticalElement> arm2{FreeSpace{s.L1}, FreeSpace{s.L2}, Detector{}};
    const auto p = run_pipeline(s.src, arm1, arm2).packet;
    REQUIRE(packet_intensity_sigma(p).m() <= beam_sigma(s.src, s.L1 + s.L2).m() * (1.0 + 1e-9));
  }
}

TEST_CASE("virtual slit: large-omega detector packet is a free Gaussian over 2 L1 + L2") {
  testing::Gen g(14);
  for (int i = 0; i < testing::kPropertySamples; ++i) {
    auto s = testing::draw_conditioning(g);
    s.src.omega = Length(kInf);
    const std::vector<OpticalElement> arm1{FreeSpace{s.L1}, Slit{s.slit}};
    const std::vector<OpticalElement> arm2{FreeSpace{s.L1}, FreeSpace{s.L2}, Detector{}};
    const auto p = run_pipeline(s.src, arm1, arm2).packet;
    const Area x = s.slit.epsilon * s.slit.epsilon + s.src.lc * s.src.lc;
    const auto virtual_slit = free_propagate(make_packet(ComplexArea(x), x), 2.0 * s.L1 + s.L2, kScale);
    REQUIRE(rel(p.gamma.value(), virtual_slit.gamma.value()) < 1e-12);
  }
}
