#include <doctest.h>

#include <cmath>
#include <complex>

#include "generators.hpp"
#include "popper/errors.hpp"
#include "popper/oracle/oracle.hpp"
#include "popper/packet.hpp"

using namespace popper;
using namespace popper::units;

namespace {

using cd = std::complex<double>;

// Composite Simpson moments of |exp(-y^2 / gamma)|^2 over +-12 widths.
double quadrature_variance(cd gamma) {
  const double width = std::sqrt(std::norm(gamma) / gamma.real());
  const double a = -12.0 * width;
  const int n = 20000;
  const double h = -2.0 * a / n;
  double m0 = 0.0;
  double m2 = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double y = a + j * h;
    const double w = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    const double d = std::norm(std::exp(-y * y / gamma));
    m0 += w * d;
    m2 += w * d * y * y;
  }
  return m2 / m0;
}

}  // namespace

TEST_CASE("intensity sigma of a real packet is half the slit width") {
  const auto p = make_packet(ComplexArea(um(2.0) * um(2.0)), um(2.0) * um(2.0));
  CHECK(packet_intensity_sigma(p).m() == doctest::Approx(1e-6).epsilon(1e-14));
}

TEST_CASE("intensity sigma of a chirped packet matches direct quadrature") {
  const cd gamma(1e-6, 1e-6);  // 1 + 1i mm^2
  const auto p = make_packet(ComplexArea(gamma), Area(1e-6));
  const double sigma2 = packet_intensity_sigma(p).mm() * packet_intensity_sigma(p).mm();
  CHECK(sigma2 == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(sigma2 == doctest::Approx(quadrature_variance(gamma) * 1e6).epsilon(1e-10));
}

TEST_CASE("real gamma gives variance a / 4") {
  const double a = 3.7e-8;
  const auto p = make_packet(ComplexArea(Area(a)), Area(a));
  CHECK(packet_intensity_sigma(p).m() * packet_intensity_sigma(p).m() == doctest::Approx(a / 4.0).epsilon(1e-14));
  CHECK(packet_width(p).m() == doctest::Approx(std::sqrt(a)).epsilon(1e-14));
}

TEST_CASE("momentum spread of a real packet is 1 / epsilon") {
  const Length eps = mm(0.08);
  const auto p = make_packet(ComplexArea(eps * eps), eps * eps);
  CHECK(packet_momentum_sigma(p).per_m() == doctest::Approx(1.0 / eps.m()).epsilon(1e-14));
}

TEST_CASE("momentum spread of a chirped packet matches grid Fourier moments") {
  const cd gamma(1e-6, 2e-6);  // 1 + 2i mm^2
  const auto p = make_packet(ComplexArea(gamma), Area(1e-6));
  const auto grid = oracle::sample_gaussian(gamma, {mm(12.0), 2048});
  const auto m = oracle::grid_moments(grid);
  CHECK(m.dk.per_m() == doctest::Approx(packet_momentum_sigma(p).per_m()).epsilon(1e-8));
  CHECK(m.dy.m() == doctest::Approx(packet_intensity_sigma(p).m()).epsilon(1e-8));
}

TEST_CASE("non-normalizable packets are rejected") {
  CHECK_THROWS_AS(make_packet(ComplexArea(cd(0.0, 1e-6)), Area(0.0)), InvalidPacket);
  CHECK_THROWS_AS(make_packet(ComplexArea(cd(-1e-6, 0.0)), Area(0.0)), InvalidPacket);
  const GaussianPacket bad{ComplexArea(cd(-1.0, 0.0)), Area(0.0)};
  CHECK_THROWS_AS(packet_intensity_sigma(bad), InvalidPacket);
  CHECK_THROWS_AS(packet_momentum_sigma(bad), InvalidPacket);
}

TEST_CASE("packet amplitude is normalized") {
  const auto p = make_packet(ComplexArea(cd(2e-8, -5e-8)), Area(2e-8));
  const double span = 12.0 * packet_intensity_sigma(p).m();
  const int n = 4000;
  const double h = 2.0 * span / n;
  double mass = 0.0;
  for (int j = 0; j < n; ++j) mass += std::norm(packet_amplitude(p, Length(-span + j * h))) * h;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("uncertainty product is at least one half, with equality only for real gamma") {
  testing::Gen g(3);
  for (int i = 0; i < testing::kPropertySamples; ++i) {
    const double re = g.log_uniform(1e-12, 1e-4);
    const double im = (i % 10 == 0) ? 0.0 : g.uniform(-1.0, 1.0) * g.log_uniform(1e-12, 1e-4);
    const auto p = make_packet(ComplexArea(cd(re, im)), Area(re));
    const double product = packet_intensity_sigma(p).m() * packet_momentum_sigma(p).per_m();
    REQUIRE(product >= 0.5 * (1.0 - 1e-14));
    if (im == 0.0) {
      REQUIRE(product == doctest::Approx(0.5).epsilon(1e-14));
    } else if (std::abs(im) > 1e-6 * re) {
      REQUIRE(product > 0.5);
    }
  }
}

TEST_CASE("free chirp leaves momentum spread unchanged and never narrows the packet") {
  testing::Gen g(4);
  for (int i = 0; i < testing::kPropertySamples; ++i) {
    const double re = g.log_uniform(1e-12, 1e-4);
    const double im1 = g.uniform(0.0, 1.0) * g.log_uniform(1e-12, 1e-4);
    const double im2 = im1 + g.uniform(0.0, 1.0) * g.log_uniform(1e-12, 1e-4);
    const auto a = make_packet(ComplexArea(cd(re, im1)), Area(re));
    const auto b = make_packet(ComplexArea(cd(re, im2)), Area(re));
    const auto c = make_packet(ComplexArea(cd(re, -im2)), Area(re));
    REQUIRE(packet_momentum_sigma(a).per_m() == packet_momentum_sigma(b).per_m());
    REQUIRE(packet_intensity_sigma(b).m() >= packet_intensity_sigma(a).m());
    REQUIRE(packet_intensity_sigma(c).m() == packet_intensity_sigma(b).m());
  }
}
