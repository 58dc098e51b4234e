#include "popper/packet.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "popper/errors.hpp"

namespace popper {

void require_normalizable(ComplexArea gamma) {
  const auto g = gamma.value();
  if (!(g.real() > 0.0) || !std::isfinite(g.real()) || !std::isfinite(g.imag())) {
    std::ostringstream msg;
    msg << "Gaussian parameter must have finite, positive real part (got " << g.real()
        << " + " << g.imag() << "i m^2)";
    throw InvalidPacket(msg.str());
  }
}

GaussianPacket make_packet(ComplexArea gamma, Area waist_hint, Normalization norm) {
  require_normalizable(gamma);
  return GaussianPacket{gamma, waist_hint, norm};
}

Length packet_intensity_sigma(const GaussianPacket& p) {
  require_normalizable(p.gamma);
  const auto g = p.gamma.value();
  return Length(std::sqrt(std::norm(g) / (4.0 * g.real())));
}

Length packet_width(const GaussianPacket& p) { return 2.0 * packet_intensity_sigma(p); }

Wavenumber packet_momentum_sigma(const GaussianPacket& p) {
  require_normalizable(p.gamma);
  return Wavenumber(1.0 / std::sqrt(p.gamma.value().real()));
}

std::complex<double> packet_amplitude(const GaussianPacket& p, Length y) {
  require_normalizable(p.gamma);
  const auto g = p.gamma.value();
  const double re_inv = (1.0 / g).real();
  const double prefactor = std::pow(2.0 * re_inv / std::numbers::pi, 0.25);
  return prefactor * std::exp(-y.m() * y.m() / g);
}

}  // namespace popper
