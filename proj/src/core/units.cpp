#include "popper/units.hpp"

#include <string>

#include "popper/errors.hpp"

namespace popper {

DiffractionScale DiffractionScale::photon(Length wavelength) {
  if (!(wavelength.m() > 0.0) || !std::isfinite(wavelength.m())) {
    throw DomainError("wavelength must be positive and finite");
  }
  return DiffractionScale(Mode::photon, wavelength, 0.0, 0.0);
}

DiffractionScale DiffractionScale::massive(double mass_kg, double speed_m_per_s) {
  if (!(mass_kg > 0.0) || !(speed_m_per_s > 0.0) || !std::isfinite(mass_kg) ||
      !std::isfinite(speed_m_per_s)) {
    throw DomainError("massive mode needs positive finite mass and speed");
  }
  // de Broglie: lambda = 2 pi hbar / (m v)
  const Length lambda(2.0 * std::numbers::pi * kHbar / (mass_kg * speed_m_per_s));
  return DiffractionScale(Mode::massive, lambda, mass_kg, speed_m_per_s);
}

double DiffractionScale::mass_kg() const {
  if (mode_ != Mode::massive) throw InvalidMode("mass is undefined in photon mode");
  return mass_;
}

double DiffractionScale::speed() const {
  if (mode_ != Mode::massive) throw InvalidMode("speed is undefined in photon mode");
  return speed_;
}

Length time_to_distance(Seconds t, const DiffractionScale& scale) {
  if (scale.mode() != DiffractionScale::Mode::massive) {
    throw InvalidMode("time_to_distance requires a massive-particle scale");
  }
  if (t.count() < 0.0) throw DomainError("negative propagation time");
  return Length(2.0 * kHbar * t.count() / (scale.mass_kg() * scale.reduced_wavelength().m()));
}

}  // namespace popper
