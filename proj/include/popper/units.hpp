#pragma once

// Dimensioned scalars. Every value is stored in SI base units (m, m^2);
// millimetre/nanometre views exist only for reporting.

#include <chrono>
#include <cmath>
#include <compare>
#include <complex>
#include <numbers>

namespace popper {

/// Reduced Planck constant, J s (exact in the 2019 SI).
inline constexpr double kHbar = 6.62607015e-34 / (2.0 * std::numbers::pi);

using Seconds = std::chrono::duration<double>;

class Area;

class Length {
 public:
  constexpr Length() = default;
  constexpr explicit Length(double meters) : m_(meters) {}

  constexpr double m() const { return m_; }
  constexpr double mm() const { return m_ * 1e3; }
  constexpr double nm() const { return m_ * 1e9; }

  constexpr Length operator-() const { return Length(-m_); }
  constexpr Length& operator+=(Length o) { m_ += o.m_; return *this; }
  constexpr Length& operator-=(Length o) { m_ -= o.m_; return *this; }

  friend constexpr Length operator+(Length a, Length b) { return Length(a.m_ + b.m_); }
  friend constexpr Length operator-(Length a, Length b) { return Length(a.m_ - b.m_); }
  friend constexpr Length operator*(double s, Length a) { return Length(s * a.m_); }
  friend constexpr Length operator*(Length a, double s) { return Length(a.m_ * s); }
  friend constexpr Length operator/(Length a, double s) { return Length(a.m_ / s); }
  friend constexpr double operator/(Length a, Length b) { return a.m_ / b.m_; }
  friend constexpr Area operator*(Length a, Length b);

  friend constexpr auto operator<=>(Length, Length) = default;

 private:
  double m_ = 0.0;
};

class Area {
 public:
  constexpr Area() = default;
  constexpr explicit Area(double square_meters) : m2_(square_meters) {}

  constexpr double m2() const { return m2_; }
  constexpr double mm2() const { return m2_ * 1e6; }

  friend constexpr Area operator+(Area a, Area b) { return Area(a.m2_ + b.m2_); }
  friend constexpr Area operator-(Area a, Area b) { return Area(a.m2_ - b.m2_); }
  friend constexpr Area operator*(double s, Area a) { return Area(s * a.m2_); }
  friend constexpr Area operator*(Area a, double s) { return Area(a.m2_ * s); }
  friend constexpr Area operator/(Area a, double s) { return Area(a.m2_ / s); }
  friend constexpr double operator/(Area a, Area b) { return a.m2_ / b.m2_; }

  friend constexpr auto operator<=>(Area, Area) = default;

 private:
  double m2_ = 0.0;
};

constexpr Area operator*(Length a, Length b) { return Area(a.m_ * b.m_); }

inline Length sqrt(Area a) { return Length(std::sqrt(a.m2())); }

/// Complex length^2, e.g. the Gaussian parameter of exp(-y^2 / gamma).
class ComplexArea {
 public:
  constexpr ComplexArea() = default;
  constexpr explicit ComplexArea(std::complex<double> square_meters) : v_(square_meters) {}
  constexpr explicit ComplexArea(Area real) : v_(real.m2(), 0.0) {}
  constexpr ComplexArea(Area real, Area imag) : v_(real.m2(), imag.m2()) {}

  constexpr std::complex<double> value() const { return v_; }
  constexpr Area real() const { return Area(v_.real()); }
  constexpr Area imag() const { return Area(v_.imag()); }
  std::complex<double> mm2() const { return v_ * 1e6; }

  friend constexpr ComplexArea operator+(ComplexArea a, ComplexArea b) { return ComplexArea(a.v_ + b.v_); }
  friend constexpr ComplexArea operator-(ComplexArea a, ComplexArea b) { return ComplexArea(a.v_ - b.v_); }

  friend constexpr bool operator==(ComplexArea, ComplexArea) = default;

 private:
  std::complex<double> v_{};
};

/// Momentum spread expressed in units of hbar (i.e. a wavenumber, 1/m).
class Wavenumber {
 public:
  constexpr Wavenumber() = default;
  constexpr explicit Wavenumber(double per_meter) : k_(per_meter) {}

  constexpr double per_m() const { return k_; }
  constexpr double per_mm() const { return k_ * 1e-3; }
  /// Momentum in kg m/s.
  constexpr double momentum_si() const { return k_ * kHbar; }

  friend constexpr auto operator<=>(Wavenumber, Wavenumber) = default;

 private:
  double k_ = 0.0;
};

/// Unit constructors. These are the same multiplications the config parser
/// performs, so presets built here and presets read from files agree bit for bit.
namespace units {
constexpr Length meters(double v) { return Length(v); }
constexpr Length mm(double v) { return Length(v * 1e-3); }
constexpr Length um(double v) { return Length(v * 1e-6); }
constexpr Length nm(double v) { return Length(v * 1e-9); }
constexpr Area m2(double v) { return Area(v); }
constexpr Area mm2(double v) { return Area(v * 1e-6); }
constexpr Area um2(double v) { return Area(v * 1e-12); }
}  // namespace units

/// Wavelength bookkeeping shared by photons and massive particles.
///
/// Propagation is expressed throughout as a distance L scaled by the reduced
/// wavelength Lambda = lambda / pi; for a particle of mass m the elapsed time t
/// corresponds to Lambda * L = 2 hbar t / m.
class DiffractionScale {
 public:
  enum class Mode { photon, massive };

  static DiffractionScale photon(Length wavelength);
  static DiffractionScale massive(double mass_kg, double speed_m_per_s);

  Mode mode() const { return mode_; }
  Length wavelength() const { return lambda_; }
  Length reduced_wavelength() const { return Length(lambda_.m() / std::numbers::pi); }
  /// Throws InvalidMode in photon mode.
  double mass_kg() const;
  double speed() const;

  friend bool operator==(const DiffractionScale&, const DiffractionScale&) = default;

 private:
  DiffractionScale(Mode mode, Length lambda, double mass, double speed)
      : mode_(mode), lambda_(lambda), mass_(mass), speed_(speed) {}

  Mode mode_ = Mode::photon;
  Length lambda_;
  double mass_ = 0.0;
  double speed_ = 0.0;
};

/// Distance L with 2 hbar t / m = Lambda * L. Massive mode only.
Length time_to_distance(Seconds t, const DiffractionScale& scale);

}  // namespace popper
