#include "popper/patterns.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "popper/errors.hpp"

namespace popper {

double paper_fwhm_factor() { return std::numbers::ln2; }

double exact_fwhm_factor() { return std::sqrt(2.0 * std::numbers::ln2); }

double WidthConvention::fwhm_factor() const {
  return kind == Kind::paper ? paper_fwhm_factor() : exact_fwhm_factor();
}

Length PatternStats::fwhm(const WidthConvention& conv) const {
  return conv.kind == WidthConvention::Kind::paper ? fwhm_paper : fwhm_exact;
}

PatternStats pattern_width(Area x, Length D, Length Lambda, const WidthConvention& conv) {
  if (!(x.m2() > 0.0)) throw DomainError("pattern_width needs x > 0");
  if (D.m() < 0.0) throw DomainError("pattern_width needs D >= 0");
  const double phase = Lambda.m() * D.m();
  const double diffraction = phase * phase / x.m2();
  const Length w(std::sqrt(x.m2() + conv.c * diffraction));
  const Length w_literal(std::sqrt(x.m2() + diffraction));
  return PatternStats{x, D, w, paper_fwhm_factor() * w, exact_fwhm_factor() * w_literal};
}

WidthRoots invert_width(Length fwhm_obs, Length D, Length Lambda, const WidthConvention& conv) {
  if (!(fwhm_obs.m() > 0.0)) throw DomainError("observed FWHM must be positive");
  if (D.m() < 0.0) throw DomainError("distance must be non-negative");
  const double w = fwhm_obs.m() / conv.fwhm_factor();
  const double w2 = w * w;
  const double phase = Lambda.m() * D.m();
  const double cphase2 = conv.c * phase * phase;
  const double disc = w2 * w2 - 4.0 * cphase2;
  if (disc < 0.0) {
    std::ostringstream msg;
    msg << "observed pattern (FWHM " << fwhm_obs.mm() << " mm) is narrower than the diffraction"
        << " limit for D = " << D.m() << " m: minimum Gaussian width "
        << std::sqrt(2.0 * std::sqrt(cphase2)) * 1e3 << " mm exceeds " << w * 1e3 << " mm";
    throw DiffractionLimit(msg.str());
  }
  const double large = 0.5 * (w2 + std::sqrt(disc));
  // Product of roots is c Lambda^2 D^2; avoids cancellation in the small root.
  const double small = large > 0.0 ? cphase2 / large : 0.0;
  return {Area(small), Area(large)};
}

Area fit_correlation_length(Area x, Length epsilon) {
  const Area e2 = epsilon * epsilon;
  if (x < e2) {
    std::ostringstream msg;
    msg << "x = " << x.mm2() << " mm^2 is below epsilon^2 = " << e2.mm2()
        << " mm^2; no non-negative lc^2 fits";
    throw InconsistentCalibration(msg.str());
  }
  return x - e2;
}

std::vector<SweepPoint> width_vs_slit_sweep(Length lc, Length D, Length Lambda,
                                            std::span<const Length> slit_full_widths,
                                            const WidthConvention& conv, double conversion) {
  if (lc.m() < 0.0) throw DomainError("lc must be non-negative");
  std::vector<SweepPoint> curve;
  curve.reserve(slit_full_widths.size());
  for (Length a : slit_full_widths) {
    if (!(a.m() > 0.0)) throw DomainError("slit widths must be positive");
    const Length eps = conversion * a;
    const Area x = eps * eps + lc * lc;
    curve.push_back({a, pattern_width(x, D, Lambda, conv)});
  }
  return curve;
}

std::optional<Length> sweep_minimum(Length lc, Length D, Length Lambda, const WidthConvention& conv,
                                    double conversion) {
  const double x_star = std::sqrt(conv.c) * Lambda.m() * D.m();
  const double eps2 = x_star - lc.m() * lc.m();
  if (!(eps2 > 0.0)) return std::nullopt;
  return Length(std::sqrt(eps2) / conversion);
}

std::vector<SweepPoint> detector_convolution(std::span<const SweepPoint> curve, Length detector_width,
                                             double k) {
  if (detector_width.m() < 0.0) throw DomainError("detector width must be non-negative");
  const double extra = k * detector_width.m();
  auto widen = [extra](Length f) { return Length(std::hypot(f.m(), extra)); };
  std::vector<SweepPoint> out(curve.begin(), curve.end());
  for (auto& p : out) {
    p.stats.fwhm_paper = widen(p.stats.fwhm_paper);
    p.stats.fwhm_exact = widen(p.stats.fwhm_exact);
  }
  return out;
}

}  // namespace popper
