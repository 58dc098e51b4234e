#include "popper/optics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "popper/errors.hpp"

namespace popper {

namespace {

using cd = std::complex<double>;

// Relative slack under which a negative lens discriminant is rounding noise.
constexpr double kDegenerateSlack = 1e-12;

double reduced(const DiffractionScale& scale) { return scale.reduced_wavelength().m(); }

// Shared conditioning algebra: slit parameter s, relative width lc^2,
// centre-of-mass omega^2 (possibly infinite).
cd condition_gamma(cd s, double lc2, double om2) {
  const double rel = lc2 / (1.0 + lc2 / (4.0 * om2));
  const double com = om2 + lc2 / 4.0;
  return (s + rel) / (1.0 + s / com);
}

cd open_slit_gamma(double lc2, double om2) {
  if (!std::isfinite(om2)) {
    throw InvalidPacket("open slit with unbounded omega leaves particle 2 unnormalizable");
  }
  return cd(om2 + lc2 / 4.0, 0.0);
}

struct LensRoots {
  double larger;
  double smaller;
};

LensRoots continuity_roots(double width_sq, double image_phase, double L_m, double f_m) {
  double disc = width_sq * width_sq - 4.0 * image_phase * image_phase;
  if (disc < 0.0 && disc > -kDegenerateSlack * width_sq * width_sq) disc = 0.0;
  if (disc < 0.0) {
    std::ostringstream msg;
    msg << "lens has no real output waist: W^2 = " << width_sq << " m^2, Lambda*(L-4f) = "
        << image_phase << " m^2 (L = " << L_m << " m, f = " << f_m
        << " m); discriminant " << disc;
    throw NoRealWaist(msg.str());
  }
  const double larger = 0.5 * (width_sq + std::sqrt(disc));
  return {larger, image_phase * image_phase / larger};
}

}  // namespace

SlitSpec SlitSpec::gaussian(Length epsilon) {
  SlitSpec s{epsilon, std::nullopt, 1.0};
  validate(s);
  return s;
}

SlitSpec SlitSpec::from_rect(Length full_width, double conversion) {
  SlitSpec s{conversion * full_width, full_width, conversion};
  validate(s);
  return s;
}

SlitSpec SlitSpec::open() {
  return SlitSpec{Length(std::numeric_limits<double>::infinity()), std::nullopt, 1.0};
}

void validate(const SlitSpec& slit) {
  if (!(slit.epsilon.m() > 0.0)) throw DomainError("slit epsilon must be positive");
  if (slit.rect_full_width) {
    if (!(slit.rect_full_width->m() > 0.0) || !(slit.conversion > 0.0)) {
      throw DomainError("rectangular slit width and conversion must be positive");
    }
    if (slit.epsilon != slit.conversion * *slit.rect_full_width) {
      throw DomainError("slit epsilon disagrees with conversion * rectangular width");
    }
  }
}

GaussianPacket slit_packet(const SlitSpec& slit) {
  validate(slit);
  if (slit.is_open()) throw InvalidPacket("an open slit has no localized state");
  const Area e2 = slit.epsilon * slit.epsilon;
  return make_packet(ComplexArea(e2), e2);
}

GaussianPacket condition_on_slit(const PairState& pair, const SlitSpec& slit) {
  validate(slit);
  const double lc2 = pair.d_rel.value().real();
  const double om2 = pair.d_com.value().real();
  const double phase = 0.5 * pair.d_rel.value().imag();  // Lambda * L1

  if (slit.is_open()) {
    const cd g = open_slit_gamma(lc2, om2) + cd(0.0, phase);
    return make_packet(ComplexArea(g), Area(g.real()));
  }
  const double e2 = slit.epsilon.m() * slit.epsilon.m();
  const cd s(e2, phase);
  const cd g = condition_gamma(s, lc2, om2) + cd(0.0, phase);
  return make_packet(ComplexArea(g), Area(e2 + lc2));
}

GaussianPacket condition_at_source(const SourceSpec& src, std::complex<double> s) {
  validate(src);
  if (!(s.real() > 0.0)) throw InvalidPacket("slit parameter must have positive real part");
  const double lc2 = src.lc.m() * src.lc.m();
  const double om2 = src.omega.m() * src.omega.m();
  return make_packet(ComplexArea(condition_gamma(s, lc2, om2)), Area(s.real() + lc2));
}

GaussianPacket free_propagate(const GaussianPacket& p, Length L, const DiffractionScale& scale) {
  if (L.m() < 0.0) throw DomainError("negative propagation distance");
  GaussianPacket out = p;
  out.gamma = p.gamma + ComplexArea(cd(0.0, reduced(scale) * L.m()));
  return out;
}

GaussianPacket free_propagate_for(const GaussianPacket& p, Seconds t, const DiffractionScale& scale) {
  if (t.count() < 0.0) throw DomainError("negative propagation time");
  GaussianPacket out = p;
  out.gamma = p.gamma + ComplexArea(cd(0.0, 2.0 * kHbar * t.count() / scale.mass_kg()));
  return out;
}

GaussianPacket lens_transform(const GaussianPacket& p, Length f, const DiffractionScale& scale,
                              LensRoot root) {
  if (!(f.m() > 0.0)) throw DomainError("focal length must be positive");
  require_normalizable(p.gamma);
  const cd g = p.gamma.value();
  const double lam = reduced(scale);
  const double L = g.imag() / lam;
  const double image_phase = lam * (L - 4.0 * f.m());
  const double width_sq = std::norm(g) / g.real();  // sigma0^2 + Lambda^2 L^2 / sigma0^2

  const auto roots = continuity_roots(width_sq, image_phase, L, f.m());
  const double hint = p.waist_hint.m2() > 0.0 ? p.waist_hint.m2() : g.real();
  const bool larger_nearer = std::abs(roots.larger - hint) <= std::abs(roots.smaller - hint);
  const bool take_larger = (root == LensRoot::nearest_waist) == larger_nearer;
  const double waist = take_larger ? roots.larger : roots.smaller;
  if (!(waist > 0.0)) {
    throw NoRealWaist("lens output waist collapses to zero (packet waist sits at 4f)");
  }
  return make_packet(ComplexArea(cd(waist, image_phase)), Area(waist), p.norm);
}

GaussianPacket lens_inverse(const GaussianPacket& p, Length f, const DiffractionScale& scale) {
  if (!(f.m() > 0.0)) throw DomainError("focal length must be positive");
  require_normalizable(p.gamma);
  const cd g = p.gamma.value();
  const double lam = reduced(scale);
  const double L = g.imag() / lam + 4.0 * f.m();
  const double width_sq = std::norm(g) / g.real();
  const auto roots = continuity_roots(width_sq, lam * L, L, f.m());

  std::vector<GaussianPacket> matches;
  for (double c : {roots.larger, roots.smaller}) {
    if (!(c > 0.0)) continue;
    const auto candidate = make_packet(ComplexArea(cd(c, lam * L)), Area(c), p.norm);
    try {
      const auto forward = lens_transform(candidate, f, scale);
      if (std::abs(forward.gamma.value().real() - g.real()) <= 1e-9 * g.real()) {
        matches.push_back(candidate);
      }
    } catch (const NoRealWaist&) {
    }
  }
  if (matches.empty()) throw NoRealWaist("packet is not the image of any Gaussian under this lens");
  const auto nearest = std::min_element(matches.begin(), matches.end(), [&](const auto& a, const auto& b) {
    return std::abs(a.gamma.value().real() - g.real()) < std::abs(b.gamma.value().real() - g.real());
  });
  return *nearest;
}

namespace {

struct ArmLayout {
  std::vector<OpticalElement> before_slit;
  SlitSpec slit;
};

ArmLayout check_arm1(std::span<const OpticalElement> arm1) {
  ArmLayout layout;
  int slits = 0;
  for (const auto& e : arm1) {
    if (const auto* s = std::get_if<Slit>(&e)) {
      ++slits;
      layout.slit = s->spec;
      continue;
    }
    if (slits == 0) {
      if (std::holds_alternative<Detector>(e)) {
        throw PipelineError("arm 1 has a detector in front of slit A");
      }
      layout.before_slit.push_back(e);
    } else if (std::holds_alternative<Lens>(e)) {
      throw PipelineError("a lens behind slit A is not supported");
    }
  }
  if (slits != 1) {
    throw PipelineError("arm 1 must contain exactly one slit (found " + std::to_string(slits) + ")");
  }
  validate(layout.slit);
  return layout;
}

void check_arm2(std::span<const OpticalElement> arm2) {
  for (const auto& e : arm2) {
    if (std::holds_alternative<Slit>(e)) throw PipelineError("arm 2 must not contain a slit (slit B open)");
    if (std::holds_alternative<Lens>(e)) throw PipelineError("a lens in arm 2 is not supported");
  }
  if (arm2.empty() || !std::holds_alternative<Detector>(arm2.back())) {
    throw PipelineError("arm 2 must end at a detector");
  }
}

}  // namespace

PipelineResult run_pipeline(const SourceSpec& src, std::span<const OpticalElement> arm1,
                            std::span<const OpticalElement> arm2) {
  validate(src);
  const auto layout = check_arm1(arm1);
  check_arm2(arm2);
  const double lam = reduced(src.scale);

  PipelineResult result;
  if (layout.slit.is_open()) {
    const double lc2 = src.lc.m() * src.lc.m();
    const double om2 = src.omega.m() * src.omega.m();
    const cd g = open_slit_gamma(lc2, om2);
    result.at_source = make_packet(ComplexArea(g), Area(g.real()));
    result.conditioned = false;
  } else {
    // Carry the slit state back to the source: U^dagger for each element.
    GaussianPacket back = slit_packet(layout.slit);
    for (auto it = layout.before_slit.rbegin(); it != layout.before_slit.rend(); ++it) {
      if (const auto* free = std::get_if<FreeSpace>(&*it)) {
        if (free->distance.m() < 0.0) throw DomainError("negative propagation distance");
        back.gamma = back.gamma - ComplexArea(cd(0.0, lam * free->distance.m()));
      } else if (const auto* lens = std::get_if<Lens>(&*it)) {
        back = lens_inverse(back, lens->focal_length, src.scale);
      }
    }
    result.at_source = condition_at_source(src, std::conj(back.gamma.value()));
  }

  GaussianPacket packet = result.at_source;
  Length travelled(0.0);
  for (const auto& e : arm2) {
    if (const auto* free = std::get_if<FreeSpace>(&e)) {
      packet = free_propagate(packet, free->distance, src.scale);
      travelled += free->distance;
    }
  }
  result.packet = packet;
  result.arm2_distance = travelled;
  return result;
}

}  // namespace popper
