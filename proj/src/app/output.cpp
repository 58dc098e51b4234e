#include "popper/app/output.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

namespace popper::app {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

const char* flag(bool b) { return b ? "true" : "false"; }

const char* convention_name(const WidthConvention& c) {
  return c.kind == WidthConvention::Kind::paper ? "paper" : "exact";
}

void row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

}  // namespace

std::string format_number(double v) { return fmt::format("{:.11e}", v); }

void write_simulate_csv(std::ostream& out, const SimulateReport& r) {
  const auto g = r.pipeline.packet.gamma.mm2();
  row(out, {"scenario", "conditioned", "gamma_re_mm2", "gamma_im_mm2", "x_mm2", "D_m", "W_mm",
            "fwhm_paper_mm", "fwhm_exact_mm", "beam_sigma_mm", "beam_width_mm", "packet_width_mm",
            "packet_fwhm_exact_mm", "momentum_spread_per_mm", "initial_momentum_spread_per_mm",
            "momentum_bound_ok", "pattern_within_beam_ok"});
  row(out, {csv_field(r.scenario), flag(r.pipeline.conditioned), format_number(g.real()),
            format_number(g.imag()), format_number(r.pattern.x.mm2()), format_number(r.pattern.D.m()),
            format_number(r.pattern.W.mm()), format_number(r.pattern.fwhm_paper.mm()),
            format_number(r.pattern.fwhm_exact.mm()), format_number(r.beam_sigma.mm()),
            format_number(r.beam_width.mm()), format_number(r.packet_width.mm()),
            format_number(r.packet_fwhm_exact.mm()), format_number(r.conditioned_momentum.per_mm()),
            format_number(r.initial_momentum.per_mm()), flag(r.momentum_bound_ok),
            flag(r.pattern_within_beam_ok)});
}

void write_simulate_table(std::ostream& out, const SimulateReport& r) {
  const auto g = r.pipeline.packet.gamma.mm2();
  fmt::print(out, "scenario            {}\n", r.scenario);
  fmt::print(out, "sha256              {}\n", r.hash);
  fmt::print(out, "slit A              {}\n", r.pipeline.conditioned ? "conditioning" : "wide open");
  fmt::print(out, "gamma at detector   {:.6g} {:+.6g}i mm^2\n", g.real(), g.imag());
  fmt::print(out, "x                   {:.6g} mm^2\n", r.pattern.x.mm2());
  fmt::print(out, "D                   {:.6g} m\n", r.pattern.D.m());
  fmt::print(out, "pattern W           {:.6g} mm\n", r.pattern.W.mm());
  fmt::print(out, "FWHM (ln2 W)        {:.6g} mm\n", r.pattern.fwhm_paper.mm());
  fmt::print(out, "FWHM (exact)        {:.6g} mm\n", r.pattern.fwhm_exact.mm());
  fmt::print(out, "packet width        {:.6g} mm\n", r.packet_width.mm());
  fmt::print(out, "beam width          {:.6g} mm (sigma {:.6g} mm)\n", r.beam_width.mm(), r.beam_sigma.mm());
  fmt::print(out, "momentum spread     {:.6g} / mm (source {:.6g} / mm)  {}\n",
             r.conditioned_momentum.per_mm(), r.initial_momentum.per_mm(),
             r.momentum_bound_ok ? "ok" : "VIOLATED");
  fmt::print(out, "pattern <= beam     {}\n", r.pattern_within_beam_ok ? "ok" : "VIOLATED");
  for (const auto& f : r.fits) {
    if (const auto* rep = std::get_if<FitReport>(&f.outcome)) {
      fmt::print(out, "fit [{}]         x = {:.6g} mm^2, lc^2 = {:.6g} mm^2\n", convention_name(f.convention),
                 rep->selected_x.mm2(), rep->lc_squared.mm2());
    } else {
      fmt::print(out, "fit [{}]         failed: {}\n", convention_name(f.convention),
                 std::get<std::string>(f.outcome));
    }
  }
}

void write_fit_csv(std::ostream& out, const FitReport& r) {
  row(out, {"convention", "observed_fwhm_mm", "epsilon_mm", "D_m", "x_small_mm2", "x_large_mm2",
            "double_root", "selected_x_mm2", "lc_squared_mm2", "residual_mm"});
  row(out, {convention_name(r.convention), format_number(r.observed_fwhm.mm()),
            format_number(r.epsilon.mm()), format_number(r.D.m()), format_number(r.roots.x_small.mm2()),
            format_number(r.roots.x_large.mm2()), flag(r.double_root), format_number(r.selected_x.mm2()),
            format_number(r.lc_squared.mm2()), format_number(r.residual.mm())});
}

void write_fit_table(std::ostream& out, const FitReport& r) {
  fmt::print(out, "convention          {}\n", convention_name(r.convention));
  fmt::print(out, "observed FWHM       {:.6g} mm\n", r.observed_fwhm.mm());
  fmt::print(out, "D                   {:.6g} m\n", r.D.m());
  fmt::print(out, "roots x             {:.6g}, {:.6g} mm^2{}\n", r.roots.x_small.mm2(),
             r.roots.x_large.mm2(), r.double_root ? " (double root)" : "");
  fmt::print(out, "selected x          {:.6g} mm^2 (sqrt {:.6g} mm)\n", r.selected_x.mm2(),
             std::sqrt(r.selected_x.mm2()));
  fmt::print(out, "epsilon             {:.6g} mm\n", r.epsilon.mm());
  fmt::print(out, "lc^2                {:.6g} mm^2\n", r.lc_squared.mm2());
  fmt::print(out, "residual            {:.3g} mm\n", r.residual.mm());
}

void write_sweep_csv(std::ostream& out, const SweepReport& r) {
  row(out, {"slit_full_width_mm", "fwhm_paper_mm", "fwhm_exact_mm", "x_mm2"});
  for (const auto& p : r.points) {
    row(out, {format_number(p.slit_full_width.mm()), format_number(p.stats.fwhm_paper.mm()),
              format_number(p.stats.fwhm_exact.mm()), format_number(p.stats.x.mm2())});
  }
}

void write_sweep_table(std::ostream& out, const SweepReport& r) {
  fmt::print(out, "scenario {}: lc = {:.6g} mm, D = {:.6g} m, conversion {:.6g}, convention {}\n", r.scenario,
             r.lc.mm(), r.D.m(), r.conversion, convention_name(r.convention));
  if (r.detector_width) fmt::print(out, "detector convolution {:.6g} mm\n", r.detector_width->mm());
  if (r.minimum) {
    fmt::print(out, "narrowest pattern at slit width {:.6g} mm\n", r.minimum->mm());
  } else {
    fmt::print(out, "no interior minimum (lc^2 exceeds the optimum x)\n");
  }
  fmt::print(out, "{:>14} {:>14} {:>14}\n", "width [mm]", "FWHM ln2 [mm]", "FWHM exact [mm]");
  for (const auto& p : r.points) {
    fmt::print(out, "{:>14.6g} {:>14.6g} {:>14.6g}\n", p.slit_full_width.mm(), p.stats.fwhm_paper.mm(),
               p.stats.fwhm_exact.mm());
  }
}

void write_oracle_csv(std::ostream& out, const std::vector<OracleRun>& runs) {
  row(out, {"suite", "quantity", "unit", "analytic", "numeric", "rel_err", "tolerance", "n", "extent_m",
            "converged", "passed", "note"});
  for (const auto& run : runs) {
    const auto& q = run.report;
    row(out, {run.suite, csv_field(q.quantity), csv_field(q.unit), format_number(q.analytic),
              format_number(q.numeric), format_number(q.rel_err), format_number(q.tolerance),
              std::to_string(q.n), format_number(q.extent.m()), flag(q.converged), flag(q.passed()),
              csv_field(q.note)});
  }
}

void write_oracle_table(std::ostream& out, const std::vector<OracleRun>& runs) {
  std::size_t passed = 0;
  for (const auto& run : runs) {
    const auto& q = run.report;
    if (q.passed()) ++passed;
    fmt::print(out, "{:4} {:<22} {:<40} rel_err {:9.2e} (tol {:7.1e}) n={:<7}{}{}\n",
               q.passed() ? "PASS" : "FAIL", run.suite, q.quantity, q.rel_err, q.tolerance, q.n,
               q.converged ? "" : " unconverged", q.note.empty() ? "" : "  [" + q.note + "]");
  }
  fmt::print(out, "{}/{} reports passed\n", passed, runs.size());
}

void write_oracle_json(std::ostream& out, const std::vector<OracleRun>& runs) {
  auto doc = nlohmann::ordered_json::array();
  for (const auto& run : runs) {
    const auto& q = run.report;
    doc.push_back({{"suite", run.suite},
                   {"quantity", q.quantity},
                   {"unit", q.unit},
                   {"analytic", q.analytic},
                   {"numeric", q.numeric},
                   {"rel_err", q.rel_err},
                   {"tolerance", q.tolerance},
                   {"n", q.n},
                   {"extent_m", q.extent.m()},
                   {"converged", q.converged},
                   {"passed", q.passed()},
                   {"note", q.note}});
  }
  out << doc.dump(2) << '\n';
}

}  // namespace popper::app
