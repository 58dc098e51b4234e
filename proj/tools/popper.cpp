// Command-line front end: simulate, fit, sweep, oracle.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "popper/app/commands.hpp"
#include "popper/app/output.hpp"
#include "popper/app/presets.hpp"
#include "popper/errors.hpp"

namespace {

using namespace popper;
using namespace popper::app;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitConfig = 2;
constexpr int kExitOracle = 3;

WidthConvention convention_from(const std::string& name) {
  return name == "exact" ? WidthConvention::exact() : WidthConvention::paper();
}

template <class Writer>
void emit_csv(const std::string& path, bool to_stdout, Writer write) {
  if (!path.empty()) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("output", "cannot open '" + path + "' for writing");
    write(out);
    if (!out) throw ConfigError("output", "failed writing '" + path + "'");
  }
  if (to_stdout) write(std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Conditioned Gaussian wave packets for two-slit correlation experiments"};
  cli.require_subcommand(1);

  std::string scenario_ref;
  std::string csv_path;
  bool csv_stdout = false;
  std::string convention = "paper";

  auto* simulate = cli.add_subcommand("simulate", "Run the conditioning pipeline for a scenario or preset");
  simulate->add_option("scenario", scenario_ref, "Scenario file or preset name")->required();
  simulate->add_option("-o,--output", csv_path, "Write CSV to this file");
  simulate->add_flag("--csv", csv_stdout, "Print CSV instead of the summary table");

  double fwhm_mm = 0.0;
  auto* fit = cli.add_subcommand("fit", "Infer lc^2 from an observed pattern FWHM");
  fit->add_option("scenario", scenario_ref, "Scenario file or preset name")->required();
  fit->add_option("--fwhm", fwhm_mm, "Observed FWHM in mm")->required();
  fit->add_option("--convention", convention, "FWHM convention")->check(CLI::IsMember({"paper", "exact"}));
  fit->add_option("-o,--output", csv_path, "Write CSV to this file");
  fit->add_flag("--csv", csv_stdout, "Print CSV instead of the summary table");

  std::string widths_spec;
  std::optional<double> detector_mm;
  auto* sweep = cli.add_subcommand("sweep", "Pattern FWHM against slit width");
  sweep->add_option("scenario", scenario_ref, "Scenario file or preset name")->required();
  sweep->add_option("--widths", widths_spec, "Slit full widths in mm: start:stop:step or a,b,c")->required();
  sweep->add_option("--detector-mm", detector_mm, "Detector width in mm (quadrature widening)");
  sweep->add_option("--convention", convention, "FWHM convention")->check(CLI::IsMember({"paper", "exact"}));
  sweep->add_option("-o,--output", csv_path, "Write CSV to this file");
  sweep->add_flag("--csv", csv_stdout, "Print CSV instead of the summary table");

  std::vector<std::string> suites;
  bool strict = false;
  std::optional<std::size_t> grid_n;
  std::string json_path;
  auto* oracle_cmd = cli.add_subcommand("oracle", "Check closed forms against brute-force numerics");
  oracle_cmd->add_option("--suite", suites, "Suite name (repeatable; default all)");
  oracle_cmd->add_flag("--strict", strict, "Use the base grid only; no automatic refinement");
  oracle_cmd->add_option("--n", grid_n, "Base samples per axis (power of two, >= 64)");
  oracle_cmd->add_option("--json", json_path, "Write the reports as JSON to this file");
  oracle_cmd->add_option("-o,--output", csv_path, "Write CSV to this file");
  oracle_cmd->add_flag("--csv", csv_stdout, "Print CSV instead of the summary table");
  oracle_cmd->add_flag_callback("--list", [] {
    for (const auto& n : oracle::suite_names()) std::cout << n << '\n';
    std::exit(kExitOk);
  }, "List suite names");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate->parsed()) {
      const auto report = cmd_simulate(resolve_scenario(scenario_ref));
      emit_csv(csv_path, csv_stdout, [&](std::ostream& o) { write_simulate_csv(o, report); });
      if (!csv_stdout) write_simulate_table(std::cout, report);
      return kExitOk;
    }
    if (fit->parsed()) {
      const auto report = cmd_fit(resolve_scenario(scenario_ref), units::mm(fwhm_mm), convention_from(convention));
      emit_csv(csv_path, csv_stdout, [&](std::ostream& o) { write_fit_csv(o, report); });
      if (!csv_stdout) write_fit_table(std::cout, report);
      return kExitOk;
    }
    if (sweep->parsed()) {
      const auto widths = parse_width_list(widths_spec);
      std::optional<Length> detector;
      if (detector_mm) detector = units::mm(*detector_mm);
      const auto report = cmd_sweep(resolve_scenario(scenario_ref), widths, detector, convention_from(convention));
      emit_csv(csv_path, csv_stdout, [&](std::ostream& o) { write_sweep_csv(o, report); });
      if (!csv_stdout) write_sweep_table(std::cout, report);
      return kExitOk;
    }
    if (oracle_cmd->parsed()) {
      oracle::SuiteOptions options;
      options.strict = strict;
      options.base_n = grid_n;
      const auto runs = cmd_oracle(suites, options);
      emit_csv(csv_path, csv_stdout, [&](std::ostream& o) { write_oracle_csv(o, runs); });
      if (!json_path.empty()) {
        std::ofstream out(json_path, std::ios::binary);
        if (!out) throw ConfigError("json", "cannot open '" + json_path + "' for writing");
        write_oracle_json(out, runs);
      }
      if (!csv_stdout) write_oracle_table(std::cout, runs);
      return all_passed(runs) ? kExitOk : kExitOracle;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const GridError& e) {
    std::cerr << "grid error: " << e.what() << '\n';
    return kExitOracle;
  }
  return kExitConfig;
}
