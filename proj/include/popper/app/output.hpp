#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "popper/app/commands.hpp"

namespace popper::app {

/// Every CSV has a header row with units in the column names and prints
/// numbers as 12-significant-digit scientific values.
std::string format_number(double v);

void write_simulate_csv(std::ostream& out, const SimulateReport& r);
void write_simulate_table(std::ostream& out, const SimulateReport& r);

void write_fit_csv(std::ostream& out, const FitReport& r);
void write_fit_table(std::ostream& out, const FitReport& r);

void write_sweep_csv(std::ostream& out, const SweepReport& r);
void write_sweep_table(std::ostream& out, const SweepReport& r);

void write_oracle_csv(std::ostream& out, const std::vector<OracleRun>& runs);
void write_oracle_table(std::ostream& out, const std::vector<OracleRun>& runs);
void write_oracle_json(std::ostream& out, const std::vector<OracleRun>& runs);

}  // namespace popper::app
