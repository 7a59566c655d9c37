#pragma once

#include "slabtrans_app/config.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace slabtrans::app
{

inline constexpr const char* csv_schema = "# slabtrans-csv v1";

/// Scientific notation with 12 significant digits.
std::string format_number(double v);

/// Header comment, column row and rows; every value must be finite.
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows);

/// Runs every (case, eps) pair of the configuration and writes the artifacts
/// under config.out_dir. Returns 0 when every run succeeded, 1 otherwise
/// (failures are listed in failures.csv and on `log`).
int run(const RunConfig& config, std::ostream& log);

} // namespace slabtrans::app
