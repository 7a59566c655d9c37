#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace slabtrans::app
{

/// Raised for malformed or out-of-range configuration; the message carries
/// the file and line, or the flag, that caused it.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct Epsilon
{
  double value = 0.0;
  std::string label; ///< filename-safe, e.g. "1-32"
};

/// Parses "1/32", "0.03125" or "3.125e-2". Throws ConfigError outside (0, 1).
Epsilon parse_epsilon(const std::string& text, const std::string& context);

struct RunConfig
{
  std::vector<std::string> cases;
  std::vector<Epsilon> eps;
  std::string out_dir = "results";
  bool plots = false;
  int threads = 1;
  unsigned long seed = 0;

  std::string kernel = "paper";
  std::vector<double> kernel_coefficients;

  int halfspace_order = 16;
  double halfspace_alpha = 0.1;
  int halfspace_quadrature = 0; ///< 0: max(2N + 8, 32)

  double heat_dx = 1e-3;
  double heat_dt = 2.5e-4;

  int n_mu = 32;
  double kinetic_dx = 0.0; ///< 0: min(5e-4, eps / 25)
  double kinetic_cfl = 0.5;
  bool kinetic_dt_cap = true;

  double coupled_xm = 0.0;
  double coupled_dx = 5e-3;
  double coupled_cfl = 0.5;
  double coupled_reference_dx = 5e-3;
};

/// Defaults: every case, eps in {1/32, 1/64, 1/128, 1/256}.
RunConfig default_config();

/// Parses the sectioned key = value format (see README). `origin` names the
/// source in error messages.
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
RunConfig parse_config_file(const std::string& path);

/// Splits a comma-separated list, trimming blanks.
std::vector<std::string> split_list(const std::string& text);

/// Applies command-line style overrides ("pure1,pure2", "1/32,1/64").
void set_cases(RunConfig& config, const std::string& list, const std::string& context);
void set_eps(RunConfig& config, const std::string& list, const std::string& context);

/// Checks cross-field consistency; throws ConfigError.
void validate(const RunConfig& config);

} // namespace slabtrans::app
