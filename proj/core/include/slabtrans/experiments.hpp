#pragma once

#include "slabtrans/collision.hpp"
#include "slabtrans/coupled.hpp"
#include "slabtrans/halfspace.hpp"
#include "slabtrans/heat.hpp"
#include "slabtrans/kinetic.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace slabtrans
{

enum class CaseKind
{
  pure,
  coupled,
  stability
};

/// Kinetic data of one test together with the heat data stated for it.
/// eta-dependent entries use the value passed to make_case.
struct CaseSpec
{
  std::string id;
  CaseKind kind = CaseKind::pure;
  double T = 0.0;
  /// left(t, mu) at x = -1 for mu > 0, right(t, mu) at x = 1 for mu < 0, initial(x, mu)
  KineticProblem kinetic;
  std::function<double(double)> theta_a; ///< stated heat data at x = -1 (pure only)
  std::function<double(double)> theta_b; ///< stated heat data at x = 1
  std::function<double(double)> theta_i; ///< stated heat initial data
  bool compatible = true;
  double inner_lo = -0.9;
  double inner_hi = 0.9;
};

/// Known ids: pure1..pure6, coupled1..coupled3, stability.
std::vector<std::string> case_ids();
CaseSpec make_case(const std::string& id, double eta);

struct ErrorEntry
{
  std::string case_id;
  double eps = 0.0;
  double e_theta = 0.0;
  double e_f = 0.0;
  double e_theta_inner = 0.0;
  double e_f_inner = 0.0;
};

struct SlopeFit
{
  double slope = 0.0;
  double intercept = 0.0;
};

struct CaseSlopes
{
  std::string case_id;
  SlopeFit e_theta, e_f, e_theta_inner, e_f_inner;
};

struct ErrorReport
{
  std::vector<ErrorEntry> entries;  ///< sorted by (case, decreasing eps)
  std::vector<CaseSlopes> slopes;   ///< cases with at least two eps values
};

/// Least-squares fit of log E = slope log eps + intercept.
SlopeFit convergence_slope(std::span<const double> eps, std::span<const double> errors);

/// L2 distances between theta on the heat grid and the reference f (and
/// its mean), with the reference interpolated linearly onto the heat cell
/// centers. The inner variants keep cells whose centers lie in
/// [inner_lo, inner_hi]. Throws InvalidArgument if the times differ.
ErrorEntry error_norms(const KineticState& reference, const KineticGrid& reference_grid,
                       const HeatState& heat, const HeatGrid& heat_grid, double inner_lo,
                       double inner_hi);

struct PureOptions
{
  KineticOptions kinetic;
  double heat_dx = 1e-3;
  double heat_dt = 2.5e-4;
  int order = 16;
  double damping = 0.1;
  int quadrature = 0; ///< half-space Gauss points, 0: automatic
  double T = 0.03;
};

struct PureRun
{
  ErrorEntry errors;
  ReferenceRun reference;
  HeatGrid heat_grid;
  HeatState heat;
};

/// Heat data derived from the kinetic data through the half-space end state.
HeatProblem derived_heat_problem(const CaseSpec& spec, const CollisionOperator& op,
                                 const HalfSpaceSystem& system, const HeatGrid& grid);

PureRun run_pure(const CaseSpec& spec, const CollisionOperator& op, double eps,
                 const PureOptions& options = {});

/// Runs every (case, eps) pair on up to `threads` workers; results are
/// merged in a fixed order.
ErrorReport run_pure_suite(std::span<const std::string> case_ids, std::span<const double> eps,
                           const CollisionOperator& op, const PureOptions& options = {},
                           int threads = 1);

/// Fills the slopes of a report from its entries.
void fit_slopes(ErrorReport& report);

struct CoupledCaseOptions
{
  CoupledOptions coupled;
  double reference_dx = 5e-3;
  bool reference_cap_dt = true;
  double inner_lo = 0.1;
  double inner_hi = 0.9;
};

struct CoupledCaseRun
{
  ErrorEntry errors;                ///< at the final time, right subdomain
  std::vector<double> times;        ///< output times actually reached
  std::vector<double> e_theta_time; ///< E_theta at those times
  CoupledRun coupled;
  ReferenceRun reference;
};

/// Coupled approximation against the resolved two-zone kinetic reference.
CoupledCaseRun run_coupled_case(const CaseSpec& spec, const CollisionOperator& op, double eps,
                                const CoupledCaseOptions& options = {},
                                std::span<const double> output_times = {});

} // namespace slabtrans
