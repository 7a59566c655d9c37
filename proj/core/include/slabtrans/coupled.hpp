#pragma once

#include "slabtrans/collision.hpp"
#include "slabtrans/halfspace.hpp"
#include "slabtrans/heat.hpp"
#include "slabtrans/kinetic.hpp"

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace slabtrans
{

struct CoupledOptions
{
  double a = -1.0;
  double interface = 0.0;
  double b = 1.0;
  double dx = 5e-3;      ///< kinetic mesh on [a, interface]
  double heat_dx = 1e-3; ///< heat mesh on [interface, b]
  double cfl = 0.5;
  int order = 16;        ///< half-space N
  double damping = 0.1;
  int quadrature = 0;    ///< half-space Gauss points, 0: automatic
};

struct CoupledProblem
{
  /// left(t, mu) at x = a, right(t, mu) at x = b, initial(x, mu)
  KineticProblem kinetic;
  /// theta_i(x) on the heat side; defaults to <initial>(x) when empty.
  std::function<double(double)> heat_initial;
};

struct CoupledState
{
  KineticState kinetic;
  HeatState heat;
  double theta_m = 0.0;
  double time = 0.0;
};

/// Kinetic solve on [a, x_m] closed by the Albedo operator at x_m, heat solve
/// on [x_m, b] with Dirichlet data theta_m and the end state of the right
/// boundary data. Both parts advance with the same step dt = cfl eps dx.
class CoupledSolver
{
public:
  CoupledSolver(CoupledProblem problem, const CollisionOperator& op, double eps, double T,
                const CoupledOptions& options = {});

  const KineticGrid& kinetic_grid() const { return kinetic_grid_; }
  const HeatGrid& heat_grid() const { return heat_grid_; }
  const HalfSpaceSystem& halfspace() const { return *system_; }
  const AlbedoMap& albedo() const { return albedo_; }
  double dt() const { return dt_; }
  long steps() const { return steps_; }

  CoupledState initial_state() const;
  void step(CoupledState& state) const;

  /// End state of the incoming data at x = b at time t.
  double theta_b(double t) const;

  /// Outgoing samples at the interface (last kinetic cell, mu > 0).
  std::vector<double> interface_incoming(const KineticState& state) const;

private:
  void close_interface(KineticState& state, double& theta_m) const;

  CoupledProblem problem_;
  const CollisionOperator* op_;
  double eps_;
  CoupledOptions options_;
  KineticGrid kinetic_grid_;
  HeatGrid heat_grid_;
  double dt_ = 0.0;
  long steps_ = 0;
  std::unique_ptr<HalfSpaceSystem> system_;
  AlbedoMap albedo_;
  std::unique_ptr<KineticStepper> stepper_;
  std::vector<double> left_nodes_;
};

struct CoupledRun
{
  KineticGrid kinetic_grid;
  HeatGrid heat_grid;
  double dt = 0.0;
  long steps = 0;
  /// States at the requested output times (nearest step), then the final state.
  std::vector<CoupledState> snapshots;
  std::vector<double> theta_m_times;
  std::vector<double> theta_m;
  const CoupledState& final_state() const { return snapshots.back(); }
};

CoupledRun run_coupled(const CoupledProblem& problem, const CollisionOperator& op, double eps,
                       double T, const CoupledOptions& options = {},
                       std::span<const double> output_times = {});

/// p(s) = 1 / (1 + sqrt(s)).
double stability_perturbation(double s);

struct StabilityRun
{
  KineticGrid grid;
  double dt = 0.0;
  long steps = 0;
  std::vector<double> times;     ///< recorded times, t = 0 first
  std::vector<double> deviation; ///< L2_{x,mu} norm of f at those times
  double max_deviation = 0.0;    ///< over every step in (0, T]
  std::vector<KineticState> snapshots;
};

/// eps f_t + mu f_x + L f = 0 on [a, interface], zero initial and left data,
/// right data R(f(t, interface, mu > 0)) + p(t / eps^2).
StabilityRun run_stability(const CollisionOperator& op, double eps, double T,
                           const CoupledOptions& options = {},
                           std::span<const double> output_times = {}, int samples = 400);

/// L2 norm over x and mu, with the (1/2)-weighted angular measure.
double kinetic_l2_norm(const KineticState& state, const KineticGrid& grid);

/// <g> for analytic g, by Gauss rules on [-1, 0] and [0, 1] (exact for
/// data that are polynomial in |mu|).
double angular_mean(const std::function<double(double)>& g);

} // namespace slabtrans
