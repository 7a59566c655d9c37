#pragma once

#include "slabtrans/angular.hpp"
#include "slabtrans/collision.hpp"

#include <functional>
#include <span>
#include <vector>

namespace slabtrans
{

/// Scattering strength sigma(x): constant, or `left` on [a, interface) and
/// `right` on [interface, b].
struct SigmaProfile
{
  double left = 1.0;
  double right = 1.0;
  double interface = 0.0;
  bool two_zone = false;

  static SigmaProfile uniform(double value = 1.0);
  static SigmaProfile zones(double left, double right, double interface);

  double operator()(double x) const { return two_zone && x >= interface ? right : left; }
};

/// Cell-centered mesh on [a, b] times a Gauss-Legendre angular grid. Angular
/// indices 0..half-1 carry mu < 0, half..2*half-1 carry mu > 0.
struct KineticGrid
{
  double a = -1.0;
  double b = 1.0;
  int cells = 0;
  AngularGrid angles;

  KineticGrid() = default;
  KineticGrid(double a, double b, int cells, AngularGrid angles);

  double dx() const { return (b - a) / cells; }
  double center(int i) const { return a + (i + 0.5) * dx(); }
  int directions() const { return static_cast<int>(angles.size()); }
  int half() const { return directions() / 2; }
  std::vector<double> centers() const;
  /// mu_j > 0, ascending.
  std::vector<double> incoming_left_nodes() const;
  /// mu_j < 0, ascending.
  std::vector<double> incoming_right_nodes() const;
};

/// f(t, x_i, mu_j), stored direction-major: f[j * cells + i].
struct KineticState
{
  double time = 0.0;
  int cells = 0;
  int directions = 0;
  std::vector<double> f;

  double& at(int i, int j) { return f[static_cast<std::size_t>(j) * cells + i]; }
  double at(int i, int j) const { return f[static_cast<std::size_t>(j) * cells + i]; }
  std::span<double> direction(int j) { return {f.data() + static_cast<std::size_t>(j) * cells, static_cast<std::size_t>(cells)}; }
  std::span<const double> direction(int j) const { return {f.data() + static_cast<std::size_t>(j) * cells, static_cast<std::size_t>(cells)}; }
  /// Angular samples of cell i.
  std::vector<double> cell(int i) const;
};

KineticState make_kinetic_state(const KineticGrid& grid,
                                const std::function<double(double, double)>& f0, double time = 0.0);

/// <f>(x_i) for every cell.
std::vector<double> cell_means(const KineticState& state, const AngularGrid& angles);

/// Advances eps f_t + mu f_x = 0 by dt with the flux-limited Lax-Wendroff
/// scheme (van Leer limiter) per direction, two transparent ghost cells per
/// side, then overwrites the incoming boundary cells: first cell, mu > 0 with
/// `left_in` (ascending mu); last cell, mu < 0 with `right_in` (ascending mu).
/// Throws InvalidTimestep if dt max|mu| / (eps dx) exceeds `cfl`.
void advect_step(KineticState& state, const KineticGrid& grid, double eps, double dt,
                 std::span<const double> left_in, std::span<const double> right_in,
                 double cfl = 0.5);

/// f <- exp(-(sigma(x_i) dt / eps^2) L) f in every cell.
void collide_step(KineticState& state, const KineticGrid& grid, double eps, double dt,
                  const SigmaProfile& sigma, const CollisionOperator& op);

/// Advection-then-collision step with the relaxation factors precomputed
/// for a fixed (eps, dt, sigma). Reentrant.
class KineticStepper
{
public:
  KineticStepper(const KineticGrid& grid, const CollisionOperator& op, SigmaProfile sigma,
                 double eps, double dt, double cfl = 0.5);

  double dt() const { return dt_; }
  const KineticGrid& grid() const { return grid_; }

  void advect(KineticState& state, std::span<const double> left_in,
              std::span<const double> right_in) const;
  void collide(KineticState& state) const;
  /// advect + collide, then the incoming boundary cells are set again so the
  /// state at t + dt carries the prescribed data.
  void step(KineticState& state, std::span<const double> left_in,
            std::span<const double> right_in) const;

  /// Overwrites the incoming boundary samples.
  void impose(KineticState& state, std::span<const double> left_in,
              std::span<const double> right_in) const;

private:
  KineticGrid grid_;
  const CollisionOperator* op_;
  double eps_;
  double dt_;
  std::vector<double> courant_;          // per direction
  std::vector<int> cell_class_;          // index into factor tables
  std::vector<double> bulk_factor_;      // per class
  std::vector<std::vector<double>> mode_factor_; // [mode][class]
  bool single_class_ = true;
};

/// Kinetic data: incoming values at x = a (mu > 0) and x = b (mu < 0) and the
/// initial distribution.
struct KineticProblem
{
  std::function<double(double, double)> left;    // (t, mu)
  std::function<double(double, double)> right;   // (t, mu)
  std::function<double(double, double)> initial; // (x, mu)
};

struct KineticOptions
{
  double dx = 0.0;     ///< 0: min(5e-4, eps/25)
  double cfl = 0.5;
  bool cap_dt = true;  ///< dt <= eps^2
};

struct ReferenceRun
{
  KineticGrid grid;
  double dt = 0.0;
  long steps = 0;
  /// One state per requested output time (nearest step), then the final state.
  std::vector<KineticState> snapshots;
  const KineticState& final_state() const { return snapshots.back(); }
};

double reference_dx(double eps);
double reference_dt(double eps, double dx, double cfl, bool cap_dt);

/// Resolved solve of eps f_t + mu f_x + (sigma / eps) L f = 0 on [a, b] up to T.
/// The step is shortened uniformly so the run lands on T.
ReferenceRun run_reference(const KineticProblem& problem, const CollisionOperator& op,
                           double eps, const SigmaProfile& sigma, double a, double b, double T,
                           const KineticOptions& options = {},
                           std::span<const double> output_times = {});

} // namespace slabtrans
