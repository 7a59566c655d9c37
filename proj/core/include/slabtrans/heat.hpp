#pragma once

#include <functional>
#include <span>
#include <vector>

namespace slabtrans
{

/// Uniform cell-centered grid on [a, b]: x_i = a + (i + 1/2) dx, i = 0..n-1.
struct HeatGrid
{
  double a = -1.0;
  double b = 1.0;
  int cells = 0;

  HeatGrid() = default;
  HeatGrid(double a, double b, int cells);

  double dx() const { return (b - a) / cells; }
  double center(int i) const { return a + (i + 0.5) * dx(); }
  std::vector<double> centers() const;
};

/// Grid on [a, b] with spacing as close to `dx` as an integer cell count allows.
HeatGrid heat_grid_with_spacing(double a, double b, double dx);

struct HeatState
{
  double time = 0.0;
  std::vector<double> theta;
};

/// Solves the tridiagonal system with sub-, main and super-diagonals
/// (lower[0] and upper[n-1] are ignored). No pivoting.
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

/// One backward-Euler step of theta_t = lambda theta_xx. Interior cells use the
/// three-point Laplacian; the first and last cells are pinned to theta_a and
/// theta_b (values at the new time level).
HeatState heat_step(const HeatState& state, const HeatGrid& grid, double lambda, double dt,
                    double theta_a, double theta_b);

struct HeatProblem
{
  HeatGrid grid;
  double lambda = 0.0;
  std::function<double(double)> theta_a;
  std::function<double(double)> theta_b;
  std::function<double(double)> theta_0;
};

/// Marches from t = 0 to T. The step count is ceil(T / dt) with the step
/// shortened uniformly so the last level lands on T. Returns the states at
/// `output_times` (ascending, within [0, T]) followed by the final state when
/// it is not already the last requested one.
std::vector<HeatState> run_heat(const HeatProblem& problem, double T, double dt,
                                std::span<const double> output_times = {});

} // namespace slabtrans
