#include "slabtrans/heat.hpp"

#include "slabtrans/errors.hpp"

#include <cmath>

namespace slabtrans
{

HeatGrid::HeatGrid(double a_, double b_, int cells_) : a(a_), b(b_), cells(cells_)
{
  if (!(b > a) || cells < 3)
    throw InvalidArgument("HeatGrid: need b > a and at least 3 cells");
}

std::vector<double>
HeatGrid::centers() const
{
  std::vector<double> x(cells);
  for (int i = 0; i < cells; ++i)
    x[i] = center(i);
  return x;
}

HeatGrid
heat_grid_with_spacing(double a, double b, double dx)
{
  if (!(dx > 0.0))
    throw InvalidArgument("heat grid spacing must be positive");
  return HeatGrid(a, b, static_cast<int>(std::lround((b - a) / dx)));
}

std::vector<double>
solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                  std::span<const double> upper, std::span<const double> rhs)
{
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n || n == 0)
    throw InvalidArgument("solve_tridiagonal: size mismatch");
  std::vector<double> c(n), d(n);
  c[0] = upper[0] / diag[0];
  d[0] = rhs[0] / diag[0];
  for (std::size_t i = 1; i < n; ++i)
  {
    const double m = diag[i] - lower[i] * c[i - 1];
    c[i] = upper[i] / m;
    d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
  }
  std::vector<double> x(n);
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

HeatState
heat_step(const HeatState& state, const HeatGrid& grid, double lambda, double dt, double theta_a,
          double theta_b)
{
  if (!(dt > 0.0))
    throw InvalidArgument("heat_step: dt must be positive");
  if (!(lambda > 0.0))
    throw InvalidArgument("heat_step: diffusion coefficient must be positive");
  const int n = grid.cells;
  if (static_cast<int>(state.theta.size()) != n)
    throw InvalidArgument("heat_step: state does not match grid");

  const double r = lambda * dt / (grid.dx() * grid.dx());
  std::vector<double> lower(n, -r), diag(n, 1.0 + 2.0 * r), upper(n, -r), rhs(state.theta);
  lower[0] = upper[0] = 0.0;
  diag[0] = 1.0;
  rhs[0] = theta_a;
  lower[n - 1] = upper[n - 1] = 0.0;
  diag[n - 1] = 1.0;
  rhs[n - 1] = theta_b;

  return HeatState{state.time + dt, solve_tridiagonal(lower, diag, upper, rhs)};
}

std::vector<HeatState>
run_heat(const HeatProblem& problem, double T, double dt, std::span<const double> output_times)
{
  if (!(T >= 0.0) || !(dt > 0.0))
    throw InvalidArgument("run_heat: need T >= 0 and dt > 0");
  const HeatGrid& grid = problem.grid;
  HeatState state;
  state.theta.resize(grid.cells);
  for (int i = 0; i < grid.cells; ++i)
    state.theta[i] = problem.theta_0(grid.center(i));

  const long steps = T > 0.0 ? static_cast<long>(std::ceil(T / dt - 1e-9)) : 0;
  const double h = steps > 0 ? T / static_cast<double>(steps) : dt;

  std::vector<HeatState> out;
  std::size_t next = 0;
  auto record = [&](long n) {
    while (next < output_times.size() && output_times[next] <= n * h + 0.5 * h)
    {
      out.push_back(state);
      ++next;
    }
  };
  record(0);
  for (long n = 1; n <= steps; ++n)
  {
    const double t = n * h;
    state = heat_step(state, grid, problem.lambda, h, problem.theta_a(t), problem.theta_b(t));
    state.time = t;
    record(n);
  }
  if (out.empty() || out.back().time != state.time)
    out.push_back(state);
  return out;
}

} // namespace slabtrans
