#include "slabtrans/angular.hpp"

#include "slabtrans/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace slabtrans
{

namespace
{

// Legendre P_n(x) and its derivative via the three-term recurrence.
void
legendre_with_derivative(int n, double x, double& p, double& dp)
{
  double p0 = 1.0;
  double p1 = x;
  if (n == 0)
  {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k)
  {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

} // namespace

AngularGrid
build_angular_grid(int n_nodes)
{
  if (n_nodes < 2)
    throw InvalidArgument("build_angular_grid: need at least 2 nodes, got " +
                          std::to_string(n_nodes));

  AngularGrid grid;
  grid.nodes.resize(n_nodes);
  grid.weights.resize(n_nodes);

  const int half = (n_nodes + 1) / 2;
  for (int i = 0; i < half; ++i)
  {
    // Tricomi initial guess for the i-th largest root, then Newton.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n_nodes + 0.5));
    double p = 0.0;
    double dp = 1.0;
    for (int it = 0; it < 100; ++it)
    {
      legendre_with_derivative(n_nodes, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    legendre_with_derivative(n_nodes, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    grid.nodes[n_nodes - 1 - i] = x;
    grid.nodes[i] = -x;
    grid.weights[n_nodes - 1 - i] = w;
    grid.weights[i] = w;
  }
  if (n_nodes % 2 == 1)
    grid.nodes[n_nodes / 2] = 0.0;
  return grid;
}

AngularGrid
gauss_legendre(int n_nodes, double lo, double hi)
{
  AngularGrid g = build_angular_grid(n_nodes);
  const double half_len = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (std::size_t i = 0; i < g.size(); ++i)
  {
    g.nodes[i] = mid + half_len * g.nodes[i];
    g.weights[i] *= half_len;
  }
  return g;
}

double
mean(const AngularGrid& grid, std::span<const double> f)
{
  if (f.size() != grid.size())
    throw InvalidArgument("mean: sample count does not match angular grid");
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j)
    s += grid.weights[j] * f[j];
  return 0.5 * s;
}

std::vector<double>
normalized_legendre(int degree, double x)
{
  std::vector<double> p(degree + 1);
  p[0] = 1.0;
  if (degree >= 1)
    p[1] = x;
  for (int k = 2; k <= degree; ++k)
    p[k] = ((2.0 * k - 1.0) * x * p[k - 1] - (k - 1.0) * p[k - 2]) / k;
  for (int k = 0; k <= degree; ++k)
    p[k] *= std::sqrt(2.0 * k + 1.0);
  return p;
}

std::vector<double>
half_range_legendre(int degree, double mu)
{
  // P_m(2 mu - 1) scaled by sqrt(2m + 1) is orthonormal on [0, 1].
  return normalized_legendre(degree, 2.0 * mu - 1.0);
}

} // namespace slabtrans
