#include "slabtrans/errors.hpp"
#include "slabtrans/heat.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace slabtrans;

TEST(HeatGrid, GeometryAndValidation)
{
  const HeatGrid g(-1.0, 1.0, 2000);
  EXPECT_DOUBLE_EQ(g.dx(), 1e-3);
  EXPECT_NEAR(g.center(0), -1.0 + 5e-4, 1e-15);
  EXPECT_EQ(g.centers().size(), 2000u);
  EXPECT_EQ(heat_grid_with_spacing(0.0, 1.0, 1e-3).cells, 1000);
  EXPECT_THROW(HeatGrid(0.0, 1.0, 2), InvalidArgument);
}

TEST(Tridiagonal, SolvesAndLeavesSmallResidual)
{
  const int n = 50;
  std::vector<double> lo(n), di(n), up(n), rhs(n);
  for (int i = 0; i < n; ++i)
  {
    lo[i] = -1.0 - 0.01 * i;
    up[i] = -0.5;
    di[i] = 4.0 + std::sin(i);
    rhs[i] = std::cos(0.3 * i);
  }
  const auto x = solve_tridiagonal(lo, di, up, rhs);
  for (int i = 0; i < n; ++i)
  {
    double r = di[i] * x[i] - rhs[i];
    if (i > 0)
      r += lo[i] * x[i - 1];
    if (i + 1 < n)
      r += up[i] * x[i + 1];
    EXPECT_NEAR(r, 0.0, 1e-13);
  }
}

TEST(HeatStep, ConstantIsFixedPoint)
{
  const HeatGrid g(-1.0, 1.0, 40);
  HeatState s{0.0, std::vector<double>(40, 0.7)};
  for (int k = 0; k < 10; ++k)
    s = heat_step(s, g, 0.4, 1e-2, 0.7, 0.7);
  for (double v : s.theta)
    EXPECT_NEAR(v, 0.7, 1e-14);
  EXPECT_NEAR(s.time, 0.1, 1e-15);
}

TEST(HeatStep, LinearProfileIsSteady)
{
  const HeatGrid g(0.0, 1.0, 30);
  HeatState s{0.0, {}};
  for (double x : g.centers())
    s.theta.push_back(2.0 - 3.0 * x);
  const double ta = s.theta.front(), tb = s.theta.back();
  const auto before = s.theta;
  for (int k = 0; k < 5; ++k)
    s = heat_step(s, g, 1.0, 0.05, ta, tb);
  for (std::size_t i = 0; i < before.size(); ++i)
    EXPECT_NEAR(s.theta[i], before[i], 1e-12);
}

TEST(HeatStep, FourCellsByHand)
{
  // Pinned ends 1 and 0; interior r = lambda dt / dx^2 = 1 gives
  //   3 u1 - u2 = 1 + u1_old,  -u1 + 3 u2 = u2_old.
  const HeatGrid g(0.0, 4.0, 4);
  const HeatState s{0.0, {0.0, 2.0, 1.0, 0.0}};
  const auto n = heat_step(s, g, 1.0, 1.0, 1.0, 0.0);
  const double b1 = 3.0, b2 = 1.0;
  const double u1 = (3 * b1 + b2) / 8.0;
  const double u2 = (b1 + 3 * b2) / 8.0;
  EXPECT_NEAR(n.theta[0], 1.0, 1e-15);
  EXPECT_NEAR(n.theta[1], u1, 1e-14);
  EXPECT_NEAR(n.theta[2], u2, 1e-14);
  EXPECT_NEAR(n.theta[3], 0.0, 1e-15);
}

TEST(HeatStep, RejectsBadParameters)
{
  const HeatGrid g(0.0, 1.0, 10);
  const HeatState s{0.0, std::vector<double>(10, 0.0)};
  EXPECT_THROW(heat_step(s, g, 1.0, 0.0, 0, 0), InvalidArgument);
  EXPECT_THROW(heat_step(s, g, 1.0, -1e-3, 0, 0), InvalidArgument);
  EXPECT_THROW(heat_step(s, g, 0.0, 1e-3, 0, 0), InvalidArgument);
  EXPECT_THROW(heat_step(s, g, -1.0, 1e-3, 0, 0), InvalidArgument);
}

TEST(RunHeat, ZeroDataStaysZero)
{
  const HeatProblem p{HeatGrid(-1, 1, 100), 0.4, [](double) { return 0.0; },
                      [](double) { return 0.0; }, [](double) { return 0.0; }};
  const auto out = run_heat(p, 0.1, 1e-3);
  ASSERT_FALSE(out.empty());
  EXPECT_NEAR(out.back().time, 0.1, 1e-14);
  for (double v : out.back().theta)
    EXPECT_EQ(v, 0.0);
}

TEST(RunHeat, LandsOnFinalTimeAndRecordsOutputs)
{
  const HeatProblem p{HeatGrid(-1, 1, 50), 0.4, [](double) { return 1.0; },
                      [](double) { return 0.0; }, [](double) { return 0.0; }};
  const double outs[] = {0.01, 0.02};
  const auto r = run_heat(p, 0.03, 7e-4, outs);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_NEAR(r[0].time, 0.01, 7e-4);
  EXPECT_NEAR(r[1].time, 0.02, 7e-4);
  EXPECT_NEAR(r[2].time, 0.03, 1e-14);
}

TEST(RunHeat, ManufacturedSolutionConverges)
{
  // theta = exp(-lambda pi^2 t) sin(pi x) + x on [0, 1].
  const double lambda = 0.4, T = 0.1;
  auto exact = [&](double t, double x) {
    return std::exp(-lambda * std::numbers::pi * std::numbers::pi * t) *
             std::sin(std::numbers::pi * x) + x;
  };
  double prev = 0.0;
  for (int cells : {20, 40, 80})
  {
    const HeatGrid g(0.0, 1.0, cells);
    const double dx = g.dx();
    // Dirichlet rows sit at the first and last centers.
    const HeatProblem p{g, lambda, [&](double t) { return exact(t, g.center(0)); },
                        [&](double t) { return exact(t, g.center(cells - 1)); },
                        [&](double x) { return exact(0.0, x); }};
    const auto s = run_heat(p, T, dx * dx).back();
    double err = 0.0;
    for (int i = 0; i < cells; ++i)
      err = std::max(err, std::abs(s.theta[i] - exact(T, g.center(i))));
    if (prev > 0.0)
    {
      EXPECT_GT(prev / err, 3.0) << cells;
    }
    prev = err;
  }
}

TEST(RunHeat, MaximumPrinciple)
{
  const HeatProblem p{HeatGrid(-1, 1, 200), 0.4, [](double t) { return std::sin(30 * t); },
                      [](double) { return 0.5; },
                      [](double x) { return x > 0 ? 1.0 : -1.0; }};
  const auto r = run_heat(p, 0.2, 5e-3, std::vector<double>{0.05, 0.1, 0.15});
  for (const auto& s : r)
    for (double v : s.theta)
    {
      EXPECT_LE(v, 1.0 + 1e-12);
      EXPECT_GE(v, -1.0 - 1e-12);
    }
}

TEST(RunHeat, ReferenceGridAndStep)
{
  const HeatProblem p{heat_grid_with_spacing(-1, 1, 1e-3), 0.4, [](double) { return 1.0; },
                      [](double) { return 1.0; }, [](double) { return 1.0; }};
  const auto r = run_heat(p, 0.03, 2.5e-4);
  EXPECT_EQ(r.back().theta.size(), 2000u);
  EXPECT_NEAR(r.back().time, 0.03, 1e-14);
}
