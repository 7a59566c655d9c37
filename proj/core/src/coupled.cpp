#include "slabtrans/coupled.hpp"

#include "slabtrans/errors.hpp"

#include <algorithm>
#include <cmath>

namespace slabtrans
{

double
angular_mean(const std::function<double(double)>& g)
{
  static const AngularGrid rule = gauss_legendre(32, 0.0, 1.0);
  double s = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k)
    s += rule.weights[k] * (g(rule.nodes[k]) + g(-rule.nodes[k]));
  return 0.5 * s;
}

double
kinetic_l2_norm(const KineticState& state, const KineticGrid& grid)
{
  double s = 0.0;
  for (int j = 0; j < state.directions; ++j)
  {
    const auto f = state.direction(j);
    double row = 0.0;
    for (int i = 0; i < state.cells; ++i)
      row += f[i] * f[i];
    s += 0.5 * grid.angles.weights[j] * row;
  }
  return std::sqrt(s * grid.dx());
}

CoupledSolver::CoupledSolver(CoupledProblem problem, const CollisionOperator& op, double eps,
                             double T, const CoupledOptions& options)
  : problem_(std::move(problem)), op_(&op), eps_(eps), options_(options)
{
  if (!(eps > 0.0) || !(T >= 0.0))
    throw InvalidArgument("CoupledSolver: need eps > 0 and T >= 0");
  if (!(options.a < options.interface && options.interface < options.b))
    throw InvalidArgument("CoupledSolver: interface must lie inside (a, b)");
  if (!problem_.kinetic.left || !problem_.kinetic.right || !problem_.kinetic.initial)
    throw InvalidArgument("CoupledSolver: kinetic data incomplete");

  const int kcells =
    static_cast<int>(std::lround((options.interface - options.a) / options.dx));
  kinetic_grid_ = KineticGrid(options.a, options.interface, kcells, op.grid());
  heat_grid_ = heat_grid_with_spacing(options.interface, options.b, options.heat_dx);

  const double dt_max = options.cfl * eps * kinetic_grid_.dx();
  steps_ = T > 0.0 ? static_cast<long>(std::ceil(T / dt_max - 1e-9)) : 0;
  dt_ = steps_ > 0 ? T / static_cast<double>(steps_) : dt_max;

  system_ = std::make_unique<HalfSpaceSystem>(op, options.order, options.damping, options.quadrature);
  left_nodes_ = kinetic_grid_.incoming_left_nodes();
  albedo_ = albedo_map(*system_, left_nodes_, kinetic_grid_.incoming_right_nodes());
  // sigma = eps in the kinetic region.
  stepper_ = std::make_unique<KineticStepper>(kinetic_grid_, op, SigmaProfile::uniform(eps), eps,
                                              dt_, options.cfl);
}

double
CoupledSolver::theta_b(double t) const
{
  const auto& right = problem_.kinetic.right;
  return system_->end_state([&](double mu) { return right(t, -mu); });
}

std::vector<double>
CoupledSolver::interface_incoming(const KineticState& state) const
{
  const int half = kinetic_grid_.half();
  std::vector<double> in(half);
  for (int k = 0; k < half; ++k)
    in[k] = state.at(state.cells - 1, half + k);
  return in;
}

void
CoupledSolver::close_interface(KineticState& state, double& theta_m) const
{
  const auto in = interface_incoming(state);
  const auto out = albedo_.apply(in);
  theta_m = albedo_.theta(in);
  for (std::size_t k = 0; k < out.size(); ++k)
    state.at(state.cells - 1, static_cast<int>(k)) = out[k];
}

CoupledState
CoupledSolver::initial_state() const
{
  CoupledState s;
  s.kinetic = make_kinetic_state(kinetic_grid_, problem_.kinetic.initial);
  close_interface(s.kinetic, s.theta_m);
  s.heat.theta.resize(heat_grid_.cells);
  const auto& init = problem_.kinetic.initial;
  for (int i = 0; i < heat_grid_.cells; ++i)
  {
    const double x = heat_grid_.center(i);
    s.heat.theta[i] = problem_.heat_initial
                        ? problem_.heat_initial(x)
                        : angular_mean([&](double mu) { return init(x, mu); });
  }
  return s;
}

void
CoupledSolver::step(CoupledState& state) const
{
  const double t = state.time + dt_;
  const int half = kinetic_grid_.half();
  std::vector<double> left_in(half), right_in(half);
  for (int k = 0; k < half; ++k)
  {
    left_in[k] = problem_.kinetic.left(t, left_nodes_[k]);
    right_in[k] = state.kinetic.at(state.kinetic.cells - 1, k);
  }
  stepper_->step(state.kinetic, left_in, right_in);
  close_interface(state.kinetic, state.theta_m);
  state.heat = heat_step(state.heat, heat_grid_, op_->diffusion_coefficient(), dt_, state.theta_m,
                         theta_b(t));
  state.time = t;
  state.kinetic.time = t;
  state.heat.time = t;
}

namespace
{

template <class Record>
void
record_until(std::span<const double> times, std::size_t& next, double t, double dt, Record rec)
{
  while (next < times.size() && times[next] <= t + 0.5 * dt)
  {
    rec();
    ++next;
  }
}

} // namespace

CoupledRun
run_coupled(const CoupledProblem& problem, const CollisionOperator& op, double eps, double T,
            const CoupledOptions& options, std::span<const double> output_times)
{
  const CoupledSolver solver(problem, op, eps, T, options);
  CoupledRun run;
  run.kinetic_grid = solver.kinetic_grid();
  run.heat_grid = solver.heat_grid();
  run.dt = solver.dt();
  run.steps = solver.steps();

  CoupledState state = solver.initial_state();
  std::size_t next = 0;
  auto rec = [&] { run.snapshots.push_back(state); };
  run.theta_m_times.push_back(0.0);
  run.theta_m.push_back(state.theta_m);
  record_until(output_times, next, 0.0, run.dt, rec);
  for (long n = 1; n <= run.steps; ++n)
  {
    solver.step(state);
    state.time = n * run.dt;
    run.theta_m_times.push_back(state.time);
    run.theta_m.push_back(state.theta_m);
    record_until(output_times, next, state.time, run.dt, rec);
  }
  if (run.snapshots.empty() || run.snapshots.back().time != state.time)
    run.snapshots.push_back(state);
  return run;
}

double
stability_perturbation(double s)
{
  return 1.0 / (1.0 + std::sqrt(std::max(s, 0.0)));
}

StabilityRun
run_stability(const CollisionOperator& op, double eps, double T, const CoupledOptions& options,
              std::span<const double> output_times, int samples)
{
  if (!(eps > 0.0) || !(T > 0.0))
    throw InvalidArgument("run_stability: need eps > 0 and T > 0");
  const int cells = static_cast<int>(std::lround((options.interface - options.a) / options.dx));
  StabilityRun run;
  run.grid = KineticGrid(options.a, options.interface, cells, op.grid());
  const double dt_max = options.cfl * eps * run.grid.dx();
  run.steps = static_cast<long>(std::ceil(T / dt_max - 1e-9));
  run.dt = T / static_cast<double>(run.steps);

  const HalfSpaceSystem system(op, options.order, options.damping, options.quadrature);
  const auto left_nodes = run.grid.incoming_left_nodes();
  const AlbedoMap albedo = albedo_map(system, left_nodes, run.grid.incoming_right_nodes());
  const KineticStepper stepper(run.grid, op, SigmaProfile::uniform(eps), eps, run.dt,
                               options.cfl);
  const int half = run.grid.half();

  KineticState state = make_kinetic_state(run.grid, [](double, double) { return 0.0; });
  auto close = [&](double t) {
    std::vector<double> in(half);
    for (int k = 0; k < half; ++k)
      in[k] = state.at(state.cells - 1, half + k);
    const auto out = albedo.apply(in);
    const double p = stability_perturbation(t / (eps * eps));
    for (int k = 0; k < half; ++k)
      state.at(state.cells - 1, k) = out[k] + p;
  };
  close(0.0);

  const long stride = std::max<long>(1, run.steps / std::max(samples, 1));
  std::size_t next = 0;
  auto rec = [&] { run.snapshots.push_back(state); };
  run.times.push_back(0.0);
  run.deviation.push_back(kinetic_l2_norm(state, run.grid));
  record_until(output_times, next, 0.0, run.dt, rec);

  const std::vector<double> zero(half, 0.0);
  std::vector<double> right_in(half);
  for (long n = 1; n <= run.steps; ++n)
  {
    const double t = n * run.dt;
    for (int k = 0; k < half; ++k)
      right_in[k] = state.at(state.cells - 1, k);
    stepper.step(state, zero, right_in);
    close(t);
    state.time = t;
    const double d = kinetic_l2_norm(state, run.grid);
    run.max_deviation = std::max(run.max_deviation, d);
    if (n % stride == 0 || n == run.steps)
    {
      run.times.push_back(t);
      run.deviation.push_back(d);
    }
    record_until(output_times, next, t, run.dt, rec);
  }
  if (run.snapshots.empty() || run.snapshots.back().time != state.time)
    run.snapshots.push_back(state);
  return run;
}

} // namespace slabtrans
