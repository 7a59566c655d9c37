#include "slabtrans/kinetic.hpp"

#include "slabtrans/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace slabtrans
{

SigmaProfile
SigmaProfile::uniform(double value)
{
  if (!(value > 0.0))
    throw InvalidArgument("sigma must be positive");
  return SigmaProfile{value, value, 0.0, false};
}

SigmaProfile
SigmaProfile::zones(double left, double right, double interface)
{
  if (!(left > 0.0) || !(right > 0.0))
    throw InvalidArgument("sigma must be positive");
  return SigmaProfile{left, right, interface, true};
}

KineticGrid::KineticGrid(double a_, double b_, int cells_, AngularGrid angles_)
  : a(a_), b(b_), cells(cells_), angles(std::move(angles_))
{
  if (!(b > a) || cells < 4)
    throw InvalidArgument("KineticGrid: need b > a and at least 4 cells");
  if (angles.size() < 2 || angles.size() % 2 != 0)
    throw InvalidArgument("KineticGrid: angular grid needs an even node count");
}

std::vector<double>
KineticGrid::centers() const
{
  std::vector<double> x(cells);
  for (int i = 0; i < cells; ++i)
    x[i] = center(i);
  return x;
}

std::vector<double>
KineticGrid::incoming_left_nodes() const
{
  return {angles.nodes.begin() + half(), angles.nodes.end()};
}

std::vector<double>
KineticGrid::incoming_right_nodes() const
{
  return {angles.nodes.begin(), angles.nodes.begin() + half()};
}

std::vector<double>
KineticState::cell(int i) const
{
  std::vector<double> v(directions);
  for (int j = 0; j < directions; ++j)
    v[j] = at(i, j);
  return v;
}

KineticState
make_kinetic_state(const KineticGrid& grid, const std::function<double(double, double)>& f0,
                   double time)
{
  KineticState s;
  s.time = time;
  s.cells = grid.cells;
  s.directions = grid.directions();
  s.f.resize(static_cast<std::size_t>(s.cells) * s.directions);
  for (int j = 0; j < s.directions; ++j)
    for (int i = 0; i < s.cells; ++i)
      s.at(i, j) = f0(grid.center(i), grid.angles.nodes[j]);
  return s;
}

std::vector<double>
cell_means(const KineticState& state, const AngularGrid& angles)
{
  if (static_cast<int>(angles.size()) != state.directions)
    throw InvalidArgument("cell_means: angular grid does not match state");
  std::vector<double> m(state.cells, 0.0);
  for (int j = 0; j < state.directions; ++j)
  {
    const double w = 0.5 * angles.weights[j];
    const auto f = state.direction(j);
    for (int i = 0; i < state.cells; ++i)
      m[i] += w * f[i];
  }
  return m;
}

namespace
{

// van Leer limited anti-diffusive difference: phi(r) * d with r = up / d.
inline double
limited(double up, double d)
{
  const double p = up * d;
  return p > 0.0 ? 2.0 * p / (up + d) : 0.0;
}

// One limited Lax-Wendroff update of a single direction with Courant number nu.
void
advect_line(std::span<double> f, double nu, std::vector<double>& ext, std::vector<double>& flux)
{
  const int n = static_cast<int>(f.size());
  // ext holds two ghosts per side: ext[k] = f[k - 2].
  ext.resize(n + 4);
  std::copy(f.begin(), f.end(), ext.begin() + 2);
  ext[0] = ext[1] = f[0];
  ext[n + 2] = ext[n + 3] = f[n - 1];
  // flux[k] is the flux through the face between ext[k + 1] and ext[k + 2],
  // k = 0..n, i.e. the left face of cell k.
  flux.resize(n + 1);
  const double a = std::abs(nu);
  const double c = 0.5 * a * (1.0 - a);
  if (nu >= 0.0)
  {
    for (int k = 0; k <= n; ++k)
    {
      const double d = ext[k + 2] - ext[k + 1];
      const double up = ext[k + 1] - ext[k];
      flux[k] = nu * ext[k + 1] + c * limited(up, d);
    }
  }
  else
  {
    for (int k = 0; k <= n; ++k)
    {
      const double d = ext[k + 2] - ext[k + 1];
      const double up = ext[k + 3] - ext[k + 2];
      flux[k] = nu * ext[k + 2] + c * limited(up, d);
    }
  }
  for (int i = 0; i < n; ++i)
    f[i] -= flux[i + 1] - flux[i];
}

void
check_boundary_sizes(const KineticState& state, std::span<const double> left_in,
                     std::span<const double> right_in)
{
  const auto half = static_cast<std::size_t>(state.directions / 2);
  if (left_in.size() != half || right_in.size() != half)
    throw InvalidArgument("kinetic step: boundary data must have one value per incoming direction");
}

void
overwrite_boundary(KineticState& state, std::span<const double> left_in,
                   std::span<const double> right_in)
{
  const int half = state.directions / 2;
  for (int k = 0; k < half; ++k)
  {
    state.at(0, half + k) = left_in[k];
    state.at(state.cells - 1, k) = right_in[k];
  }
}

} // namespace

void
advect_step(KineticState& state, const KineticGrid& grid, double eps, double dt,
            std::span<const double> left_in, std::span<const double> right_in, double cfl)
{
  if (!(dt > 0.0) || !(eps > 0.0))
    throw InvalidTimestep("advect_step: dt and eps must be positive");
  check_boundary_sizes(state, left_in, right_in);
  double mu_max = 0.0;
  for (double mu : grid.angles.nodes)
    mu_max = std::max(mu_max, std::abs(mu));
  if (dt * mu_max / (eps * grid.dx()) > cfl * (1.0 + 1e-12))
    throw InvalidTimestep("advect_step: CFL condition violated");
  std::vector<double> ext, flux;
  for (int j = 0; j < state.directions; ++j)
    advect_line(state.direction(j), grid.angles.nodes[j] * dt / (eps * grid.dx()), ext, flux);
  overwrite_boundary(state, left_in, right_in);
  state.time += dt;
}

void
collide_step(KineticState& state, const KineticGrid& grid, double eps, double dt,
             const SigmaProfile& sigma, const CollisionOperator& op)
{
  std::vector<double> v(state.directions);
  for (int i = 0; i < state.cells; ++i)
  {
    for (int j = 0; j < state.directions; ++j)
      v[j] = state.at(i, j);
    op.relax(v, sigma(grid.center(i)) * dt / (eps * eps));
    for (int j = 0; j < state.directions; ++j)
      state.at(i, j) = v[j];
  }
}

KineticStepper::KineticStepper(const KineticGrid& grid, const CollisionOperator& op,
                               SigmaProfile sigma, double eps, double dt, double cfl)
  : grid_(grid), op_(&op), eps_(eps), dt_(dt)
{
  if (!(dt > 0.0) || !(eps > 0.0))
    throw InvalidTimestep("KineticStepper: dt and eps must be positive");
  if (op.grid().nodes != grid.angles.nodes)
    throw InvalidArgument("KineticStepper: operator and grid use different angular nodes");
  courant_.resize(grid.directions());
  for (int j = 0; j < grid.directions(); ++j)
  {
    courant_[j] = grid.angles.nodes[j] * dt / (eps * grid.dx());
    if (std::abs(courant_[j]) > cfl * (1.0 + 1e-12))
      throw InvalidTimestep("KineticStepper: CFL condition violated");
  }

  std::map<double, int> classes;
  cell_class_.resize(grid.cells);
  for (int i = 0; i < grid.cells; ++i)
  {
    const double s = sigma(grid.center(i));
    auto [it, inserted] = classes.emplace(s, static_cast<int>(classes.size()));
    cell_class_[i] = it->second;
  }
  single_class_ = classes.size() == 1;
  const auto& r = op.relaxation_modes();
  bulk_factor_.assign(classes.size(), 0.0);
  mode_factor_.assign(r.modes.size(), std::vector<double>(classes.size(), 0.0));
  for (auto [s, c] : classes)
  {
    const double tau = s * dt / (eps * eps);
    bulk_factor_[c] = std::exp(-tau * r.bulk_eigenvalue);
    for (std::size_t m = 0; m < r.modes.size(); ++m)
      mode_factor_[m][c] = std::exp(-tau * r.eigenvalues[m]) - bulk_factor_[c];
  }
}

void
KineticStepper::impose(KineticState& state, std::span<const double> left_in,
                       std::span<const double> right_in) const
{
  check_boundary_sizes(state, left_in, right_in);
  overwrite_boundary(state, left_in, right_in);
}

void
KineticStepper::advect(KineticState& state, std::span<const double> left_in,
                       std::span<const double> right_in) const
{
  check_boundary_sizes(state, left_in, right_in);
  std::vector<double> ext, flux;
  for (int j = 0; j < state.directions; ++j)
    advect_line(state.direction(j), courant_[j], ext, flux);
  overwrite_boundary(state, left_in, right_in);
  state.time += dt_;
}

void
KineticStepper::collide(KineticState& state) const
{
  const auto& r = op_->relaxation_modes();
  const int n = state.cells;
  const std::size_t nm = r.modes.size();
  std::vector<std::vector<double>> amp(nm, std::vector<double>(n, 0.0));
  for (std::size_t m = 0; m < nm; ++m)
  {
    auto& a = amp[m];
    for (int j = 0; j < state.directions; ++j)
    {
      const double p = r.projectors[m][j];
      if (p == 0.0)
        continue;
      const auto f = state.direction(j);
      for (int i = 0; i < n; ++i)
        a[i] += p * f[i];
    }
    if (single_class_)
    {
      const double c = mode_factor_[m][0];
      for (int i = 0; i < n; ++i)
        a[i] *= c;
    }
    else
    {
      for (int i = 0; i < n; ++i)
        a[i] *= mode_factor_[m][cell_class_[i]];
    }
  }
  for (int j = 0; j < state.directions; ++j)
  {
    auto f = state.direction(j);
    if (single_class_)
    {
      const double b = bulk_factor_[0];
      for (int i = 0; i < n; ++i)
        f[i] *= b;
    }
    else
    {
      for (int i = 0; i < n; ++i)
        f[i] *= bulk_factor_[cell_class_[i]];
    }
    for (std::size_t m = 0; m < nm; ++m)
    {
      const double v = r.modes[m][j];
      const auto& a = amp[m];
      for (int i = 0; i < n; ++i)
        f[i] += v * a[i];
    }
  }
}

void
KineticStepper::step(KineticState& state, std::span<const double> left_in,
                     std::span<const double> right_in) const
{
  advect(state, left_in, right_in);
  collide(state);
  overwrite_boundary(state, left_in, right_in);
}

double
reference_dx(double eps)
{
  return std::min(5e-4, eps / 25.0);
}

double
reference_dt(double eps, double dx, double cfl, bool cap_dt)
{
  const double dt = cfl * eps * dx;
  return cap_dt ? std::min(dt, eps * eps) : dt;
}

ReferenceRun
run_reference(const KineticProblem& problem, const CollisionOperator& op, double eps,
              const SigmaProfile& sigma, double a, double b, double T,
              const KineticOptions& options, std::span<const double> output_times)
{
  if (!(eps > 0.0) || !(T >= 0.0))
    throw InvalidArgument("run_reference: need eps > 0 and T >= 0");
  const double dx_target = options.dx > 0.0 ? options.dx : reference_dx(eps);
  const int cells = static_cast<int>(std::ceil((b - a) / dx_target - 1e-9));
  ReferenceRun run;
  run.grid = KineticGrid(a, b, cells, op.grid());
  // mu_max < 1, so the nominal step satisfies the CFL bound with room to spare.
  const double dt_max = reference_dt(eps, run.grid.dx(), options.cfl, options.cap_dt);
  run.steps = T > 0.0 ? static_cast<long>(std::ceil(T / dt_max - 1e-9)) : 0;
  run.dt = run.steps > 0 ? T / static_cast<double>(run.steps) : dt_max;

  const KineticStepper stepper(run.grid, op, sigma, eps, run.dt, options.cfl);
  KineticState state = make_kinetic_state(run.grid, problem.initial);
  const auto left_nodes = run.grid.incoming_left_nodes();
  const auto right_nodes = run.grid.incoming_right_nodes();
  std::vector<double> left_in(left_nodes.size()), right_in(right_nodes.size());
  auto fill = [&](double t) {
    for (std::size_t k = 0; k < left_nodes.size(); ++k)
      left_in[k] = problem.left(t, left_nodes[k]);
    for (std::size_t k = 0; k < right_nodes.size(); ++k)
      right_in[k] = problem.right(t, right_nodes[k]);
  };

  std::size_t next = 0;
  auto record = [&](long n) {
    while (next < output_times.size() && output_times[next] <= (n + 0.5) * run.dt)
    {
      run.snapshots.push_back(state);
      ++next;
    }
  };
  record(0);
  for (long n = 1; n <= run.steps; ++n)
  {
    fill(n * run.dt);
    stepper.step(state, left_in, right_in);
    state.time = n * run.dt;
    record(n);
  }
  if (run.snapshots.empty() || run.snapshots.back().time != state.time)
    run.snapshots.push_back(state);
  return run;
}

} // namespace slabtrans
