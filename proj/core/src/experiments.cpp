#include "slabtrans/experiments.hpp"

#include "slabtrans/errors.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <cmath>
#include <map>
#include <numbers>
#include <thread>

namespace slabtrans
{

namespace
{

constexpr double pi = std::numbers::pi;

CaseSpec
pure_case(std::string id)
{
  CaseSpec c;
  c.id = std::move(id);
  c.kind = CaseKind::pure;
  c.T = 0.03;
  return c;
}

CaseSpec
coupled_case(std::string id, double T)
{
  CaseSpec c;
  c.id = std::move(id);
  c.kind = CaseKind::coupled;
  c.T = T;
  c.inner_lo = 0.1;
  c.inner_hi = 0.9;
  return c;
}

} // namespace

std::vector<std::string>
case_ids()
{
  return {"pure1",    "pure2",    "pure3",    "pure4",    "pure5",    "pure6",
          "coupled1", "coupled2", "coupled3", "stability"};
}

CaseSpec
make_case(const std::string& id, double eta)
{
  auto zero_t = [](double) { return 0.0; };
  if (id == "pure1")
  {
    auto c = pure_case(id);
    c.kinetic.left = c.kinetic.right = [](double, double) { return 0.0; };
    c.kinetic.initial = [](double x, double) { return std::sin(pi * x); };
    c.theta_a = c.theta_b = zero_t;
    c.theta_i = [](double x) { return std::sin(pi * x); };
    return c;
  }
  if (id == "pure2")
  {
    auto c = pure_case(id);
    c.kinetic.left = c.kinetic.right = [](double, double) { return 0.0; };
    c.kinetic.initial = [](double x, double mu) {
      return std::sin(pi * x) * (1.0 + 0.5 * std::abs(mu));
    };
    c.theta_a = c.theta_b = zero_t;
    c.theta_i = [](double x) { return 1.25 * std::sin(pi * x); };
    return c;
  }
  if (id == "pure3")
  {
    auto c = pure_case(id);
    c.kinetic.left = c.kinetic.right = [](double t, double mu) {
      return 1.5 + 100.0 * t * std::abs(mu);
    };
    c.kinetic.initial = [](double x, double) { return std::sin(pi * x) + 1.5; };
    c.theta_a = c.theta_b = [eta](double t) { return 1.5 + 100.0 * t * eta; };
    c.theta_i = [](double x) { return std::sin(pi * x) + 1.5; };
    return c;
  }
  if (id == "pure4")
  {
    auto c = pure_case(id);
    c.kinetic.left = c.kinetic.right = [](double t, double mu) {
      return std::abs(mu) * (1.0 + 100.0 * t);
    };
    c.kinetic.initial = [eta](double, double mu) { return eta * std::abs(mu) + 0.5 * eta; };
    c.theta_a = c.theta_b = [eta](double t) { return eta * (1.0 + 100.0 * t); };
    c.theta_i = [eta](double) { return eta; };
    return c;
  }
  if (id == "pure5")
  {
    auto c = pure_case(id);
    c.kinetic.left = c.kinetic.right = [](double, double) { return 1.0; };
    c.kinetic.initial = [](double, double) { return 0.0; };
    c.theta_a = c.theta_b = [](double) { return 1.0; };
    c.theta_i = [](double) { return 0.0; };
    c.compatible = false;
    return c;
  }
  if (id == "pure6")
  {
    auto c = pure_case(id);
    c.kinetic.left = c.kinetic.right = [](double, double mu) { return std::abs(mu); };
    c.kinetic.initial = [](double, double mu) { return std::abs(mu); };
    c.theta_a = c.theta_b = [eta](double) { return eta; };
    c.theta_i = [](double) { return 0.5; };
    c.compatible = false;
    return c;
  }
  if (id == "coupled1")
  {
    auto c = coupled_case(id, 0.1);
    c.kinetic.left = c.kinetic.right = [](double, double) { return 0.0; };
    c.kinetic.initial = [](double x, double mu) { return std::abs(mu) * std::sin(pi * x); };
    c.theta_b = zero_t;
    c.theta_i = [](double x) { return 0.5 * std::sin(pi * x); };
    return c;
  }
  if (id == "coupled2")
  {
    auto c = coupled_case(id, 0.5);
    c.kinetic.left = [](double t, double mu) { return std::abs(mu) * t + 1.0; };
    c.kinetic.right = [](double t, double mu) { return std::abs(mu) * t + 0.5; };
    c.kinetic.initial = [](double x, double) { return 0.25 * std::cos(pi * x) + 0.75; };
    c.theta_b = [eta](double t) { return eta * t + 0.5; };
    c.theta_i = [](double x) { return 0.25 * std::cos(pi * x) + 0.75; };
    return c;
  }
  if (id == "coupled3")
  {
    auto c = coupled_case(id, 0.5);
    c.kinetic.left = c.kinetic.right = [](double t, double mu) { return std::abs(mu) * (t + 1.0); };
    c.kinetic.initial = [](double, double mu) { return std::abs(mu); };
    c.theta_b = [eta](double t) { return eta * (t + 1.0); };
    c.theta_i = [](double) { return 0.5; };
    c.compatible = false;
    return c;
  }
  if (id == "stability")
  {
    CaseSpec c;
    c.id = id;
    c.kind = CaseKind::stability;
    c.T = 0.1;
    c.kinetic.left = [](double, double) { return 0.0; };
    c.kinetic.right = [](double, double) { return 0.0; };
    c.kinetic.initial = [](double, double) { return 0.0; };
    c.inner_lo = -1.0;
    c.inner_hi = 0.0;
    return c;
  }
  throw InvalidArgument("unknown case id: " + id);
}

SlopeFit
convergence_slope(std::span<const double> eps, std::span<const double> errors)
{
  if (eps.size() != errors.size() || eps.size() < 2)
    throw InvalidArgument("convergence_slope: need at least two (eps, error) pairs");
  const double n = static_cast<double>(eps.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < eps.size(); ++k)
  {
    if (!(eps[k] > 0.0) || !(errors[k] > 0.0))
      throw InvalidArgument("convergence_slope: values must be positive");
    const double x = std::log(eps[k]);
    const double y = std::log(errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (!(std::abs(den) > 0.0))
    throw InvalidArgument("convergence_slope: eps values must differ");
  SlopeFit fit;
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

ErrorEntry
error_norms(const KineticState& reference, const KineticGrid& reference_grid,
            const HeatState& heat, const HeatGrid& heat_grid, double inner_lo, double inner_hi)
{
  if (std::abs(reference.time - heat.time) > 1e-9 * std::max(1.0, std::abs(heat.time)))
    throw InvalidArgument("error_norms: reference and heat solutions are at different times");
  if (static_cast<int>(heat.theta.size()) != heat_grid.cells ||
      reference.cells != reference_grid.cells)
    throw InvalidArgument("error_norms: state does not match grid");

  const auto& w = reference_grid.angles.weights;
  const int nd = reference.directions;
  const double rdx = reference_grid.dx();
  double st = 0.0, sf = 0.0, sti = 0.0, sfi = 0.0;
  for (int i = 0; i < heat_grid.cells; ++i)
  {
    const double x = heat_grid.center(i);
    // Position in reference cell-center coordinates, clamped to the mesh.
    const double s = std::clamp((x - reference_grid.a) / rdx - 0.5, 0.0,
                                static_cast<double>(reference.cells - 1));
    const int k = std::min(static_cast<int>(s), reference.cells - 2);
    const double r = s - k;
    double mean = 0.0, ef = 0.0;
    for (int j = 0; j < nd; ++j)
    {
      const double f = (1.0 - r) * reference.at(k, j) + r * reference.at(k + 1, j);
      mean += 0.5 * w[j] * f;
      ef += 0.5 * w[j] * (heat.theta[i] - f) * (heat.theta[i] - f);
    }
    const double et = (heat.theta[i] - mean) * (heat.theta[i] - mean);
    st += et;
    sf += ef;
    if (x >= inner_lo && x <= inner_hi)
    {
      sti += et;
      sfi += ef;
    }
  }
  const double dx = heat_grid.dx();
  ErrorEntry e;
  e.e_theta = std::sqrt(st * dx);
  e.e_f = std::sqrt(sf * dx);
  e.e_theta_inner = std::sqrt(sti * dx);
  e.e_f_inner = std::sqrt(sfi * dx);
  return e;
}

HeatProblem
derived_heat_problem(const CaseSpec& spec, const CollisionOperator& op,
                     const HalfSpaceSystem& system, const HeatGrid& grid)
{
  HeatProblem p;
  p.grid = grid;
  p.lambda = op.diffusion_coefficient();
  const auto left = spec.kinetic.left;
  const auto right = spec.kinetic.right;
  const auto initial = spec.kinetic.initial;
  const HalfSpaceSystem* sys = &system;
  p.theta_a = [sys, left](double t) { return sys->end_state([&](double mu) { return left(t, mu); }); };
  // At x = b the half-space coordinate runs leftwards, so incoming mu maps to -mu.
  p.theta_b = [sys, right](double t) {
    return sys->end_state([&](double mu) { return right(t, -mu); });
  };
  p.theta_0 = [initial](double x) { return angular_mean([&](double mu) { return initial(x, mu); }); };
  return p;
}

PureRun
run_pure(const CaseSpec& spec, const CollisionOperator& op, double eps, const PureOptions& options)
{
  if (spec.kind != CaseKind::pure)
    throw InvalidArgument("run_pure: " + spec.id + " is not a pure diffusion case");
  const HalfSpaceSystem system(op, options.order, options.damping, options.quadrature);
  PureRun run;
  run.reference = run_reference(spec.kinetic, op, eps, SigmaProfile::uniform(1.0), -1.0, 1.0,
                                options.T, options.kinetic);
  run.heat_grid = heat_grid_with_spacing(-1.0, 1.0, options.heat_dx);
  const auto problem = derived_heat_problem(spec, op, system, run.heat_grid);
  run.heat = run_heat(problem, options.T, options.heat_dt).back();
  run.errors = error_norms(run.reference.final_state(), run.reference.grid, run.heat,
                           run.heat_grid, spec.inner_lo, spec.inner_hi);
  run.errors.case_id = spec.id;
  run.errors.eps = eps;
  return run;
}

void
fit_slopes(ErrorReport& report)
{
  std::map<std::string, std::vector<const ErrorEntry*>> by_case;
  for (const auto& e : report.entries)
    by_case[e.case_id].push_back(&e);
  report.slopes.clear();
  for (const auto& [id, rows] : by_case)
  {
    if (rows.size() < 2)
      continue;
    std::vector<double> eps, et, ef, eti, efi;
    for (const auto* r : rows)
    {
      eps.push_back(r->eps);
      et.push_back(r->e_theta);
      ef.push_back(r->e_f);
      eti.push_back(r->e_theta_inner);
      efi.push_back(r->e_f_inner);
    }
    CaseSlopes s;
    s.case_id = id;
    auto fit = [&](const std::vector<double>& e) {
      return std::all_of(e.begin(), e.end(), [](double v) { return v > 0.0; })
               ? convergence_slope(eps, e)
               : SlopeFit{std::nan(""), std::nan("")};
    };
    s.e_theta = fit(et);
    s.e_f = fit(ef);
    s.e_theta_inner = fit(eti);
    s.e_f_inner = fit(efi);
    report.slopes.push_back(s);
  }
}

ErrorReport
run_pure_suite(std::span<const std::string> ids, std::span<const double> eps,
               const CollisionOperator& op, const PureOptions& options, int threads)
{
  const double eta = end_state_eta(op, options.order, options.damping);
  struct Job
  {
    CaseSpec spec;
    double eps;
  };
  std::vector<Job> jobs;
  for (const auto& id : ids)
    for (double e : eps)
      jobs.push_back({make_case(id, eta), e});

  std::vector<ErrorEntry> results(jobs.size());
  std::vector<std::exception_ptr> failures(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++)
    {
      try
      {
        results[k] = run_pure(jobs[k].spec, op, jobs[k].eps, options).errors;
      }
      catch (...)
      {
        failures[k] = std::current_exception();
      }
    }
  };
  const int n = std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(jobs.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto& t : pool)
    t.join();
  for (auto& f : failures)
    if (f)
      std::rethrow_exception(f);

  ErrorReport report;
  report.entries = std::move(results);
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const ErrorEntry& a, const ErrorEntry& b) {
                     return a.case_id != b.case_id ? a.case_id < b.case_id : a.eps > b.eps;
                   });
  fit_slopes(report);
  return report;
}

CoupledCaseRun
run_coupled_case(const CaseSpec& spec, const CollisionOperator& op, double eps,
                 const CoupledCaseOptions& options, std::span<const double> output_times)
{
  if (spec.kind != CaseKind::coupled)
    throw InvalidArgument("run_coupled_case: " + spec.id + " is not a coupled case");
  const auto& co = options.coupled;
  std::vector<double> times(output_times.begin(), output_times.end());
  std::sort(times.begin(), times.end());
  times.erase(std::remove_if(times.begin(), times.end(),
                             [&](double t) { return t < 0.0 || t > spec.T; }),
              times.end());

  CoupledCaseRun run;
  CoupledProblem problem{spec.kinetic, spec.theta_i};
  run.coupled = run_coupled(problem, op, eps, spec.T, co, times);

  KineticOptions ko;
  ko.dx = options.reference_dx;
  ko.cfl = co.cfl;
  ko.cap_dt = options.reference_cap_dt;
  run.reference = run_reference(spec.kinetic, op, eps,
                                SigmaProfile::zones(eps, 1.0, co.interface), co.a, co.b, spec.T,
                                ko, times);

  // Pair snapshots by index; both runs record one state per requested time
  // and the final state last. Times may differ by less than one step.
  const std::size_t n = std::min(run.coupled.snapshots.size(), run.reference.snapshots.size());
  for (std::size_t k = 0; k < n; ++k)
  {
    const auto& c = run.coupled.snapshots[k];
    auto r = run.reference.snapshots[k];
    HeatState h = c.heat;
    h.time = r.time;
    const auto e = error_norms(r, run.reference.grid, h, run.coupled.heat_grid, options.inner_lo,
                               options.inner_hi);
    run.times.push_back(k < times.size() ? times[k] : spec.T);
    run.e_theta_time.push_back(e.e_theta);
  }
  HeatState h = run.coupled.final_state().heat;
  h.time = run.reference.final_state().time;
  run.errors = error_norms(run.reference.final_state(), run.reference.grid, h,
                           run.coupled.heat_grid, options.inner_lo, options.inner_hi);
  run.errors.case_id = spec.id;
  run.errors.eps = eps;
  return run;
}

} // namespace slabtrans
