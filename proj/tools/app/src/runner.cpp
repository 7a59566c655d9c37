#include "slabtrans_app/runner.hpp"

#include "slabtrans_app/svg.hpp"

#include "slabtrans/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace slabtrans::app
{

std::string
format_number(double v)
{
  if (!std::isfinite(v))
    throw std::runtime_error("non-finite value in CSV output");
  if (v == 0.0)
    v = 0.0; // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

void
write_csv(const std::string& path, const std::vector<std::string>& columns,
          const std::vector<std::vector<std::string>>& rows)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  out << csv_schema << "\n";
  for (std::size_t k = 0; k < columns.size(); ++k)
    out << (k ? "," : "") << columns[k];
  out << "\n";
  for (const auto& row : rows)
  {
    if (row.size() != columns.size())
      throw std::logic_error("write_csv: ragged row in " + path);
    for (std::size_t k = 0; k < row.size(); ++k)
      out << (k ? "," : "") << row[k];
    out << "\n";
  }
}

namespace
{

struct Profile
{
  std::vector<double> x, theta, mean_f;
};

struct CaseResult
{
  std::string case_id;
  Epsilon eps;
  bool ok = false;
  std::string failure;
  ErrorEntry errors;
  bool has_errors = false;
  Profile profile;
  std::vector<double> times, series;       // error or deviation vs time
  std::vector<std::pair<double, Profile>> snapshots; // stability profiles
};

std::vector<double>
interpolate(const std::vector<double>& xs, const std::vector<double>& ys,
            const std::vector<double>& at)
{
  std::vector<double> out(at.size());
  for (std::size_t k = 0; k < at.size(); ++k)
  {
    const double x = at[k];
    if (x <= xs.front())
      out[k] = ys.front();
    else if (x >= xs.back())
      out[k] = ys.back();
    else
    {
      const auto it = std::upper_bound(xs.begin(), xs.end(), x);
      const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
      const double r = (x - xs[i]) / (xs[i + 1] - xs[i]);
      out[k] = (1.0 - r) * ys[i] + r * ys[i + 1];
    }
  }
  return out;
}

void
for_each_parallel(std::size_t count, int threads, const std::function<void(std::size_t)>& job)
{
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++)
      job(k);
  };
  const int n = std::clamp<int>(threads, 1, static_cast<int>(std::max<std::size_t>(count, 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto& t : pool)
    t.join();
}

CaseResult
run_pure_job(const CaseSpec& spec, const Epsilon& eps, const CollisionOperator& op,
             const RunConfig& c)
{
  PureOptions o;
  o.kinetic.dx = c.kinetic_dx;
  o.kinetic.cfl = c.kinetic_cfl;
  o.kinetic.cap_dt = c.kinetic_dt_cap;
  o.heat_dx = c.heat_dx;
  o.heat_dt = c.heat_dt;
  o.order = c.halfspace_order;
  o.damping = c.halfspace_alpha;
  o.quadrature = c.halfspace_quadrature;
  o.T = spec.T;
  const PureRun run = run_pure(spec, op, eps.value, o);

  CaseResult r;
  r.errors = run.errors;
  r.has_errors = true;
  r.profile.x = run.heat_grid.centers();
  r.profile.theta = run.heat.theta;
  r.profile.mean_f = interpolate(run.reference.grid.centers(),
                                 cell_means(run.reference.final_state(), op.grid()),
                                 r.profile.x);
  return r;
}

CoupledOptions
coupled_options(const RunConfig& c)
{
  CoupledOptions o;
  o.interface = c.coupled_xm;
  o.dx = c.coupled_dx;
  o.heat_dx = c.heat_dx;
  o.cfl = c.coupled_cfl;
  o.order = c.halfspace_order;
  o.damping = c.halfspace_alpha;
  o.quadrature = c.halfspace_quadrature;
  return o;
}

CaseResult
run_coupled_job(const CaseSpec& spec, const Epsilon& eps, const CollisionOperator& op,
                const RunConfig& c)
{
  CoupledCaseOptions o;
  o.coupled = coupled_options(c);
  o.reference_dx = c.coupled_reference_dx;
  o.reference_cap_dt = c.kinetic_dt_cap;
  std::vector<double> times;
  for (int k = 0; k <= 50; ++k)
    times.push_back(spec.T * k / 50.0);
  for (double t : {0.01, 0.1, 0.25})
    if (t < spec.T)
      times.push_back(t);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              times.end());
  const CoupledCaseRun run = run_coupled_case(spec, op, eps.value, o, times);

  CaseResult r;
  r.errors = run.errors;
  r.has_errors = true;
  r.times = run.times;
  r.series = run.e_theta_time;

  const auto& fin = run.coupled.final_state();
  const auto ref_x = run.reference.grid.centers();
  const auto ref_mean = cell_means(run.reference.final_state(), op.grid());
  const auto kx = run.coupled.kinetic_grid.centers();
  const auto kmean = cell_means(fin.kinetic, op.grid());
  r.profile.x = kx;
  r.profile.theta = kmean;
  const auto hx = run.coupled.heat_grid.centers();
  r.profile.x.insert(r.profile.x.end(), hx.begin(), hx.end());
  r.profile.theta.insert(r.profile.theta.end(), fin.heat.theta.begin(), fin.heat.theta.end());
  r.profile.mean_f = interpolate(ref_x, ref_mean, r.profile.x);
  return r;
}

CaseResult
run_stability_job(const CaseSpec& spec, const Epsilon& eps, const CollisionOperator& op,
                  const RunConfig& c)
{
  const std::vector<double> snaps{0.001, 0.01, 0.05, spec.T};
  const StabilityRun run = run_stability(op, eps.value, spec.T, coupled_options(c), snaps);
  CaseResult r;
  r.times = run.times;
  r.series = run.deviation;
  const auto x = run.grid.centers();
  for (std::size_t k = 0; k < run.snapshots.size() && k < snaps.size(); ++k)
  {
    Profile p;
    p.x = x;
    p.mean_f = cell_means(run.snapshots[k], op.grid());
    p.theta = p.mean_f;
    r.snapshots.emplace_back(snaps[k], std::move(p));
  }
  return r;
}

std::string
path_in(const RunConfig& c, const std::string& name)
{
  return (std::filesystem::path(c.out_dir) / name).string();
}

} // namespace

int
run(const RunConfig& config, std::ostream& log)
{
  validate(config);
  std::filesystem::create_directories(config.out_dir);

  const auto kernel = make_kernel(config.kernel, config.kernel_coefficients);
  const CollisionOperator op =
    build_collision_operator(kernel, config.n_mu - 1, build_angular_grid(config.n_mu));
  const double eta = end_state_eta(op, config.halfspace_order, config.halfspace_alpha);
  log << "kernel " << config.kernel << ": diffusion coefficient " << format_number(op.diffusion_coefficient())
      << ", end state eta " << format_number(eta) << "\n";

  // Deterministic job order: cases as listed, eps as listed.
  std::vector<std::pair<CaseSpec, Epsilon>> jobs;
  for (const auto& id : config.cases)
    for (const auto& e : config.eps)
      jobs.emplace_back(make_case(id, eta), e);

  std::vector<CaseResult> results(jobs.size());
  std::mutex log_mutex;
  for_each_parallel(jobs.size(), config.threads, [&](std::size_t k) {
    const auto& [spec, eps] = jobs[k];
    CaseResult r;
    try
    {
      switch (spec.kind)
      {
      case CaseKind::pure: r = run_pure_job(spec, eps, op, config); break;
      case CaseKind::coupled: r = run_coupled_job(spec, eps, op, config); break;
      case CaseKind::stability: r = run_stability_job(spec, eps, op, config); break;
      }
      r.ok = true;
    }
    catch (const std::exception& e)
    {
      r.ok = false;
      r.failure = e.what();
    }
    r.case_id = spec.id;
    r.eps = eps;
    r.errors.case_id = spec.id;
    r.errors.eps = eps.value;
    std::lock_guard lock(log_mutex);
    log << spec.id << " eps=" << eps.label << (r.ok ? " done" : " FAILED: " + r.failure) << "\n";
    results[k] = std::move(r);
  });

  // errors.csv and slopes.csv
  ErrorReport report;
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : results)
  {
    if (!r.ok || !r.has_errors)
      continue;
    report.entries.push_back(r.errors);
    rows.push_back({r.case_id, format_number(r.eps.value), format_number(r.errors.e_theta),
                    format_number(r.errors.e_f), format_number(r.errors.e_theta_inner),
                    format_number(r.errors.e_f_inner)});
  }
  write_csv(path_in(config, "errors.csv"),
            {"case", "epsilon", "E_theta", "E_f", "E_theta_inner", "E_f_inner"}, rows);

  fit_slopes(report);
  rows.clear();
  for (const auto& s : report.slopes)
  {
    const std::pair<const char*, SlopeFit> fits[] = {{"E_theta", s.e_theta},
                                                     {"E_f", s.e_f},
                                                     {"E_theta_inner", s.e_theta_inner},
                                                     {"E_f_inner", s.e_f_inner}};
    for (const auto& [name, fit] : fits)
      if (std::isfinite(fit.slope))
        rows.push_back({s.case_id, name, format_number(fit.slope), format_number(fit.intercept)});
  }
  write_csv(path_in(config, "slopes.csv"), {"case", "metric", "slope", "intercept"}, rows);

  // Per-run tables.
  std::vector<std::vector<std::string>> deviation_rows;
  for (const auto& r : results)
  {
    if (!r.ok)
      continue;
    if (!r.profile.x.empty())
    {
      std::vector<std::vector<std::string>> prow;
      for (std::size_t i = 0; i < r.profile.x.size(); ++i)
        prow.push_back({format_number(r.profile.x[i]), format_number(r.profile.theta[i]),
                        format_number(r.profile.mean_f[i])});
      write_csv(path_in(config, "profiles_" + r.case_id + "_" + r.eps.label + ".csv"),
                {"x", "theta", "mean_f"}, prow);
    }
    if (r.case_id == "stability")
    {
      for (std::size_t k = 0; k < r.times.size(); ++k)
        deviation_rows.push_back({format_number(r.eps.value), format_number(r.times[k]),
                                  format_number(r.series[k])});
      std::vector<std::vector<std::string>> srow;
      for (const auto& [t, p] : r.snapshots)
        for (std::size_t i = 0; i < p.x.size(); ++i)
          srow.push_back({format_number(t), format_number(p.x[i]), format_number(p.mean_f[i])});
      write_csv(path_in(config, "stability_profiles_" + r.eps.label + ".csv"),
                {"t", "x", "mean_f"}, srow);
    }
    else if (!r.times.empty())
    {
      std::vector<std::vector<std::string>> trow;
      for (std::size_t k = 0; k < r.times.size(); ++k)
        trow.push_back({format_number(r.times[k]), format_number(r.series[k])});
      write_csv(path_in(config, "error_vs_time_" + r.case_id + "_" + r.eps.label + ".csv"),
                {"t", "E_theta"}, trow);
    }
  }
  if (!deviation_rows.empty())
    write_csv(path_in(config, "deviation_vs_time.csv"), {"epsilon", "t", "deviation"},
              deviation_rows);

  if (config.plots)
  {
    std::map<std::string, std::vector<const CaseResult*>> by_case;
    for (const auto& r : results)
      if (r.ok)
        by_case[r.case_id].push_back(&r);
    for (const auto& [id, runs] : by_case)
    {
      if (id == "stability")
      {
        std::vector<Series> dev;
        std::size_t color = 0;
        for (const auto* r : runs)
          dev.push_back({"eps = " + r->eps.label, r->times, r->series, palette(color++)});
        PlotStyle st;
        st.title = "stability test: L2 deviation";
        st.x_label = "t";
        st.y_label = "||f||";
        emit_svg(dev, st, path_in(config, "deviation_vs_time.svg"));
        continue;
      }
      // Profiles: theta solid, reference mean dashed.
      std::vector<Series> prof;
      std::size_t color = 0;
      for (const auto* r : runs)
      {
        const auto col = palette(color++);
        prof.push_back({"theta eps=" + r->eps.label, r->profile.x, r->profile.theta, col});
        prof.push_back({"<f> eps=" + r->eps.label, r->profile.x, r->profile.mean_f, col, true});
      }
      PlotStyle ps;
      ps.title = id + ": profiles at T";
      ps.x_label = "x";
      ps.y_label = "value";
      ps.zoom = std::make_pair(-1.0, -0.9);
      ps.width = 960;
      emit_svg(prof, ps, path_in(config, "profiles_" + id + ".svg"));

      std::vector<double> ex, ey, eyi;
      for (const auto* r : runs)
      {
        ex.push_back(r->eps.value);
        ey.push_back(r->errors.e_theta);
        eyi.push_back(r->errors.e_theta_inner);
      }
      if (ex.size() >= 2)
      {
        std::vector<std::size_t> order(ex.size());
        for (std::size_t k = 0; k < order.size(); ++k)
          order[k] = k;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ex[a] < ex[b]; });
        Series s1{"E_theta", {}, {}, palette(0), false, true};
        Series s2{"E_theta inner", {}, {}, palette(2), true, true};
        for (auto k : order)
        {
          s1.x.push_back(ex[k]);
          s1.y.push_back(ey[k]);
          s2.x.push_back(ex[k]);
          s2.y.push_back(eyi[k]);
        }
        PlotStyle es;
        es.title = id + ": error vs eps";
        es.x_label = "eps";
        es.y_label = "error";
        es.log_x = es.log_y = true;
        es.slope_guides = true;
        emit_svg({s1, s2}, es, path_in(config, "errors_" + id + ".svg"));
      }
      if (!runs.front()->times.empty())
      {
        std::vector<Series> ts;
        std::size_t c2 = 0;
        for (const auto* r : runs)
          ts.push_back({"eps = " + r->eps.label, r->times, r->series, palette(c2++)});
        PlotStyle st;
        st.title = id + ": E_theta over time";
        st.x_label = "t";
        st.y_label = "E_theta";
        emit_svg(ts, st, path_in(config, "error_vs_time_" + id + ".svg"));
      }
    }
  }

  std::vector<std::vector<std::string>> failed;
  for (const auto& r : results)
    if (!r.ok)
    {
      std::string msg = r.failure;
      std::replace(msg.begin(), msg.end(), '"', '\'');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      failed.push_back({r.case_id, format_number(r.eps.value), "\"" + msg + "\""});
    }
  const auto failures_path = path_in(config, "failures.csv");
  if (!failed.empty())
    write_csv(failures_path, {"case", "epsilon", "message"}, failed);
  else
    std::filesystem::remove(failures_path);
  return failed.empty() ? 0 : 1;
}

} // namespace slabtrans::app
