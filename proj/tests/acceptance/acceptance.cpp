// Acceptance checks. Prints one line per criterion:
//   criterion N PASS: <detail>   or   criterion N FAIL: <detail>
// Usage: acceptance [--only N[,M...]]

#include "milne_oracle.hpp"

#include "slabtrans/coupled.hpp"
#include "slabtrans/experiments.hpp"
#include "slabtrans/heat.hpp"
#include "slabtrans/kinetic.hpp"
#include "slabtrans_app/config.hpp"
#include "slabtrans_app/runner.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace slabtrans;

namespace
{

struct Outcome
{
  bool pass = true;
  std::string detail;
};

std::string
fmt(const char* f, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string
sci(double v)
{
  return fmt("%.3e", v);
}

const CollisionOperator&
paper_op()
{
  static const CollisionOperator op =
    build_collision_operator(paper_kernel(), 31, build_angular_grid(32));
  return op;
}

const CollisionOperator&
iso_op()
{
  static const CollisionOperator op =
    build_collision_operator(isotropic_kernel(), 31, build_angular_grid(32));
  return op;
}

int
threads()
{
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

const std::vector<double> pure_eps{1.0 / 16, 1.0 / 32, 1.0 / 64};

// The pure suite is shared by criteria 5 to 7.
const ErrorReport&
pure_report()
{
  static const ErrorReport report = [] {
    const std::vector<std::string> ids{"pure1", "pure2", "pure3", "pure4", "pure5", "pure6"};
    return run_pure_suite(ids, pure_eps, paper_op(), PureOptions{}, threads());
  }();
  return report;
}

std::vector<const ErrorEntry*>
rows_of(const std::string& id)
{
  std::vector<const ErrorEntry*> rows;
  for (const auto& e : pure_report().entries)
    if (e.case_id == id)
      rows.push_back(&e);
  return rows; // decreasing eps
}

Outcome
criterion1()
{
  const auto& op = paper_op();
  const double lam1 = op.eigenvalues()[1];
  const double d = op.diffusion_coefficient();

  // Brute force: nodal L on 64 Gauss points, solve L h = mu with <h> = 0 by
  // appending the mean constraint, then D = <mu h>.
  const auto g = build_angular_grid(64);
  const auto kernel = paper_kernel();
  const int n = static_cast<int>(g.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 1, n + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
      a(i, j) = (i == j ? 1.0 : 0.0) - g.weights[j] * kernel.evaluate(g.nodes[i], g.nodes[j]);
    a(i, n) = 1.0;
    a(n, i) = 0.5 * g.weights[i];
    rhs[i] = g.nodes[i];
  }
  const Eigen::VectorXd h = a.fullPivLu().solve(rhs);
  double d_brute = 0.0, lam_brute = 0.0;
  for (int i = 0; i < n; ++i)
    d_brute += 0.5 * g.weights[i] * g.nodes[i] * h[i];
  // Rayleigh quotient of mu against the nodal operator.
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i)
  {
    double lmu = g.nodes[i];
    for (int j = 0; j < n; ++j)
      lmu -= g.weights[j] * kernel.evaluate(g.nodes[i], g.nodes[j]) * g.nodes[j];
    num += g.weights[i] * g.nodes[i] * lmu;
    den += g.weights[i] * g.nodes[i] * g.nodes[i];
  }
  lam_brute = num / den;

  Outcome o;
  const double tol = 1e-10;
  o.pass = std::abs(lam1 - 5.0 / 6.0) <= tol && std::abs(d - 0.4) <= tol &&
           std::abs(lam_brute - 5.0 / 6.0) <= tol && std::abs(d_brute - 0.4) <= tol;
  o.detail = "lambda_1 = " + fmt("%.15f", lam1) + ", D = " + fmt("%.15f", d) +
             ", brute force lambda_1 = " + fmt("%.15f", lam_brute) + ", D = " + fmt("%.15f", d_brute);
  return o;
}

Outcome
criterion2()
{
  Outcome o;
  int checked = 0;
  for (const auto* op : {&paper_op(), &iso_op()})
    for (int n : {4, 8, 12, 16, 24})
      for (double alpha : {0.05, 0.1, 0.2})
      {
        const HalfSpaceSystem s(*op, n, alpha);
        const auto c = s.counts();
        ++checked;
        if (c.positive != n || c.zero != 1 || c.negative != n)
        {
          o.pass = false;
          o.detail += op->kernel().name + " N=" + std::to_string(n) + " alpha=" + fmt("%g", alpha) +
                      " counts (" + std::to_string(c.positive) + "," + std::to_string(c.zero) +
                      "," + std::to_string(c.negative) + "); ";
        }
      }
  if (o.pass)
    o.detail = std::to_string(checked) + " systems with counts (N, 1, N)";
  return o;
}

Outcome
criterion3()
{
  Outcome o;
  std::ostringstream d;

  const HalfSpaceSystem s12(paper_op(), 12, 0.1);
  const auto q = gauss_legendre(32, -1.0, 0.0);
  double const_err = 0.0;
  for (double c : {1.0, -0.4, 2.5})
  {
    const auto sol = s12.recover_solution([c](double) { return c; }, q.nodes);
    const_err = std::max(const_err, std::abs(sol.theta_inf - c));
    for (double v : sol.outgoing)
      const_err = std::max(const_err, std::abs(v - c));
  }
  o.pass = const_err <= 1e-8;
  d << "constant data max error " << sci(const_err);

  // Net flux vanishes to round-off at every N; the N-convergence is carried by
  // the mismatch between the Galerkin trace and the incoming data.
  auto f0 = [](double mu) { return mu; };
  const auto fine = gauss_legendre(64, 0.0, 1.0);
  double prev = 1e300, max_flux = 0.0;
  bool monotone = true;
  d << "; mismatch over N=8,16,24:";
  for (int n : {8, 16, 24})
  {
    const HalfSpaceSystem s(paper_op(), n, 0.1);
    const auto sol = s.recover_solution(f0, q.nodes);
    for (double y : {0.0, 1.0, 5.0})
      max_flux = std::max(max_flux, std::abs(s.net_flux(sol, y)));
    double m = 0.0;
    for (std::size_t j = 0; j < fine.size(); ++j)
    {
      const double mu = fine.nodes[j];
      const double e = s.evaluate_profile(sol, 0.0, mu) - f0(mu);
      m += fine.weights[j] * mu * e * e;
    }
    m = std::sqrt(m);
    d << " " << sci(m);
    monotone = monotone && m < prev;
    prev = m;
  }
  d << "; max |net flux| " << sci(max_flux);
  o.pass = o.pass && monotone && max_flux <= 1e-12;

  const HalfSpaceSystem a(paper_op(), 16, 0.05);
  const HalfSpaceSystem b(paper_op(), 16, 0.2);
  auto g0 = [](double mu) { return std::exp(mu) - mu * mu; };
  const auto sa = a.recover_solution(g0, q.nodes);
  const auto sb = b.recover_solution(g0, q.nodes);
  double alpha_diff = std::abs(sa.theta_inf - sb.theta_inf);
  for (std::size_t j = 0; j < q.size(); ++j)
    alpha_diff = std::max(alpha_diff, std::abs(sa.outgoing[j] - sb.outgoing[j]));
  d << "; alpha 0.05 vs 0.2 trace difference " << sci(alpha_diff);
  o.pass = o.pass && alpha_diff <= 1e-6;
  o.detail = d.str();
  return o;
}

Outcome
criterion4()
{
  const double eta = end_state_eta(iso_op(), 48, 0.1);
  const double oracle =
    testing::milne_end_state([](double mu) { return mu; }, 30.0, 600, 16);
  Outcome o;
  o.pass = std::abs(eta - oracle) <= 1e-4;
  o.detail = "spectral eta = " + fmt("%.9f", eta) + ", discrete ordinates = " +
             fmt("%.9f", oracle) + ", difference " + sci(std::abs(eta - oracle));
  return o;
}

bool
strictly_decreasing(const std::vector<double>& v)
{
  for (std::size_t k = 1; k < v.size(); ++k)
    if (!(v[k] < v[k - 1]))
      return false;
  return true;
}

Outcome
criterion5()
{
  Outcome o;
  std::ostringstream d;
  for (const char* id : {"pure1", "pure2", "pure3", "pure4"})
  {
    std::vector<double> eps, err;
    for (const auto* r : rows_of(id))
    {
      eps.push_back(r->eps);
      err.push_back(r->e_theta_inner);
    }
    const double slope = convergence_slope(eps, err).slope;
    const bool ok = strictly_decreasing(err) && slope >= 0.4;
    o.pass = o.pass && ok;
    d << id << " inner E_theta";
    for (double e : err)
      d << " " << sci(e);
    d << " slope " << fmt("%.3f", slope) << (ok ? "" : " (fails)") << "; ";
  }
  o.detail = d.str();
  return o;
}

Outcome
criterion6()
{
  std::vector<double> eps, err;
  for (const auto* r : rows_of("pure6"))
  {
    eps.push_back(r->eps);
    err.push_back(r->e_theta);
  }
  const double slope = convergence_slope(eps, err).slope;
  Outcome o;
  o.pass = strictly_decreasing(err) && slope >= 0.3;
  std::ostringstream d;
  d << "pure6 E_theta";
  for (double e : err)
    d << " " << sci(e);
  d << " slope " << fmt("%.3f", slope);
  o.detail = d.str();
  return o;
}

Outcome
criterion7()
{
  Outcome o;
  int rows = 0;
  auto check = [&](const ErrorEntry& e) {
    ++rows;
    if (!(e.e_theta <= e.e_f) || !(e.e_theta_inner <= e.e_f_inner))
    {
      o.pass = false;
      o.detail += e.case_id + " eps=" + fmt("%g", e.eps) + " violates the ordering; ";
    }
  };
  for (const auto& e : pure_report().entries)
    check(e);
  for (const char* id : {"coupled1", "coupled2", "coupled3"})
  {
    const auto spec = make_case(id, end_state_eta(paper_op(), 16, 0.1));
    check(run_coupled_case(spec, paper_op(), 1.0 / 32).errors);
  }
  if (o.pass)
    o.detail = std::to_string(rows) + " error rows satisfy E_theta <= E_f and inner variants";
  return o;
}

Outcome
criterion8()
{
  Outcome o;
  std::ostringstream d;
  const double eta = end_state_eta(paper_op(), 16, 0.1);
  for (const char* id : {"coupled1", "coupled2", "coupled3"})
  {
    const auto spec = make_case(id, eta);
    const double e32 = run_coupled_case(spec, paper_op(), 1.0 / 32).errors.e_theta;
    const double e64 = run_coupled_case(spec, paper_op(), 1.0 / 64).errors.e_theta;
    o.pass = o.pass && e64 < e32;
    d << id << " E_theta " << sci(e32) << " -> " << sci(e64) << "; ";
  }
  auto c = [](double, double) { return 0.75; };
  const auto run = run_coupled({{c, c, c}, {}}, paper_op(), 1.0 / 32, 0.1);
  double dev = 0.0;
  for (double v : run.final_state().kinetic.f)
    dev = std::max(dev, std::abs(v - 0.75));
  for (double v : run.final_state().heat.theta)
    dev = std::max(dev, std::abs(v - 0.75));
  o.pass = o.pass && dev <= 1e-8;
  d << "constant-data deviation " << sci(dev);
  o.detail = d.str();
  return o;
}

Outcome
criterion9()
{
  Outcome o;
  std::ostringstream d;
  const auto spec = make_case("coupled3", end_state_eta(paper_op(), 16, 0.1));
  const std::vector<double> times{0.01, 0.1, 0.25, 0.5};
  for (double eps : {1.0 / 32, 1.0 / 64})
  {
    const auto r = run_coupled_case(spec, paper_op(), eps, CoupledCaseOptions{}, times);
    std::map<double, double> e;
    for (std::size_t k = 0; k < r.times.size(); ++k)
      e[r.times[k]] = r.e_theta_time[k];
    const bool early = e.at(0.1) < e.at(0.01);
    const double ratio = e.at(0.5) / e.at(0.25);
    const bool late = ratio <= 2.5;
    o.pass = o.pass && early && late;
    d << "eps=1/" << static_cast<int>(std::lround(1.0 / eps)) << ": E(0.01) " << sci(e.at(0.01))
      << ", E(0.1) " << sci(e.at(0.1)) << (early ? "" : " (not below E(0.01))")
      << ", E(0.5)/E(0.25) " << fmt("%.3f", ratio) << (late ? "" : " (above 2.5)") << "; ";
  }
  o.detail = d.str();
  return o;
}

Outcome
criterion10()
{
  Outcome o;
  std::ostringstream d;
  double final32 = 0.0, final64 = 0.0;
  for (double eps : {1.0 / 32, 1.0 / 64})
  {
    const auto r = run_stability(paper_op(), eps, 0.1);
    const double fin = r.deviation.back();
    o.pass = o.pass && fin < r.max_deviation;
    (eps > 0.02 ? final32 : final64) = fin;
    d << "eps=1/" << static_cast<int>(std::lround(1.0 / eps)) << ": deviation at T " << sci(fin)
      << ", max " << sci(r.max_deviation) << "; ";
  }
  o.pass = o.pass && final64 < final32;
  d << (final64 < final32 ? "smaller eps gives smaller deviation" : "smaller eps does not reduce deviation");
  o.detail = d.str();
  return o;
}

std::map<std::string, std::string>
read_tree(const std::filesystem::path& dir)
{
  std::map<std::string, std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
  {
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    files[entry.path().filename().string()] = os.str();
  }
  return files;
}

Outcome
criterion11()
{
  Outcome o;
  std::ostringstream d;
  auto fail = [&] { o.pass = false; };

  // Constant fixed points.
  {
    const HeatProblem p{HeatGrid(-1, 1, 200), 0.4, [](double) { return 0.3; },
                        [](double) { return 0.3; }, [](double) { return 0.3; }};
    const auto states = run_heat(p, 0.05, 1e-3);
    double dev = 0.0;
    for (double v : states.back().theta)
      dev = std::max(dev, std::abs(v - 0.3));
    if (dev > 1e-14)
      fail();
    d << "heat constant " << sci(dev);
  }
  {
    auto c = [](double, double) { return 0.3; };
    KineticOptions ko;
    ko.dx = 5e-3;
    const auto r = run_reference({c, c, c}, paper_op(), 1.0 / 16, SigmaProfile::uniform(1.0), -1,
                                 1, 0.02, ko);
    double dev = 0.0;
    for (double v : r.final_state().f)
      dev = std::max(dev, std::abs(v - 0.3));
    if (dev > 1e-13)
      fail();
    d << ", kinetic constant " << sci(dev);
  }
  {
    auto c = [](double, double) { return 0.3; };
    const auto r = run_coupled({{c, c, c}, {}}, paper_op(), 1.0 / 16, 0.02);
    double dev = 0.0;
    for (double v : r.final_state().kinetic.f)
      dev = std::max(dev, std::abs(v - 0.3));
    for (double v : r.final_state().heat.theta)
      dev = std::max(dev, std::abs(v - 0.3));
    if (dev > 1e-12)
      fail();
    d << ", coupled constant " << sci(dev);
  }
  // Affine steady state of the heat scheme.
  {
    const HeatGrid g(0, 1, 100);
    auto line = [](double x) { return 1.0 - 2.0 * x; };
    const HeatProblem p{g, 0.4, [&](double) { return line(g.center(0)); },
                        [&](double) { return line(g.center(99)); }, line};
    const auto s = run_heat(p, 0.1, 1e-3).back();
    double dev = 0.0;
    for (int i = 0; i < g.cells; ++i)
      dev = std::max(dev, std::abs(s.theta[i] - line(g.center(i))));
    if (dev > 1e-12)
      fail();
    d << ", heat affine " << sci(dev);
  }
  // Collision-step mean conservation.
  {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    const KineticGrid g(-1, 1, 100, paper_op().grid());
    auto s = make_kinetic_state(g, [&](double, double) { return u(rng); });
    const auto before = cell_means(s, g.angles);
    collide_step(s, g, 0.05, 1e-3, SigmaProfile::uniform(1.0), paper_op());
    const auto after = cell_means(s, g.angles);
    double dev = 0.0;
    for (std::size_t i = 0; i < before.size(); ++i)
      dev = std::max(dev, std::abs(after[i] - before[i]));
    if (dev > 1e-14)
      fail();
    d << ", collision mean drift " << sci(dev);
  }
  // TVD advection on monotone data.
  {
    const KineticGrid g(0, 1, 200, build_angular_grid(16));
    auto s = make_kinetic_state(g, [](double x, double) { return 1.0 / (1.0 + std::exp(40 * (x - 0.5))); });
    const std::vector<double> left(8, 1.0), right(8, 0.0);
    bool tvd = true;
    // Variation of the sequence (inflow value, cells...) taken in the upwind
    // direction; the inflow value belongs to the problem data.
    auto tv = [&](int j) {
      const auto v = s.direction(j);
      const bool from_left = j >= g.half();
      double t = std::abs(from_left ? v.front() - left[0] : v.back() - right[0]);
      for (std::size_t i = 1; i < v.size(); ++i)
        t += std::abs(v[i] - v[i - 1]);
      return t;
    };
    for (int k = 0; k < 150; ++k)
    {
      std::vector<double> before;
      for (int j = 0; j < g.directions(); ++j)
        before.push_back(tv(j));
      advect_step(s, g, 1.0, 0.45 * g.dx(), left, right);
      for (int j = 0; j < g.directions(); ++j)
        tvd = tvd && tv(j) <= before[j] + 1e-12;
    }
    if (!tvd)
      fail();
    d << ", TVD " << (tvd ? "held" : "violated");
  }
  // Determinism of the command-line outputs.
  {
    namespace fs = std::filesystem;
    const auto base = fs::temp_directory_path() / "slabtrans_acceptance_determinism";
    fs::remove_all(base);
    auto config = app::default_config();
    app::set_cases(config, "pure1,coupled1,stability", "acceptance");
    app::set_eps(config, "1/8", "acceptance");
    config.plots = true;
    std::ostringstream log;
    config.out_dir = (base / "a").string();
    const int ra = app::run(config, log);
    config.out_dir = (base / "b").string();
    config.threads = threads();
    const int rb = app::run(config, log);
    bool same = ra == 0 && rb == 0;
    std::size_t count = 0;
    if (same)
    {
      const auto a = read_tree(base / "a");
      const auto b = read_tree(base / "b");
      same = a == b && !a.empty();
      count = a.size();
    }
    fs::remove_all(base);
    if (!same)
      fail();
    d << ", CLI outputs " << (same ? "identical" : "differ") << " across runs (" << count << " files)";
  }
  o.detail = d.str();
  return o;
}

} // namespace

int
main(int argc, char** argv)
{
  std::set<int> only;
  for (int k = 1; k < argc; ++k)
  {
    if (std::strcmp(argv[k], "--only") == 0 && k + 1 < argc)
    {
      std::stringstream ss(argv[++k]);
      std::string item;
      while (std::getline(ss, item, ','))
        only.insert(std::stoi(item));
    }
    else
    {
      std::cerr << "usage: acceptance [--only N[,M...]]\n";
      return 2;
    }
  }

  const std::vector<std::function<Outcome()>> criteria{
    criterion1, criterion2, criterion3, criterion4,  criterion5, criterion6,
    criterion7, criterion8, criterion9, criterion10, criterion11};
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k)
  {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && !only.count(id))
      continue;
    Outcome o;
    try
    {
      o = criteria[k]();
    }
    catch (const std::exception& e)
    {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << "criterion " << id << (o.pass ? " PASS: " : " FAIL: ") << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
