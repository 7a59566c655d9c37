#include "slabtrans/halfspace.hpp"

#include "slabtrans/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace slabtrans
{

HalfSpaceBasis::HalfSpaceBasis(int order, int quadrature_points)
  : order_(order), quadrature_(gauss_legendre(quadrature_points, 0.0, 1.0))
{
  if (order < 2)
    throw InvalidArgument("HalfSpaceBasis: order N must be at least 2");
}

Eigen::VectorXd
HalfSpaceBasis::evaluate(double mu) const
{
  const double s = std::abs(mu);
  const auto phi = half_range_legendre(order_, s);
  const double odd_sign = mu < 0.0 ? -1.0 : 1.0;
  Eigen::VectorXd v(size());
  for (int k = 0; k <= order_; ++k)
    v(k) = odd_sign * phi[k];
  for (int k = 0; k < order_; ++k)
    v(order_ + 1 + k) = phi[k];
  return v;
}

HalfSpaceSystem::HalfSpaceSystem(const CollisionOperator& op, int order, double damping,
                                 int quadrature)
  : basis_(order, quadrature > 0 ? quadrature : std::max(2 * order + 8, 32)), damping_(damping)
{
  if (!(damping > 0.0))
    throw InvalidArgument("HalfSpaceSystem: damping alpha must be positive");

  const int n = basis_.size();
  const int nn = order;
  const auto& q = basis_.quadrature();
  const int nq = static_cast<int>(q.size());

  // Composite rule on [-1, 1]: first -s_a then +s_a.
  const int nc = 2 * nq;
  Eigen::VectorXd mu(nc), wc(nc);
  for (int a = 0; a < nq; ++a)
  {
    mu(a) = -q.nodes[a];
    mu(nq + a) = q.nodes[a];
    wc(a) = q.weights[a];
    wc(nq + a) = q.weights[a];
  }
  Eigen::MatrixXd psi(nc, n);
  for (int a = 0; a < nc; ++a)
    psi.row(a) = basis_.evaluate(mu(a)).transpose();

  const Eigen::VectorXd half_w = 0.5 * wc;
  flux_matrix_ = psi.transpose() * (half_w.cwiseProduct(mu)).asDiagonal() * psi;

  Eigen::MatrixXd kmat(nc, nc);
  const auto& kernel = op.kernel();
  for (int a = 0; a < nc; ++a)
    for (int b = 0; b < nc; ++b)
      kmat(a, b) = kernel.evaluate(mu(a), mu(b));

  const Eigen::MatrixXd dpsi = wc.asDiagonal() * psi;
  Eigen::MatrixXd bmat =
    psi.transpose() * half_w.asDiagonal() * psi - 0.5 * dpsi.transpose() * kmat * dpsi;

  Eigen::VectorXd h(nc);
  const auto& hcoef = op.inverse_mu_coefficients();
  for (int a = 0; a < nc; ++a)
    h(a) = op.evaluate_expansion(hcoef, mu(a));
  const Eigen::VectorXd u = psi.transpose() * half_w.cwiseProduct(mu);
  const Eigen::VectorXd v = psi.transpose() * half_w.cwiseProduct(mu).cwiseProduct(h);
  bmat += damping_ * (u * u.transpose() + v * v.transpose());
  collision_matrix_ = 0.5 * (bmat + bmat.transpose());
  flux_matrix_ = 0.5 * (flux_matrix_ + flux_matrix_.transpose()).eval();
  flux_covector_ = u;

  // Half-range flux pairing int_0^1 mu phi_i phi_j, degrees 0..N.
  Eigen::MatrixXd phi(nq, nn + 1);
  for (int a = 0; a < nq; ++a)
  {
    const auto p = half_range_legendre(nn, q.nodes[a]);
    for (int k = 0; k <= nn; ++k)
      phi(a, k) = p[k];
  }
  Eigen::VectorXd wmu(nq);
  for (int a = 0; a < nq; ++a)
    wmu(a) = q.weights[a] * q.nodes[a];
  const Eigen::MatrixXd gram_mu = phi.transpose() * wmu.asDiagonal() * phi;
  half_range_flux_ = 2.0 * gram_mu;

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
    flux_matrix_, collision_matrix_, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (ges.info() != Eigen::Success)
    throw DegenerateSystem("HalfSpaceSystem: generalized eigensolve failed");
  eigenvalues_ = -ges.eigenvalues();
  eigenvectors_ = ges.eigenvectors();

  zero_tolerance_ = 1e-9 * eigenvalues_.cwiseAbs().maxCoeff();
  std::vector<int> excluded;
  for (int m = 0; m < n; ++m)
  {
    const double lam = eigenvalues_(m);
    if (lam > zero_tolerance_)
    {
      ++counts_.positive;
      excluded.push_back(m);
    }
    else if (lam < -zero_tolerance_)
    {
      ++counts_.negative;
      decaying_.push_back(m);
    }
    else
    {
      ++counts_.zero;
      excluded.push_back(m);
    }
  }
  if (counts_.positive != nn || counts_.zero != 1 || counts_.negative != nn)
  {
    std::ostringstream os;
    os << "HalfSpaceSystem: spectrum splits as (" << counts_.positive << ", " << counts_.zero
       << ", " << counts_.negative << "), expected (" << nn << ", 1, " << nn << "); eigenvalues:";
    for (int m = 0; m < n; ++m)
      os << ' ' << eigenvalues_(m);
    throw DegenerateSystem(os.str());
  }

  // Incoming conditions (rows 0..N-1) then mode exclusions (rows N..2N).
  constraint_.setZero(n, n);
  for (int j = 0; j < nn; ++j)
  {
    for (int k = 0; k <= nn; ++k)
      constraint_(j, k) = gram_mu(k, j);
    for (int k = 0; k < nn; ++k)
      constraint_(j, nn + 1 + k) = gram_mu(k, j);
  }
  for (std::size_t r = 0; r < excluded.size(); ++r)
    constraint_.row(nn + static_cast<int>(r)) =
      (collision_matrix_ * eigenvectors_.col(excluded[r])).transpose();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraint_);
  const auto& sv = svd.singularValues();
  condition_number_ = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                              : std::numeric_limits<double>::infinity();
  if (!(condition_number_ < 1e13))
  {
    std::ostringstream os;
    os << "HalfSpaceSystem: constraint matrix is singular (condition number " << condition_number_
       << ")";
    throw IllPosedDiscretization(os.str());
  }

  rhs_map_.resize(nn, nq);
  for (int j = 0; j < nn; ++j)
    for (int a = 0; a < nq; ++a)
      rhs_map_(j, a) = wmu(a) * phi(a, j);

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(constraint_);
  Eigen::MatrixXd lift = Eigen::MatrixXd::Zero(n, nq);
  lift.topRows(nn) = rhs_map_;
  solution_map_ = lu.solve(lift);

  g0_coefficients_ = solution_map_ * Eigen::VectorXd::Ones(nq);
  g0_flux_ = flux(g0_coefficients_);
  if (std::abs(g0_flux_) < 1e-12)
    throw IllPosedDiscretization("HalfSpaceSystem: <mu, g0(0)> vanishes; end state undefined");

  const Eigen::RowVectorXd w = flux_covector_.transpose() * solution_map_ / g0_flux_;
  end_state_weights_.assign(w.data(), w.data() + nq);
}

Eigen::VectorXd
HalfSpaceSystem::incoming_rhs(std::span<const double> f0) const
{
  if (static_cast<Eigen::Index>(f0.size()) != rhs_map_.cols())
    throw InvalidArgument("incoming data must be sampled on the half-space quadrature nodes");
  return rhs_map_ * Eigen::Map<const Eigen::VectorXd>(f0.data(), rhs_map_.cols());
}

Eigen::VectorXd
HalfSpaceSystem::solve_damped(std::span<const double> f0) const
{
  if (static_cast<Eigen::Index>(f0.size()) != solution_map_.cols())
    throw InvalidArgument("incoming data must be sampled on the half-space quadrature nodes");
  return solution_map_ * Eigen::Map<const Eigen::VectorXd>(f0.data(), solution_map_.cols());
}

namespace
{

std::vector<double>
sample(const std::vector<double>& nodes, const std::function<double(double)>& f)
{
  std::vector<double> v(nodes.size());
  std::transform(nodes.begin(), nodes.end(), v.begin(), f);
  return v;
}

} // namespace

Eigen::VectorXd
HalfSpaceSystem::solve_damped(const std::function<double(double)>& f0) const
{
  return solve_damped(sample(incoming_nodes(), f0));
}

double
HalfSpaceSystem::end_state(std::span<const double> f0) const
{
  if (f0.size() != end_state_weights_.size())
    throw InvalidArgument("incoming data must be sampled on the half-space quadrature nodes");
  double s = 0.0;
  for (std::size_t a = 0; a < f0.size(); ++a)
    s += end_state_weights_[a] * f0[a];
  return s;
}

double
HalfSpaceSystem::end_state(const std::function<double(double)>& f0) const
{
  return end_state(sample(incoming_nodes(), f0));
}

HalfSpaceSolution
HalfSpaceSystem::recover_solution(std::span<const double> f0,
                                  std::span<const double> outgoing_nodes) const
{
  HalfSpaceSolution sol;
  sol.coefficients = solve_damped(f0);
  sol.theta_inf = flux(sol.coefficients) / g0_flux_;
  sol.outgoing_nodes.assign(outgoing_nodes.begin(), outgoing_nodes.end());
  sol.outgoing.reserve(outgoing_nodes.size());
  for (double mu : outgoing_nodes)
  {
    const Eigen::VectorXd e = basis_.evaluate(mu);
    sol.outgoing.push_back(e.dot(sol.coefficients) -
                           sol.theta_inf * (e.dot(g0_coefficients_) - 1.0));
  }
  return sol;
}

HalfSpaceSolution
HalfSpaceSystem::recover_solution(const std::function<double(double)>& f0,
                                  std::span<const double> outgoing_nodes) const
{
  return recover_solution(sample(incoming_nodes(), f0), outgoing_nodes);
}

Eigen::VectorXd
HalfSpaceSystem::propagate(const Eigen::VectorXd& c0, double y) const
{
  if (y < 0.0)
    throw InvalidArgument("propagate: depth must be nonnegative");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(c0.size());
  const Eigen::VectorXd bc = collision_matrix_ * c0;
  for (int m : decaying_)
  {
    const double amp = eigenvectors_.col(m).dot(bc);
    c += amp * std::exp(y / eigenvalues_(m)) * eigenvectors_.col(m);
  }
  return c;
}

double
HalfSpaceSystem::evaluate_profile(const HalfSpaceSolution& solution, double y, double mu) const
{
  const Eigen::VectorXd e = basis_.evaluate(mu);
  const Eigen::VectorXd c = propagate(solution.coefficients, y);
  const Eigen::VectorXd g = propagate(g0_coefficients_, y);
  return e.dot(c) - solution.theta_inf * (e.dot(g) - 1.0);
}

double
HalfSpaceSystem::net_flux(const HalfSpaceSolution& solution, double y) const
{
  const Eigen::VectorXd c = propagate(solution.coefficients, y);
  const Eigen::VectorXd g = propagate(g0_coefficients_, y);
  return flux(c) - solution.theta_inf * flux(g);
}

double
HalfSpaceSystem::slowest_decay_rate() const
{
  double largest = 0.0;
  for (int m : decaying_)
    largest = std::max(largest, std::abs(eigenvalues_(m)));
  return 1.0 / largest;
}

double
HalfSpaceSystem::decay_rate(const HalfSpaceSolution& solution, double rel_tol) const
{
  const Eigen::VectorXd d = solution.coefficients - solution.theta_inf * g0_coefficients_;
  const Eigen::VectorXd bd = collision_matrix_ * d;
  double largest = 0.0;
  std::vector<double> amp(decaying_.size());
  for (std::size_t k = 0; k < decaying_.size(); ++k)
  {
    amp[k] = std::abs(eigenvectors_.col(decaying_[k]).dot(bd));
    largest = std::max(largest, amp[k]);
  }
  double rate = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < decaying_.size(); ++k)
    if (amp[k] > rel_tol * largest)
      rate = std::min(rate, 1.0 / std::abs(eigenvalues_(decaying_[k])));
  return rate;
}

std::vector<double>
AlbedoMap::apply(std::span<const double> incoming) const
{
  if (static_cast<Eigen::Index>(incoming.size()) != reflection.cols())
    throw InvalidArgument("AlbedoMap::apply: incoming sample count mismatch");
  const Eigen::VectorXd out =
    reflection * Eigen::Map<const Eigen::VectorXd>(incoming.data(), reflection.cols());
  return {out.data(), out.data() + out.size()};
}

double
AlbedoMap::theta(std::span<const double> incoming) const
{
  if (static_cast<Eigen::Index>(incoming.size()) != end_state.size())
    throw InvalidArgument("AlbedoMap::theta: incoming sample count mismatch");
  return end_state.dot(Eigen::Map<const Eigen::VectorXd>(incoming.data(), end_state.size()));
}

Eigen::MatrixXd
cubic_interpolation_matrix(std::span<const double> from, std::span<const double> to)
{
  const int n = static_cast<int>(from.size());
  if (n < 4)
    throw InvalidArgument("cubic_interpolation_matrix: need at least 4 source nodes");
  if (!std::is_sorted(from.begin(), from.end()))
    throw InvalidArgument("cubic_interpolation_matrix: source nodes must be ascending");

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(to.size()), n);
  for (std::size_t r = 0; r < to.size(); ++r)
  {
    const double t = to[r];
    const int upper = static_cast<int>(std::upper_bound(from.begin(), from.end(), t) - from.begin());
    const int start = std::clamp(upper - 2, 0, n - 4);
    for (int a = 0; a < 4; ++a)
    {
      double l = 1.0;
      for (int b = 0; b < 4; ++b)
        if (b != a)
          l *= (t - from[start + b]) / (from[start + a] - from[start + b]);
      m(static_cast<Eigen::Index>(r), start + a) = l;
    }
  }
  return m;
}

AlbedoMap
albedo_map(const HalfSpaceSystem& system, std::span<const double> incoming_nodes,
           std::span<const double> outgoing_nodes)
{
  for (double mu : incoming_nodes)
    if (!(mu > 0.0))
      throw InvalidArgument("albedo_map: incoming nodes must be positive");
  for (double mu : outgoing_nodes)
    if (!(mu < 0.0))
      throw InvalidArgument("albedo_map: outgoing nodes must be negative");

  const Eigen::MatrixXd interp = cubic_interpolation_matrix(incoming_nodes, system.incoming_nodes());
  const Eigen::MatrixXd cmap = system.solution_map() * interp;
  const auto& w = system.end_state_weights();
  const Eigen::RowVectorXd theta =
    Eigen::Map<const Eigen::RowVectorXd>(w.data(), static_cast<Eigen::Index>(w.size())) * interp;

  AlbedoMap map;
  map.incoming_nodes.assign(incoming_nodes.begin(), incoming_nodes.end());
  map.outgoing_nodes.assign(outgoing_nodes.begin(), outgoing_nodes.end());
  map.end_state = theta;
  map.reflection.resize(static_cast<Eigen::Index>(outgoing_nodes.size()),
                        static_cast<Eigen::Index>(incoming_nodes.size()));
  for (std::size_t r = 0; r < outgoing_nodes.size(); ++r)
  {
    const Eigen::VectorXd e = system.basis().evaluate(outgoing_nodes[r]);
    const double g0 = e.dot(system.g0_coefficients());
    map.reflection.row(static_cast<Eigen::Index>(r)) =
      e.transpose() * cmap - (g0 - 1.0) * theta;
  }
  return map;
}

double
end_state_eta(const CollisionOperator& op, int order, double damping)
{
  const HalfSpaceSystem system(op, order, damping);
  return system.end_state([](double mu) { return mu; });
}

} // namespace slabtrans
