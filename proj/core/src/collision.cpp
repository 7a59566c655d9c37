#include "slabtrans/collision.hpp"

#include "slabtrans/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace slabtrans
{

ScatteringKernel
paper_kernel()
{
  return ScatteringKernel{
    "paper", [](double mu, double mup) { return 0.5 + 0.25 * mu * mup; }, {1.0, 1.0 / 6.0}};
}

ScatteringKernel
isotropic_kernel()
{
  return ScatteringKernel{"isotropic", [](double, double) { return 0.5; }, {1.0}};
}

ScatteringKernel
legendre_series_kernel(std::vector<double> coefficients)
{
  if (coefficients.empty())
    throw InvalidKernel("legendre-series kernel needs at least one coefficient");
  auto eval = [b = coefficients](double mu, double mup)
  {
    const int deg = static_cast<int>(b.size()) - 1;
    const auto p = normalized_legendre(deg, mu);
    const auto q = normalized_legendre(deg, mup);
    double s = 0.0;
    for (int n = 0; n <= deg; ++n)
      s += b[n] * p[n] * q[n];
    return 0.5 * s;
  };
  return ScatteringKernel{"legendre-series", std::move(eval), std::move(coefficients)};
}

ScatteringKernel
make_kernel(const std::string& name, std::span<const double> params)
{
  if (name == "paper")
    return paper_kernel();
  if (name == "isotropic")
    return isotropic_kernel();
  if (name == "legendre-series")
    return legendre_series_kernel(std::vector<double>(params.begin(), params.end()));
  throw InvalidKernel("unknown kernel '" + name + "'");
}

CollisionOperator::CollisionOperator(ScatteringKernel kernel, int degree, AngularGrid grid)
  : kernel_(std::move(kernel)), degree_(degree), grid_(std::move(grid))
{
  const int n = static_cast<int>(grid_.size());
  if (n < 2)
    throw InvalidArgument("CollisionOperator: angular grid too small");
  if (degree_ < 3 || degree_ > n - 1)
  {
    std::ostringstream os;
    os << "CollisionOperator: degree M = " << degree_ << " outside [3, " << n - 1 << "]";
    throw InvalidArgument(os.str());
  }
  if (!kernel_.evaluate)
    throw InvalidKernel("kernel '" + kernel_.name + "' has no evaluator");

  Eigen::MatrixXd kmat(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      kmat(j, l) = kernel_.evaluate(grid_.nodes[j], grid_.nodes[l]);

  const double kmax = std::max(1.0, kmat.cwiseAbs().maxCoeff());
  for (int j = 0; j < n; ++j)
  {
    double row = 0.0;
    for (int l = 0; l < n; ++l)
    {
      if (std::abs(kmat(j, l) - kmat(l, j)) > 1e-13 * kmax)
        throw InvalidKernel("kernel '" + kernel_.name + "' is not symmetric");
      if (kmat(j, l) < -1e-14 * kmax)
        throw InvalidKernel("kernel '" + kernel_.name + "' is negative");
      row += grid_.weights[l] * kmat(j, l);
    }
    if (std::abs(row - 1.0) > 1e-12)
    {
      std::ostringstream os;
      os << "kernel '" << kernel_.name << "' is not normalized: int kappa(mu, .) = " << row
         << " at mu = " << grid_.nodes[j];
      throw InvalidKernel(os.str());
    }
  }

  legendre_at_nodes_.resize(n, n);
  for (int j = 0; j < n; ++j)
  {
    const auto p = normalized_legendre(n - 1, grid_.nodes[j]);
    for (int k = 0; k < n; ++k)
      legendre_at_nodes_(k, j) = p[k];
  }

  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(grid_.weights.data(), n);
  const Eigen::MatrixXd pw = legendre_at_nodes_ * w.asDiagonal();
  full_matrix_ = Eigen::MatrixXd::Identity(n, n) - 0.5 * pw * kmat * pw.transpose();
  full_matrix_ = 0.5 * (full_matrix_ + full_matrix_.transpose()).eval();
  // Null space is exactly the constants.
  full_matrix_.row(0).setZero();
  full_matrix_.col(0).setZero();
  for (int k = degree_ + 1; k < n; ++k)
  {
    full_matrix_.row(k).setZero();
    full_matrix_.col(k).setZero();
    full_matrix_(k, k) = 1.0;
  }
  matrix_ = full_matrix_.topLeftCorner(degree_ + 1, degree_ + 1);

  // Eigen-decomposition on the resolved block n = 1..M.
  eigenvectors_ = Eigen::MatrixXd::Identity(n, n);
  full_eigenvalues_ = full_matrix_.diagonal();
  const auto block = full_matrix_.block(1, 1, degree_, degree_);
  const double off = (block - Eigen::MatrixXd(block.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
  if (off > 1e-12)
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
    eigenvectors_.block(1, 1, degree_, degree_) = es.eigenvectors();
    full_eigenvalues_.segment(1, degree_) = es.eigenvalues();
  }
  full_eigenvalues_(0) = 0.0;
  eigenvalues_.assign(full_eigenvalues_.data(), full_eigenvalues_.data() + degree_ + 1);

  spectral_gap_ = *std::min_element(eigenvalues_.begin() + 1, eigenvalues_.end());
  if (!(spectral_gap_ > 1e-12))
  {
    std::ostringstream os;
    os << "kernel '" << kernel_.name << "' has no spectral gap (min lambda_n = " << spectral_gap_
       << ")";
    throw InvalidKernel(os.str());
  }

  std::vector<double> mu(grid_.nodes);
  inverse_mu_ = to_coefficients(apply_inverse(mu));
  const auto h = to_nodal(inverse_mu_);
  std::vector<double> muh(n);
  for (int j = 0; j < n; ++j)
    muh[j] = grid_.nodes[j] * h[j];
  diffusion_coefficient_ = mean(grid_, muh);

  // Group eigenvalues; the most common one becomes the bulk rate.
  std::map<long long, int> counts;
  for (int k = 0; k < n; ++k)
    ++counts[std::llround(full_eigenvalues_(k) * 1e12)];
  const auto bulk = std::max_element(counts.begin(), counts.end(),
                                     [](auto& a, auto& b) { return a.second < b.second; });
  relaxation_.bulk_eigenvalue = static_cast<double>(bulk->first) * 1e-12;
  for (int k = 0; k < n; ++k)
  {
    if (std::llround(full_eigenvalues_(k) * 1e12) == bulk->first)
      continue;
    const Eigen::VectorXd u = legendre_at_nodes_.transpose() * eigenvectors_.col(k);
    std::vector<double> mode(u.data(), u.data() + n);
    std::vector<double> proj(n);
    for (int j = 0; j < n; ++j)
      proj[j] = 0.5 * grid_.weights[j] * mode[j];
    relaxation_.eigenvalues.push_back(full_eigenvalues_(k));
    relaxation_.modes.push_back(std::move(mode));
    relaxation_.projectors.push_back(std::move(proj));
  }
  // Exact bulk value when it came from a clean diagonal.
  for (int k = 0; k < n; ++k)
    if (std::llround(full_eigenvalues_(k) * 1e12) == bulk->first)
    {
      relaxation_.bulk_eigenvalue = full_eigenvalues_(k);
      break;
    }
}

std::vector<double>
CollisionOperator::to_coefficients(std::span<const double> nodal) const
{
  const auto n = static_cast<Eigen::Index>(grid_.size());
  if (static_cast<Eigen::Index>(nodal.size()) != n)
    throw InvalidArgument("to_coefficients: sample count does not match grid");
  Eigen::VectorXd f(n);
  for (Eigen::Index j = 0; j < n; ++j)
    f(j) = 0.5 * grid_.weights[j] * nodal[j];
  const Eigen::VectorXd c = legendre_at_nodes_ * f;
  return {c.data(), c.data() + n};
}

std::vector<double>
CollisionOperator::to_nodal(std::span<const double> coefficients) const
{
  const auto n = static_cast<Eigen::Index>(grid_.size());
  if (static_cast<Eigen::Index>(coefficients.size()) != n)
    throw InvalidArgument("to_nodal: coefficient count does not match grid");
  const Eigen::VectorXd f =
    legendre_at_nodes_.transpose() * Eigen::Map<const Eigen::VectorXd>(coefficients.data(), n);
  return {f.data(), f.data() + n};
}

double
CollisionOperator::evaluate_expansion(std::span<const double> coefficients, double mu) const
{
  if (coefficients.empty())
    return 0.0;
  const auto p = normalized_legendre(static_cast<int>(coefficients.size()) - 1, mu);
  double s = 0.0;
  for (std::size_t k = 0; k < coefficients.size(); ++k)
    s += coefficients[k] * p[k];
  return s;
}

std::vector<double>
CollisionOperator::apply(std::span<const double> f) const
{
  if (f.size() != grid_.size())
    throw InvalidArgument("apply: sample count does not match angular grid");
  const auto c = to_coefficients(f);
  const Eigen::VectorXd lc =
    full_matrix_ * Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
  return to_nodal(std::span<const double>(lc.data(), static_cast<std::size_t>(lc.size())));
}

std::vector<double>
CollisionOperator::apply_inverse(std::span<const double> g, double tol_mean) const
{
  if (g.size() != grid_.size())
    throw InvalidArgument("apply_inverse: sample count does not match angular grid");
  auto c = to_coefficients(g);
  if (std::abs(c[0]) > tol_mean)
  {
    std::ostringstream os;
    os << "apply_inverse: <g> = " << c[0] << " is not zero (tolerance " << tol_mean << ")";
    throw NotInRange(os.str());
  }
  const auto n = static_cast<Eigen::Index>(c.size());
  Eigen::Map<Eigen::VectorXd> cv(c.data(), n);
  Eigen::VectorXd modal = eigenvectors_.transpose() * cv;
  modal(0) = 0.0;
  for (Eigen::Index k = 1; k < n; ++k)
    modal(k) /= full_eigenvalues_(k);
  const Eigen::VectorXd h = eigenvectors_ * modal;
  return to_nodal(std::span<const double>(h.data(), static_cast<std::size_t>(n)));
}

void
CollisionOperator::relax(std::span<double> f, double tau) const
{
  if (f.size() != grid_.size())
    throw InvalidArgument("relax: sample count does not match angular grid");
  const auto& r = relaxation_;
  const double bulk = std::exp(-tau * r.bulk_eigenvalue);
  std::vector<double> amp(r.modes.size());
  for (std::size_t m = 0; m < r.modes.size(); ++m)
  {
    double a = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j)
      a += r.projectors[m][j] * f[j];
    amp[m] = a * (std::exp(-tau * r.eigenvalues[m]) - bulk);
  }
  for (std::size_t j = 0; j < f.size(); ++j)
  {
    double v = bulk * f[j];
    for (std::size_t m = 0; m < r.modes.size(); ++m)
      v += amp[m] * r.modes[m][j];
    f[j] = v;
  }
}

CollisionOperator
build_collision_operator(ScatteringKernel kernel, int degree, const AngularGrid& grid)
{
  return CollisionOperator(std::move(kernel), degree, grid);
}

} // namespace slabtrans
