#pragma once

#include "slabtrans/angular.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace slabtrans
{

/// Scattering kernel kappa(mu, mu') of the collision operator
///   L f = f - int_{-1}^{1} kappa(mu, mu') f(mu') dmu'.
/// When the kernel is a finite series kappa = 1/2 sum_n b_n p_n(mu) p_n(mu')
/// in normalized Legendre polynomials, `legendre_coefficients` holds b_n and
/// the eigenvalues are lambda_n = 1 - b_n.
struct ScatteringKernel
{
  std::string name;
  std::function<double(double, double)> evaluate;
  std::vector<double> legendre_coefficients;
};

/// kappa = 1/2 + mu mu' / 4.
ScatteringKernel paper_kernel();

/// kappa = 1/2.
ScatteringKernel isotropic_kernel();

/// kappa = 1/2 sum_n b_n p_n(mu) p_n(mu'); b_0 must be 1 for normalization.
ScatteringKernel legendre_series_kernel(std::vector<double> coefficients);

/// Kernel by configuration name: "paper", "isotropic" or "legendre-series"
/// (the latter takes its coefficient list from `params`).
ScatteringKernel make_kernel(const std::string& name, std::span<const double> params = {});

/// exp(-tau L) written as exp(-tau lambda_bulk) I plus a low-rank correction
/// over the eigenmodes whose eigenvalue differs from lambda_bulk.
struct RelaxationModes
{
  double bulk_eigenvalue = 1.0;
  std::vector<double> eigenvalues;
  /// nodal values of each retained eigenfunction
  std::vector<std::vector<double>> modes;
  /// quadrature covector giving the mode amplitude from nodal values
  std::vector<std::vector<double>> projectors;
};

/// Discrete collision operator on a Gauss-Legendre grid, represented in the
/// normalized Legendre basis p_0..p_M. Components above degree M are treated
/// as unscattered (eigenvalue 1), which is exact for kernels whose Legendre
/// degree does not exceed M. Immutable after construction.
class CollisionOperator
{
public:
  CollisionOperator(ScatteringKernel kernel, int degree, AngularGrid grid);

  const ScatteringKernel& kernel() const { return kernel_; }
  const AngularGrid& grid() const { return grid_; }
  int degree() const { return degree_; }

  /// <p_n, L p_m> for 0 <= n, m <= M.
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  /// lambda_0 = 0, lambda_1..lambda_M. Ordered by Legendre degree when the
  /// matrix is diagonal, ascending otherwise.
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }

  /// sigma_0 = min over n >= 1 of lambda_n.
  double spectral_gap() const { return spectral_gap_; }

  std::vector<double> apply(std::span<const double> f) const;

  /// Solves L h = g with <h> = 0. Throws NotInRange if |<g>| > tol_mean.
  std::vector<double> apply_inverse(std::span<const double> g, double tol_mean = 1e-10) const;

  /// <mu L^{-1} mu>, the coefficient of the limiting heat equation.
  double diffusion_coefficient() const { return diffusion_coefficient_; }

  std::vector<double> to_coefficients(std::span<const double> nodal) const;
  std::vector<double> to_nodal(std::span<const double> coefficients) const;

  /// sum_n c_n p_n(mu) at an arbitrary mu in [-1, 1].
  double evaluate_expansion(std::span<const double> coefficients, double mu) const;

  /// Legendre coefficients of L^{-1} mu.
  const std::vector<double>& inverse_mu_coefficients() const { return inverse_mu_; }

  const RelaxationModes& relaxation_modes() const { return relaxation_; }

  /// f <- exp(-tau L) f for one angular sample vector.
  void relax(std::span<double> f, double tau) const;

private:
  ScatteringKernel kernel_;
  int degree_;
  AngularGrid grid_;
  Eigen::MatrixXd legendre_at_nodes_; // (n_nodes x n_nodes), row k = p_k(mu_j)
  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd full_matrix_;       // n_nodes x n_nodes, identity above M
  Eigen::MatrixXd eigenvectors_;      // coefficient space, columns
  std::vector<double> eigenvalues_;   // size M + 1
  Eigen::VectorXd full_eigenvalues_;  // size n_nodes
  double spectral_gap_ = 0.0;
  double diffusion_coefficient_ = 0.0;
  std::vector<double> inverse_mu_;
  RelaxationModes relaxation_;
};

/// Validates the kernel on the grid and assembles the operator. Throws
/// InvalidKernel on symmetry, normalization, positivity or gap failures and
/// InvalidArgument when M is out of [3, n_nodes - 1].
CollisionOperator build_collision_operator(ScatteringKernel kernel, int degree,
                                           const AngularGrid& grid);

} // namespace slabtrans
