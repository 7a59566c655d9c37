#pragma once

#include "slabtrans/angular.hpp"
#include "slabtrans/collision.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

namespace slabtrans
{

/// Even/odd extended half-range Legendre basis. Coefficient vectors are laid
/// out as (c^O_1..c^O_{N+1}, c^E_1..c^E_N); phi_1 is the constant.
class HalfSpaceBasis
{
public:
  HalfSpaceBasis(int order, int quadrature_points);

  int order() const { return order_; }
  int size() const { return 2 * order_ + 1; }
  int odd_count() const { return order_ + 1; }
  int even_count() const { return order_; }

  /// Gauss rule on [0, 1] used for every half-range integral.
  const AngularGrid& quadrature() const { return quadrature_; }

  /// All 2N+1 basis functions at mu in [-1, 1].
  Eigen::VectorXd evaluate(double mu) const;

private:
  int order_;
  AngularGrid quadrature_;
};

/// Result of one half-space solve with the damping removed.
struct HalfSpaceSolution
{
  Eigen::VectorXd coefficients; ///< damped c(0)
  double theta_inf = 0.0;
  std::vector<double> outgoing_nodes; ///< mu_j < 0
  std::vector<double> outgoing;       ///< f(0, mu_j)
};

/// Galerkin discretization of
///   mu d/dy f + L f = 0, f(0, mu) = f0(mu) for mu > 0, f -> theta_inf,
/// solved through the damped operator
///   L^d f = L f + alpha mu <mu, f> + alpha mu h <mu h, f>,   h = L^{-1} mu,
/// whose solutions decay, followed by the recovery f = f~ - theta_inf (g0 - 1).
///
/// The Galerkin system reads Amu c' = -Bd c with Amu the (symmetric,
/// indefinite, rank 2N) flux pairing and Bd the SPD damped collision pairing.
/// The pencil Amu v = nu Bd v has real spectrum; we report lambda = -nu, so
/// mode amplitudes a_m = v_m^T Bd c behave like exp(y / lambda_m) and the
/// modes with lambda_m >= 0 (N growing plus the algebraic zero mode) are
/// excluded at y = 0.
///
/// Everything that depends only on (kernel, N, alpha) is computed once here;
/// a solve is then a matrix-vector product. Immutable and shareable.
class HalfSpaceSystem
{
public:
  struct Counts
  {
    int positive = 0;
    int zero = 0;
    int negative = 0;
  };

  HalfSpaceSystem(const CollisionOperator& op, int order, double damping, int quadrature = 0);

  const HalfSpaceBasis& basis() const { return basis_; }
  int order() const { return basis_.order(); }
  double damping() const { return damping_; }
  const std::vector<double>& incoming_nodes() const { return basis_.quadrature().nodes; }

  /// <mu psi_k, psi_l> over the full basis.
  const Eigen::MatrixXd& flux_matrix() const { return flux_matrix_; }
  /// <L^d psi_k, psi_l>.
  const Eigen::MatrixXd& collision_matrix() const { return collision_matrix_; }
  /// A^mu_ij = 2 int_0^1 mu phi_i phi_j, i, j = 1..N+1.
  const Eigen::MatrixXd& half_range_flux() const { return half_range_flux_; }

  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  /// Columns v_m, normalized so that v_m^T Bd v_m = 1.
  const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
  Counts counts() const { return counts_; }
  double zero_tolerance() const { return zero_tolerance_; }

  const Eigen::MatrixXd& constraint_matrix() const { return constraint_; }
  double constraint_condition_number() const { return condition_number_; }

  /// Right-hand sides int_0^1 mu f0 phi_j, j = 1..N, from samples on incoming_nodes().
  Eigen::VectorXd incoming_rhs(std::span<const double> f0) const;

  /// Damped coefficients c(0) for incoming samples on incoming_nodes().
  Eigen::VectorXd solve_damped(std::span<const double> f0) const;
  Eigen::VectorXd solve_damped(const std::function<double(double)>& f0) const;

  /// theta_inf = <mu, g0(0)>^{-1} <mu, f~(0)>.
  double end_state(std::span<const double> f0) const;
  double end_state(const std::function<double(double)>& f0) const;
  /// Covector w with theta_inf = w . f0(incoming_nodes()).
  const std::vector<double>& end_state_weights() const { return end_state_weights_; }

  HalfSpaceSolution recover_solution(std::span<const double> f0,
                                     std::span<const double> outgoing_nodes) const;
  HalfSpaceSolution recover_solution(const std::function<double(double)>& f0,
                                     std::span<const double> outgoing_nodes) const;

  /// Damped coefficients for incoming data g0 = 1.
  const Eigen::VectorXd& g0_coefficients() const { return g0_coefficients_; }
  double g0_flux() const { return g0_flux_; }

  /// <mu, psi . c>.
  double flux(const Eigen::VectorXd& c) const { return flux_covector_.dot(c); }

  /// Damped coefficients transported to depth y through the decaying modes.
  Eigen::VectorXd propagate(const Eigen::VectorXd& c0, double y) const;

  /// Recovered solution f(y, mu).
  double evaluate_profile(const HalfSpaceSolution& solution, double y, double mu) const;

  /// Net flux <mu, f(y, .)> of the recovered solution.
  double net_flux(const HalfSpaceSolution& solution, double y) const;

  /// Smallest decay rate among the retained modes, i.e. 1 / max|lambda_m| over lambda_m < 0.
  /// Includes the slow modes introduced by the damping.
  double slowest_decay_rate() const;

  /// Decay rate of f - theta_inf for this solution: the smallest 1 / |lambda_m|
  /// over modes whose amplitude exceeds `rel_tol` times the largest one. The
  /// damping modes drop out here because the recovery cancels them.
  double decay_rate(const HalfSpaceSolution& solution, double rel_tol = 1e-8) const;

  /// Linear map from incoming samples to damped c(0), (2N+1) x n_incoming.
  const Eigen::MatrixXd& solution_map() const { return solution_map_; }

private:
  HalfSpaceBasis basis_;
  double damping_;
  Eigen::MatrixXd flux_matrix_;
  Eigen::MatrixXd collision_matrix_;
  Eigen::MatrixXd half_range_flux_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
  Counts counts_;
  double zero_tolerance_ = 0.0;
  std::vector<int> decaying_;
  Eigen::MatrixXd constraint_;
  double condition_number_ = 0.0;
  Eigen::MatrixXd rhs_map_;       // N x n_incoming
  Eigen::MatrixXd solution_map_;  // (2N+1) x n_incoming
  Eigen::VectorXd flux_covector_;
  Eigen::VectorXd g0_coefficients_;
  double g0_flux_ = 0.0;
  std::vector<double> end_state_weights_;
};

/// Albedo operator restricted to nodal data: outgoing = R incoming,
/// theta_inf = end_state . incoming.
struct AlbedoMap
{
  std::vector<double> incoming_nodes; ///< mu_j > 0, ascending
  std::vector<double> outgoing_nodes; ///< mu_j < 0
  Eigen::MatrixXd reflection;
  Eigen::RowVectorXd end_state;

  std::vector<double> apply(std::span<const double> incoming) const;
  double theta(std::span<const double> incoming) const;
};

/// Piecewise-cubic Lagrange interpolation matrix (to.size() x from.size())
/// using the four nearest nodes of `from` (ascending, at least 4 entries).
Eigen::MatrixXd cubic_interpolation_matrix(std::span<const double> from,
                                           std::span<const double> to);

/// Albedo operator for nodal incoming data. Incoming samples are carried to
/// the half-space quadrature by piecewise-cubic interpolation.
AlbedoMap albedo_map(const HalfSpaceSystem& system, std::span<const double> incoming_nodes,
                     std::span<const double> outgoing_nodes);

/// End state for incoming data mu.
double end_state_eta(const CollisionOperator& op, int order, double damping);

} // namespace slabtrans
