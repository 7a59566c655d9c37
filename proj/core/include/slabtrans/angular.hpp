#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace slabtrans
{

/// Gauss-Legendre rule on [-1, 1]. Nodes are strictly increasing and
/// symmetric about zero; weights sum to 2.
struct AngularGrid
{
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule with `n_nodes` points on [-1, 1]. Throws
/// InvalidArgument for n_nodes < 2.
AngularGrid build_angular_grid(int n_nodes);

/// Gauss-Legendre rule with `n_nodes` points mapped to [lo, hi].
AngularGrid gauss_legendre(int n_nodes, double lo, double hi);

/// <f> = (1/2) * integral of f over [-1, 1], by quadrature on `grid`.
double mean(const AngularGrid& grid, std::span<const double> f);

/// Values of the normalized Legendre polynomials p_0..p_degree at x, where
/// <p_n p_m> = delta_nm with the (1/2)-weighted bracket, i.e.
/// p_n = sqrt(2n+1) P_n.
std::vector<double> normalized_legendre(int degree, double x);

/// Values of the orthonormal shifted Legendre polynomials on [0, 1]
/// (integral over [0,1] of phi_m phi_n = delta_mn), indices 0..degree.
std::vector<double> half_range_legendre(int degree, double mu);

} // namespace slabtrans
