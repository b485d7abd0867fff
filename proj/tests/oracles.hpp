#pragma once

// Independent reference computations used only by the test suites; these
// deliberately avoid the code paths they are checking.

#include <functional>
#include <vector>

#include "core/curve.hpp"
#include "core/manifold.hpp"

namespace csf::testing {

// Gamma^k_ij assembled from central differences of the metric,
// 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij).  Layout [(k*dim+i)*dim+j].
std::vector<double> fd_christoffel(const ManifoldModel &model, const double *p, double h);

// R(X,Y,Z,W) assembled from central differences of the Christoffel symbols,
// in the convention R(X,Y) = grad_Y grad_X - grad_X grad_Y + grad_[X,Y].
double fd_riemann(const ManifoldModel &model, const double *p, const double *x,
                  const double *y, const double *z, const double *w, double h);

// Smallest eigenvalue of a symmetric matrix (cyclic Jacobi).
double smallest_eigenvalue(std::vector<double> matrix, int dim);

// |d^m kappa / ds^m| of the ellipse (a cos u, b sin u) evaluated at the N
// uniform parameter nodes u_j = 2 pi j / N, for m = 0..m_max.  Built by
// repeated high-resolution scalar differentiation of the closed-form
// curvature, entirely outside the vector geometry pipeline.
std::vector<std::vector<double>> ellipse_curvature_chain(double a, double b, int n_nodes,
                                                         int m_max);

// Uniform-parameter sampling of a closed parametrization theta -> coords.
DiscreteCurve curve_from_parametrization(
    ModelPtr model, int n_nodes,
    const std::function<void(double theta, double *coords)> &param);

} // namespace csf::testing
