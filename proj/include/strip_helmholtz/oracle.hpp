#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "strip_helmholtz/kernel.hpp"

namespace sh {

// nx cells along [0, L], ny cells across [0, a].
struct FDGridSpec {
  int nx = 512;
  int ny = 128;
  double L = 8.0;
};

// Synthetic data for the manufactured solution u* = exp(i beta x) cos(pi y / a):
// the source is replaced by the matching volume and wall forcings.
struct ManufacturedCase {
  double beta = 1.3;
  cplx exact(double x, double y, double a) const;
};

struct FDGrid {
  int nx = 0, ny = 0;
  double L = 0.0, hx = 0.0, hy = 0.0, a = 1.0;
  Eigen::MatrixXcd u;         // (nx + 1) x (ny + 1), row nx holds the x = L data
  Eigen::VectorXcd v0, v1;    // u_y on the walls at x_i, i = 0..nx
  Eigen::VectorXcd w;         // u_x on the vertical wall at y_j, j = 0..ny
  double seconds = 0.0;

  // Bilinear interpolation of the nodal values.
  cplx value_at(double x, double y) const;
};

// Second-order ghost-point discretization of the membrane problem on [0, L] x [0, a]
// with u = 0 at x = L. Throws SingularDiscretization if the sparse factorization fails.
FDGrid fd_solve(const KernelContext& ctx, const FDGridSpec& spec, const ManufacturedCase* mms = nullptr);

// Chebyshev collocation for u'' - zeta^2 u = f on [0, a] with the wall conditions
// u'(0) - mu~0 u(0) = -g0 and u'(a) + mu~1 u(a) = g1.
struct OdeSolution {
  Eigen::VectorXd y;
  Eigen::VectorXcd u;
  Eigen::VectorXcd du;
  cplx operator()(double yy) const;  // barycentric interpolation
};
OdeSolution ode_solve_1d(cplx eta, const KernelContext& ctx, const std::function<cplx(double)>& f, cplx g0,
                         cplx g1, int n = 48);

struct CrossValidationLevel {
  FDGridSpec spec;
  double discrepancy = 0.0;  // relative L2 over the sample grid
  double max_pointwise = 0.0;  // max |u_fd - u| / max |u|
  double seconds = 0.0;
};

struct CrossValidationReport {
  std::string fingerprint;
  std::vector<double> xs, ys;  // sample grid (16 x 16 by default)
  Eigen::VectorXcd semi;       // semi-analytic values, y outer
  std::vector<CrossValidationLevel> levels;
  bool decreasing = false;
  double seconds = 0.0;
};

class FieldSolution;
CrossValidationReport cross_validate(const FieldSolution& fs, const std::vector<FDGridSpec>& levels, int samples = 16);

}  // namespace sh
