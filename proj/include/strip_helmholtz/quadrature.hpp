#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "strip_helmholtz/model.hpp"

namespace sh {

// Flattened 15-point Kronrod nodes over a list of panels. w_gauss holds the
// embedded 7-point Gauss weights (zero at the Kronrod-only nodes).
struct PanelRule {
  Eigen::VectorXd x;
  Eigen::VectorXd w;
  Eigen::VectorXd w_gauss;
  std::vector<double> edges;

  Eigen::Index size() const { return x.size(); }
};

PanelRule gk15_panels(const std::vector<double>& edges);

// Uniform edges from a to b with spacing at most h.
std::vector<double> uniform_edges(double a, double b, double h);
// Appends edges growing by `ratio` from the last edge until `end` is passed.
void append_geometric(std::vector<double>& edges, double end, double ratio);

struct QuadResult {
  cplx value{};
  double error = 0.0;
  int evaluations = 0;
};

// Adaptive bisection with a 15-point Kronrod panel and the embedded Gauss estimate.
// Throws QuadratureNotConverged if the tolerance is missed at max_depth by more than 1e3x.
QuadResult integrate(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
                     double rel_tol = 1e-12, int max_depth = 48);

struct VectorQuadResult {
  Eigen::VectorXcd value;
  double error = 0.0;
};

VectorQuadResult integrate(const std::function<Eigen::VectorXcd(double)>& f, Eigen::Index dim, double a,
                           double b, double abs_tol, double rel_tol = 1e-12, int max_depth = 48);

// Splits panels of `edges` adaptively until the vector-valued sampler agrees
// between the Kronrod and Gauss rules. The sampler receives all nodes of a panel.
std::vector<double> refine_edges(const std::vector<double>& edges,
                                 const std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)>& sampler,
                                 double rel_tol, int max_depth = 30);

}  // namespace sh
