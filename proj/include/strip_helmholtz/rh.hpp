#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "strip_helmholtz/quadrature.hpp"
#include "strip_helmholtz/spectra.hpp"

namespace sh {

using ComponentTable = Eigen::Matrix<cplx, 2, Eigen::Dynamic>;

// H(eta) = -(eta + i mu_hat)/(eta - i mu_hat), evaluated as P(eta)/P(-eta).
cplx coefficient_H(cplx eta, const KernelContext& ctx);

// Rational Wiener-Hopf factors H = H+/H-, with H-(eta) = H+(-eta).
struct KernelFactorization {
  CaseLabel case_label = CaseLabel::I;
  WallModel model = WallModel::Membrane;
  int order = 3;
  std::vector<cplx> zeros_plus;  // H+ = prod(eta - z) / prod(eta - p)
  std::vector<cplx> poles_plus;
  std::vector<cplx> lower_roots;  // roots of P in the open lower half-plane
  std::vector<cplx> upper_roots;  // roots in the closed upper half-plane

  cplx hplus(cplx eta) const;
  cplx hminus(cplx eta) const { return hplus(-eta); }
  cplx H(cplx eta) const { return hplus(eta) / hminus(eta); }
  // eta * H+(eta) as eta -> infinity is finite (cases II, III) or H+ ~ eta (case I)
  bool grows() const { return zeros_plus.size() > poles_plus.size(); }
};

KernelFactorization factorize(const RootClassification& cls);

// Unknown layout shared by the RH and constants modules:
// [c_0 .. c_{nc-1}, b_0, b_1, 1]. Basis index nc denotes the source term.
struct UnknownLayout {
  int nc = 4;
  int n_unknowns() const { return nc + 2; }
  int size() const { return nc + 3; }
  int b(int j) const { return nc + j; }
  int constant() const { return nc + 2; }
  int n_basis() const { return nc + 1; }
  // spreads a basis row (constants + source) into an affine form
  Eigen::VectorXcd affine(const Eigen::VectorXcd& basis_row) const;
};

// Right-hand sides f_j^m of the RH problems in the normalization
// f_j = sum_m c_m f_j^m + f_j^src. Columns: constants, then source.
ComponentTable rhs_values(cplx eta, const KernelContext& ctx);

// Densities F_j^m = f_j^m / H+ on the real axis (odd in eta).
ComponentTable density_values(cplx eta, const KernelContext& ctx, const KernelFactorization& fac);

// Numerators of the printed decomposition f_j = -(sum c_m f_j^m + f_j^4)/(q(-eta) Delta(eta)).
// Membrane only; all entries and `denominator` share the factor exp(-a Re zeta).
struct PrintedRhs {
  Eigen::Matrix<cplx, 2, 5> numerators;
  cplx denominator;
  double log_scale;
};
PrintedRhs rhs_components(cplx eta, const KernelContext& ctx);

// Generic Cauchy integral (1/2 pi i) int_R F(t)/(t - eta) dt by adaptive quadrature.
// side = +1/-1 gives boundary values from above/below when eta is real.
cplx cauchy_psi(cplx eta, int side, const std::function<cplx(double)>& density, double tol = 1e-12);

struct RHOptions {
  double tau_max = 1e5;
  double rel_tol = 1e-12;
};

// The two scalar RH problems of one configuration, with Psi tabulated on a fixed
// tau grid so that many evaluations share one quadrature rule.
class RHProblem {
 public:
  RHProblem(const KernelContext& ctx, const RootClassification& cls, RHOptions opt = {});

  const KernelContext& context() const { return ctx_; }
  const RootClassification& classification() const { return cls_; }
  const KernelFactorization& factorization() const { return fac_; }
  const UnknownLayout& layout() const { return layout_; }
  const PanelRule& tau_rule() const { return rule_; }
  double tail_estimate() const { return tail_; }

  ComponentTable density(cplx eta) const { return density_values(eta, ctx_, fac_); }

  // Psi_j^m(eta) off the real axis. Psi is even in eta.
  ComponentTable psi(cplx eta) const;
  std::vector<ComponentTable> psi_many(const Eigen::VectorXcd& etas) const;
  // Boundary value at real x from above (side = +1) or below (-1).
  ComponentTable psi_boundary(double x, int side) const;

  // Affine forms over the unknown layout.
  Eigen::VectorXcd b_form(int j) const;
  Eigen::VectorXcd phi_plus_form(int j, cplx eta) const;
  Eigen::VectorXcd phi_plus_boundary_form(int j, double x) const;
  // C1_j = lim eta Phi_j^+(eta)
  Eigen::VectorXcd leading_form(int j) const;

  // b_j by the printed integral of the case II removability condition.
  Eigen::VectorXcd b_form_integral(int j) const;

 private:
  ComponentTable psi_direct(cplx eta) const;
  ComponentTable psi_subtracted(cplx eta) const;

  KernelContext ctx_;
  RootClassification cls_;
  KernelFactorization fac_;
  UnknownLayout layout_;
  PanelRule rule_;
  // densities at the nodes: row = node, column = j * nb + m
  Eigen::MatrixXcd dens_;
  Eigen::MatrixXcd tail_coeff_;  // leading tail correction per column
  double tail_ = 0.0;
  std::vector<Eigen::VectorXcd> b_forms_;
  Eigen::MatrixXcd first_moment_;  // int_0^inf F tau dtau per column
};

// A solved RH pair: the unknown vector fixes every affine form.
class RHSolution {
 public:
  RHSolution(std::shared_ptr<const RHProblem> problem, Eigen::VectorXcd unknowns);

  const RHProblem& problem() const { return *problem_; }
  const Eigen::VectorXcd& unknowns() const { return x_; }
  cplx b(int j) const { return x_(problem_->layout().b(j)); }

  cplx phi_plus(int j, cplx eta) const;
  cplx phi_minus(int j, cplx eta) const { return phi_plus(j, -eta); }
  cplx rhs(int j, cplx eta) const;
  cplx leading(int j) const;

 private:
  std::shared_ptr<const RHProblem> problem_;
  Eigen::VectorXcd x_;
};

// Case II: one-sided limits of Phi_j^+ at -eta_0 must agree. Returns the larger gap
// and throws RemovabilityFailure above tol.
double check_removability(const RHSolution& sol, double tol = 1e-7);

}  // namespace sh
