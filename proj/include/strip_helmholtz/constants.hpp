#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "strip_helmholtz/rh.hpp"

namespace sh {

// psi_j^m by the tabulated Cauchy quadrature; real eta gives the boundary value from above.
cplx psi_quadrature(const RHProblem& problem, int j, int m, cplx eta);

struct SeriesValue {
  cplx value{};    // accelerated sum
  cplx partial{};  // plain partial sum
  int terms = 0;
  double tail = 0.0;  // estimated error of `value`, tested against tol * max(|value|, 1)
};

// psi_j^m (m < n_constants) as a residue sum over the poles of F in the lower
// half-plane: the zeros -tau_s of Delta and the lower roots of the RH polynomial.
// eta in the lower half-plane is mapped to -eta (psi is even). The terms decay
// algebraically; the partial sums are accelerated with a Levin u-transform.
SeriesValue psi_series(const RHProblem& problem, int j, int m, cplx eta, const DispersionZeros& zeros,
                       int max_terms = 500, double tol = 1e-8);

// Transformed wall forcings of the edge constants at (eta, zeta), as affine forms.
struct ForcingForms {
  Eigen::VectorXcd g0, g1, g2a, g2b;
};
ForcingForms forcing_forms(cplx eta, cplx zeta, const KernelContext& ctx, const UnknownLayout& L);

// Rows of an affine system over the unknown layout: row * [unknowns..., 1] = 0.
struct LinearRows {
  Eigen::MatrixXcd rows;
  std::vector<std::string> labels;

  void append(const Eigen::VectorXcd& row, std::string label);
  void append(const LinearRows& other);
  Eigen::Index size() const { return rows.rows(); }
};

// Spectral data of the vertical wall along zeta = it, shared by the edge rows,
// the compatibility rows and the vertical traces.
class VerticalSpectrum {
 public:
  explicit VerticalSpectrum(std::shared_ptr<const RHProblem> problem, double t_max = 1e4);

  const RHProblem& problem() const { return *problem_; }
  std::shared_ptr<const RHProblem> problem_ptr() const { return problem_; }
  const PanelRule& rule() const { return rule_; }

  // u_x(0, y) (order 0) or u_xy(0, y) (order 1) as affine forms; y in [0, a].
  Eigen::VectorXcd w_form(double y, int order = 0) const;
  // u(0, y) for y in (0, a). At y = 0 or a the one-sided outer limit is returned
  // (y = 0 -> 0^-, y = a -> a^+): it vanishes exactly when the corner is continuous.
  Eigen::VectorXcd v_form(double y) const;
  Eigen::VectorXcd corner_form(int j) const { return v_form(j == 0 ? 0.0 : problem_->context().a()); }

 private:
  Eigen::VectorXcd residue_part(double y, int order) const;

  std::shared_ptr<const RHProblem> problem_;
  PanelRule rule_;
  Eigen::MatrixXcd R0_, R1_;  // mu_2 v^ / vp = R0 + exp(-i a t) R1, per node
  Eigen::MatrixXcd G0_, G1_;  // v^ minus the 1/t tail, same split
  Eigen::VectorXcd A0_, A1_;
};

LinearRows assemble_wall_equations(const RHProblem& problem);
LinearRows assemble_edge_equations(const VerticalSpectrum& vs);
LinearRows assemble_compatibility_equations(const VerticalSpectrum& vs);
// N(eta_m, +-zeta_m) = 0 at the zeros of the RH polynomial in the upper half-plane.
// Not part of the solved system; used as an independent consistency check.
LinearRows assemble_regularity_rows(const RHProblem& problem);

struct SystemOptions {
  bool compatibility = true;  // case III only
};

// Wall + edge rows (+ compatibility rows in case III). For plates this is the
// 8 (or 10) row system of the clamped edges.
LinearRows assemble_system(const VerticalSpectrum& vs, SystemOptions opt = {});
LinearRows assemble_plate_system(const VerticalSpectrum& vs, SystemOptions opt = {});

struct ConstantsSolution {
  Eigen::VectorXcd c;
  std::array<cplx, 2> b{};
  CaseLabel case_label = CaseLabel::I;
  double condition = 0.0;
  double residual = 0.0;           // |A x - r| / |r|
  double wall_relation = 0.0;      // a posteriori wall relation at the wall roots
  Eigen::VectorXcd unknowns;       // full affine vector [c, b, 1]
  int n_unknowns = 0;

  RHSolution rh_solution(std::shared_ptr<const RHProblem> problem) const;
};

// Solves the square system. Case III with compatibility disabled fixes b = 0.
ConstantsSolution solve_constants(const RHProblem& problem, const LinearRows& rows);

// Membrane-only transcription of the printed residue coefficients.
struct CoefficientBundle {
  int s = 1;                     // first root index used
  std::array<cplx, 2> eta{};     // eta_0, eta_1 in the upper half-plane (eta_0 unused when s = 1)
  cplx eta2{};                   // -eta_2 is the lower root
  std::array<cplx, 2> xi{}, t{};
  Eigen::Matrix2cd rho;          // rho(j, m)
  std::array<cplx, 2> r{}, xi_hat{};
  // edge rows D(j, n) c_n = E_j, with E affine in b and the source
  Eigen::Matrix<cplx, 2, 4> D;
  std::array<Eigen::VectorXcd, 2> E;
  // compatibility coefficients
  std::array<cplx, 2> beta_j0{}, beta_j1{};
  cplx beta{};
  Eigen::Matrix<cplx, 2, 4> lambda, sigma;
  std::array<cplx, 2> nu{};
  Eigen::Matrix<cplx, 2, 5> M0;  // M_j^n(0), printed sign convention
};

CoefficientBundle coefficient_bundle(const RHProblem& problem);
LinearRows printed_edge_equations(const RHProblem& problem, const CoefficientBundle& cb);
LinearRows printed_compatibility_equations(const RHProblem& problem, const CoefficientBundle& cb);

// M_j^n(x) in the printed sign convention, -(1/2 pi) int f_j^n e^{-i eta x} d eta.
Eigen::Matrix<cplx, 2, Eigen::Dynamic> printed_M(const RHProblem& problem, double x);

}  // namespace sh
