#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "strip_helmholtz/constants.hpp"

namespace sh {

enum class Sector { D1Plus, D2Plus, D3Plus, D1Minus, D2Minus, D3Minus };
const char* to_string(Sector s);

// Branch bookkeeping for eta = i sqrt(xi^2 - k^2) in the xi-plane.
class ContinuationAtlas {
 public:
  explicit ContinuationAtlas(cplx k);

  Sector sector(cplx xi) const;
  // eta with xi - k = r+ e^{i th+}, arg k - 2 pi < th+ < arg k, and
  // xi + k = r- e^{i th-}, arg k - pi < th- < arg k + pi.
  cplx eta_of_xi(cplx xi) const;
  // The half-plane each sector is mapped into: D1, D3 -> upper, D2 -> lower.
  static HalfPlane expected_half_plane(Sector s);
  // Angular distance from xi to the nearest sector boundary ray.
  double boundary_distance(cplx xi) const;

 private:
  cplx k_;
  double arg_k_;
};

// A quadrature value with its Kronrod-Gauss error estimate.
struct Estimate {
  cplx value{};
  double error = 0.0;
};

// Everything reconstructed from one solved configuration.
class FieldSolution {
 public:
  FieldSolution(std::shared_ptr<const VerticalSpectrum> spectrum, ConstantsSolution constants);

  const RHProblem& problem() const { return spectrum_->problem(); }
  const VerticalSpectrum& spectrum() const { return *spectrum_; }
  const ConstantsSolution& constants() const { return constants_; }
  const RHSolution& rh() const { return rh_; }

  // Phi_j^+ - Phi_j^- at any eta, continuing through the jump relation.
  cplx phi_jump(int j, cplx eta) const;
  // u^(0, i zeta) from the branch-free difference form; `flip` evaluates with -eta.
  cplx u_hat_vertical(cplx zeta, bool flip = false) const;
  // The same from Phi^+ alone (eta in the upper half-plane) or Phi^- alone (lower).
  cplx u_hat_vertical_upper(cplx zeta) const;
  cplx u_hat_vertical_lower(cplx zeta) const;

  // u(0, y), u_x(0, y), u_xy(0, y) by inverse-transform quadrature.
  cplx trace_vertical(double y) const;
  cplx trace_vertical_ux(double y, int order = 0) const;
  // u(0, y) by the printed residue sum over the q-zeros (membrane only).
  cplx trace_vertical_residue(double y) const;

  // u(x, y_j) along a contour shifted into the upper half-plane.
  cplx trace_horizontal(double x, int j) const { return trace_horizontal_estimate(x, j).value; }
  Estimate trace_horizontal_estimate(double x, int j) const;
  // Many x on one wall share the spectral samples.
  std::vector<Estimate> trace_horizontal_row(const Eigen::VectorXd& xs, int j) const;
  // The same from the lower-half-plane continuation H+(Psi^- + b) + f on the real axis.
  cplx trace_horizontal_continued(double x, int j) const;
  // u_y(x, y_j) (order 0) or u_xy(x, y_j) (order 1).
  cplx trace_horizontal_uy(double x, int j, int order = 0) const;

  // Corner discontinuities at (0, y_j), j = 0, 1.
  // Computed as the outer one-sided limits u(0^-, 0) and u(0, a^+) of the vertical
  // inverse transform, which vanish exactly when the corners are continuous.
  std::array<cplx, 2> corner_mismatch() const;

  // Interior value from the transformed Green representation.
  cplx interior(double x, double y) const;
  // Many x at one y share the transformed profile.
  Eigen::VectorXcd interior_row(const Eigen::VectorXd& xs, double y) const;
  std::vector<Estimate> interior_row_estimate(const Eigen::VectorXd& xs, double y) const;

  cplx pressure(double x, double y) const;  // i omega rho u
  cplx wall_deflection(double x, int j) const;  // (i/omega) u_y(x, y_j)

  // Transformed profile u~(eta, y) built from the recovered vertical data.
  cplx u_tilde(cplx eta, double y) const;

 private:
  // Vertical data w = u_x(0, s), v = u(0, s) on panels graded toward s = y.
  struct Profile {
    PanelRule rule;
    Eigen::VectorXcd w, v;
    cplx wy{}, vy{};
  };
  Profile profile(double y) const;
  cplx u_tilde(cplx eta, double y, const Profile& pr) const;
  cplx wall_numerator(int j, cplx eta) const;
  cplx n_value(cplx eta, cplx zeta, cplx phi0, cplx phi1) const;
  Eigen::MatrixXcd phi_at(const Eigen::VectorXcd& etas) const;  // node x wall
  enum class TraceKind { Shifted, Continued, Flux };
  std::vector<Estimate> horizontal(const Eigen::VectorXd& xs, int j, TraceKind kind, int order) const;

  std::shared_ptr<const VerticalSpectrum> spectrum_;
  ConstantsSolution constants_;
  RHSolution rh_;
  // Phi_j^+ ~ c1/(eta + i) + c2/(eta + i)^2 at infinity
  std::array<cplx, 2> c1_{}, c2_{};
  double shift_ = 0.25;
};

struct FieldGrid {
  std::string kind;  // "trace" or "interior"
  std::vector<double> x, y;
  std::vector<cplx> values;
  std::vector<double> err_est;
  std::string fingerprint;
  std::string method;
};

FieldGrid field_grid(const FieldSolution& fs, const std::vector<double>& xs, const std::vector<double>& ys);
// Horizontal traces on both walls and the vertical trace.
FieldGrid trace_grid(const FieldSolution& fs, const std::vector<double>& xs, const std::vector<double>& ys);

// Convenience: classification through solved field for a configuration.
struct Pipeline {
  KernelContext ctx;
  RootClassification cls;
  std::shared_ptr<const RHProblem> problem;
  std::shared_ptr<const VerticalSpectrum> spectrum;
  std::shared_ptr<const FieldSolution> field;
};
Pipeline solve_pipeline(const WaveguideConfig& cfg, std::optional<CaseLabel> override = {},
                        SystemOptions opt = {});

}  // namespace sh
