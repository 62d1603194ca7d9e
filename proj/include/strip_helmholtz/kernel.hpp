#pragma once

#include <array>
#include <utility>

#include <Eigen/Dense>

#include "strip_helmholtz/model.hpp"

namespace sh {

// A complex number stored as mantissa * exp(log_scale).
struct ScaledValue {
  cplx mantissa{};
  double log_scale = 0.0;

  // Throws Overflow when exp(log_scale) is not representable.
  cplx value() const;
};

struct SpectralPoint {
  cplx eta;
  cplx zeta;
};

// zeta = sqrt(eta^2 - k^2) on the sheet with zeta(0) = -ik, cut along the
// line through +-k continued outwards from the branch points.
cplx zeta_branch(cplx eta, cplx k);

// Distance from eta to the cut of zeta_branch.
double branch_cut_distance(cplx eta, cplx k);

// The root of eta^2 - k^2 with Re >= 0. Used wherever the expression is even in zeta.
cplx zeta_even(cplx eta, cplx k);

SpectralPoint spectral_point(cplx eta, cplx k);

class KernelContext {
 public:
  explicit KernelContext(const WaveguideConfig& cfg);

  const WaveguideConfig& config() const { return cfg_; }
  WallModel model() const { return cfg_.model; }
  cplx k() const { return cfg_.k; }
  double a() const { return cfg_.a; }
  cplx alpha(int j) const { return cfg_.wall[j].alpha; }
  cplx mu(int j) const { return cfg_.wall[j].mu; }
  // alpha_j^2 (membrane) or alpha_j^4 (plate)
  cplx alpha_power(int j) const { return apow_[j]; }

  // alpha_j^2 - eta^2  or  alpha_j^4 - eta^4
  cplx wall_poly(int j, cplx eta) const;
  cplx wall_poly_derivative(int j, cplx eta) const;
  // zeta^2 + alpha_2^2  or  alpha_2^4 - zeta^4, as a function of zeta^2
  cplx vertical_poly_z2(cplx zeta2) const;
  cplx vertical_poly(cplx zeta) const { return vertical_poly_z2(zeta * zeta); }

  cplx mu_tilde(int j, cplx eta) const { return mu(j) / wall_poly(j, eta); }
  cplx mu_hat(cplx zeta) const { return mu(2) / vertical_poly(zeta); }

  // Ascending coefficients of q (membrane, cubic) or Q (plate, quintic).
  const Eigen::VectorXcd& rh_polynomial() const { return poly_; }
  cplx rh_poly(cplx eta) const;
  // (eta - i mu_hat) * vertical_poly = rh_sign() * P(-eta)
  int rh_sign() const { return cfg_.model == WallModel::Membrane ? -1 : 1; }

 private:
  WaveguideConfig cfg_;
  std::array<cplx, 3> apow_{};
  Eigen::VectorXcd poly_;
};

// Scaled determinant [(m0+m1) z (1+E^2) + (m0 m1 + z^2)(1-E^2)] / 2 with E = exp(-a z).
// Equals Delta~(z) exp(-a z); z should have Re z >= 0.
cplx dispersion_tilde_scaled(cplx zeta, cplx mt0, cplx mt1, double a);

// Delta~(zeta) of the transformed wall problem at the eta belonging to zeta.
ScaledValue dispersion_tilde(cplx zeta, cplx eta, const KernelContext& ctx);
// Convenience form: eta is recovered as sqrt(zeta^2 + k^2); Delta~ depends on eta^2 only.
ScaledValue dispersion_tilde(cplx zeta, const KernelContext& ctx);

// Delta(eta) = wall_poly_0 * wall_poly_1 * Delta~(zeta(eta)).
ScaledValue dispersion_full(cplx eta, const KernelContext& ctx);

// W(eta) = Delta(eta)/zeta, even and entire, with its eta-derivative.
// Both are scaled by exp(-a Re zeta_even).
struct EntireDispersion {
  cplx w;
  cplx dw;
  double log_scale;
};
EntireDispersion dispersion_entire(cplx eta, const KernelContext& ctx);

// Throws DispersionZero when the scaled determinant is below tolerance.
void check_dispersion(cplx scaled_det, cplx zeta_even_value, double a);

cplx green_function(double y, double s, cplx eta, const KernelContext& ctx);
std::pair<cplx, cplx> fundamental_pair(double y, cplx eta, const KernelContext& ctx);

struct LambdaTable {
  cplx l00, l01, l10, l11;
  // true entry (r, c) = matrix(r, c) * exp(row_log_scale[r])
  Eigen::Matrix4cd matrix;
  std::array<double, 4> row_log_scale{};

  Eigen::Matrix4cd unscaled() const;
};
LambdaTable lambda_coefficients(cplx eta, const KernelContext& ctx);

// g~hat(eta, +i zeta), g~hat(eta, -i zeta), g~0(eta), g~1(eta)
struct TransformedForcing {
  cplx g_hat_plus{};
  cplx g_hat_minus{};
  cplx g0{};
  cplx g1{};
};
TransformedForcing delta_source_forcing(cplx eta, const KernelContext& ctx);

std::pair<cplx, cplx> h_terms(cplx eta, const TransformedForcing& forcing, const KernelContext& ctx);

}  // namespace sh
