#include "strip_helmholtz/kernel.hpp"

#include <cmath>
#include <limits>

namespace sh {

namespace {

// sqrt with its cut along the ray arg w = phi
cplx sqrt_cut(cplx w, double phi) {
  const cplx rot = std::polar(1.0, -(phi - kPi));
  return std::polar(1.0, 0.5 * (phi - kPi)) * std::sqrt(w * rot);
}

double ray_distance(cplx eta, cplx k) {
  const double r = std::abs(k);
  const cplx dir = k / r;
  const cplx p = eta * std::conj(dir);  // coordinates along / across the ray
  if (p.real() <= r) return std::abs(eta - k);
  return std::abs(p.imag());
}

// cosh(a z), sinh(a z) times exp(-a |Re z|)
std::pair<cplx, cplx> cosh_sinh_scaled(cplx z, double a, double& log_scale) {
  log_scale = a * std::abs(z.real());
  const cplx ep = std::exp(a * z - log_scale);
  const cplx em = std::exp(-a * z - log_scale);
  return {0.5 * (ep + em), 0.5 * (ep - em)};
}

cplx wall_poly_eta2(const KernelContext& ctx, int j, cplx eta2) {
  return ctx.model() == WallModel::Membrane ? ctx.alpha_power(j) - eta2 : ctx.alpha_power(j) - eta2 * eta2;
}

}  // namespace

cplx ScaledValue::value() const {
  if (log_scale > 700.0) {
    const double lm = std::log(std::abs(mantissa));
    if (std::abs(mantissa) == 0.0) return 0.0;
    if (lm + log_scale > 709.0) throw Error(ErrorKind::Overflow, "scaled value exceeds double range");
  }
  return mantissa * std::exp(log_scale);
}

double branch_cut_distance(cplx eta, cplx k) { return std::min(ray_distance(eta, k), ray_distance(-eta, k)); }

cplx zeta_branch(cplx eta, cplx k) {
  const double phi = std::arg(k);
  const double tol = 1e-13 * (1.0 + std::abs(eta));
  const double d1 = ray_distance(eta, k);
  const double d2 = ray_distance(-eta, k);
  const double r = std::abs(k);
  // the branch points themselves are fine: zeta vanishes there
  if ((d1 < tol && std::abs(eta - k) > tol && (eta * std::conj(k / r)).real() > r) ||
      (d2 < tol && std::abs(eta + k) > tol && (-eta * std::conj(k / r)).real() > r)) {
    throw Error(ErrorKind::OnBranchCut, "eta lies on the cut of zeta");
  }
  return sqrt_cut(eta - k, phi) * sqrt_cut(eta + k, phi + kPi);
}

cplx zeta_even(cplx eta, cplx k) {
  cplx z = std::sqrt(eta * eta - k * k);
  return z.real() < 0.0 ? -z : z;
}

SpectralPoint spectral_point(cplx eta, cplx k) { return {eta, zeta_branch(eta, k)}; }

KernelContext::KernelContext(const WaveguideConfig& cfg) : cfg_(cfg) {
  for (int j = 0; j < 3; ++j) {
    const cplx al = cfg_.wall[j].alpha;
    apow_[j] = cfg_.model == WallModel::Membrane ? al * al : al * al * al * al;
  }
  const cplx k2 = cfg_.k * cfg_.k;
  const cplx m2 = cfg_.wall[2].mu;
  if (cfg_.model == WallModel::Membrane) {
    poly_.resize(4);
    poly_ << kI * m2, apow_[2] - k2, 0.0, 1.0;
  } else {
    poly_.resize(6);
    poly_ << -kI * m2, k2 * k2 - apow_[2], 0.0, -2.0 * k2, 0.0, 1.0;
  }
}

cplx KernelContext::wall_poly(int j, cplx eta) const { return wall_poly_eta2(*this, j, eta * eta); }

cplx KernelContext::wall_poly_derivative(int /*j*/, cplx eta) const {
  return model() == WallModel::Membrane ? -2.0 * eta : -4.0 * eta * eta * eta;
}

cplx KernelContext::vertical_poly_z2(cplx zeta2) const {
  return model() == WallModel::Membrane ? zeta2 + apow_[2] : apow_[2] - zeta2 * zeta2;
}

cplx KernelContext::rh_poly(cplx eta) const {
  cplx acc = 0.0;
  for (Eigen::Index i = poly_.size() - 1; i >= 0; --i) acc = acc * eta + poly_(i);
  return acc;
}

cplx dispersion_tilde_scaled(cplx zeta, cplx mt0, cplx mt1, double a) {
  const cplx e2 = std::exp(-2.0 * a * zeta);
  return 0.5 * ((mt0 + mt1) * zeta * (1.0 + e2) + (mt0 * mt1 + zeta * zeta) * (1.0 - e2));
}

void check_dispersion(cplx scaled_det, cplx zr, double a) {
  const double scale = std::exp(-a * zr.real()) + std::abs(zr);
  if (!(std::abs(scaled_det) >= 1e-12 * scale))
    throw Error(ErrorKind::DispersionZero, "Delta~ vanishes: eta is a waveguide eigenvalue");
}

namespace {

ScaledValue tilde_from(cplx zeta, cplx eta2, const KernelContext& ctx) {
  const cplx mt0 = ctx.mu(0) / wall_poly_eta2(ctx, 0, eta2);
  const cplx mt1 = ctx.mu(1) / wall_poly_eta2(ctx, 1, eta2);
  double ls = 0.0;
  const auto [ch, sh_] = cosh_sinh_scaled(zeta, ctx.a(), ls);
  ScaledValue out{(mt0 + mt1) * zeta * ch + (mt0 * mt1 + zeta * zeta) * sh_, ls};
  if (!std::isfinite(out.mantissa.real()) || !std::isfinite(out.mantissa.imag()))
    throw Error(ErrorKind::Overflow, "Delta~ mantissa is not finite");
  return out;
}

}  // namespace

ScaledValue dispersion_tilde(cplx zeta, cplx eta, const KernelContext& ctx) {
  return tilde_from(zeta, eta * eta, ctx);
}

ScaledValue dispersion_tilde(cplx zeta, const KernelContext& ctx) {
  return tilde_from(zeta, zeta * zeta + ctx.k() * ctx.k(), ctx);
}

ScaledValue dispersion_full(cplx eta, const KernelContext& ctx) {
  const cplx z = zeta_branch(eta, ctx.k());
  const cplx w0 = ctx.wall_poly(0, eta);
  const cplx w1 = ctx.wall_poly(1, eta);
  double ls = 0.0;
  const auto [ch, sh_] = cosh_sinh_scaled(z, ctx.a(), ls);
  // expanded so that eta = alpha_j causes no 0/0
  const cplx m = (ctx.mu(0) * w1 + ctx.mu(1) * w0) * z * ch + (ctx.mu(0) * ctx.mu(1) + w0 * w1 * z * z) * sh_;
  return {m, ls};
}

EntireDispersion dispersion_entire(cplx eta, const KernelContext& ctx) {
  const double a = ctx.a();
  const cplx z = zeta_even(eta, ctx.k());
  const cplx z2 = eta * eta - ctx.k() * ctx.k();
  const cplx w0 = ctx.wall_poly(0, eta), w1 = ctx.wall_poly(1, eta);
  const cplx d0 = ctx.wall_poly_derivative(0, eta), d1 = ctx.wall_poly_derivative(1, eta);
  const cplx A = ctx.mu(0) * w1 + ctx.mu(1) * w0;
  const cplx dA = ctx.mu(0) * d1 + ctx.mu(1) * d0;
  const cplx B = ctx.mu(0) * ctx.mu(1) + w0 * w1 * z2;
  const cplx dB = (d0 * w1 + w0 * d1) * z2 + 2.0 * eta * w0 * w1;

  const double ls = a * z.real();
  const cplx e2 = std::exp(-2.0 * a * z);
  const cplx ch = 0.5 * (1.0 + e2);  // cosh(az) e^{-az}
  const cplx sh_ = 0.5 * (1.0 - e2);
  cplx sinc, dsinc;  // sinh(az)/z and (az cosh az - sinh az)/z^3, both scaled
  const cplx az = a * z;
  if (std::abs(az) < 1e-2) {
    const cplx u = az * az;
    const cplx ez = std::exp(-az);
    sinc = a * (1.0 + u / 6.0 + u * u / 120.0 + u * u * u / 5040.0) * ez;
    dsinc = a * a * a * (1.0 / 3.0 + u / 30.0 + u * u / 840.0 + u * u * u / 45360.0) * ez;
  } else {
    sinc = sh_ / z;
    dsinc = (az * ch - sh_) / (z * z * z);
  }
  EntireDispersion out;
  out.log_scale = ls;
  out.w = A * ch + B * sinc;
  out.dw = dA * ch + A * a * eta * sinc + dB * sinc + B * eta * dsinc;
  return out;
}

namespace {

struct Fundamentals {
  cplx z, mt0, mt1, det;
};

Fundamentals fundamentals_at(cplx eta, const KernelContext& ctx) {
  Fundamentals f;
  f.z = zeta_even(eta, ctx.k());
  f.mt0 = ctx.mu_tilde(0, eta);
  f.mt1 = ctx.mu_tilde(1, eta);
  f.det = dispersion_tilde_scaled(f.z, f.mt0, f.mt1, ctx.a());
  check_dispersion(f.det, f.z, ctx.a());
  return f;
}

std::pair<cplx, cplx> phi_scaled(const Fundamentals& f, double y, double a) {
  const cplx z = f.z;
  const cplx p0 = ((z + f.mt1) * std::exp(-z * y) + (z - f.mt1) * std::exp(-z * (2.0 * a - y))) / (2.0 * f.det);
  const cplx p1 = ((z + f.mt0) * std::exp(-z * (a - y)) + (z - f.mt0) * std::exp(-z * (a + y))) / (2.0 * f.det);
  return {p0, p1};
}

}  // namespace

std::pair<cplx, cplx> fundamental_pair(double y, cplx eta, const KernelContext& ctx) {
  return phi_scaled(fundamentals_at(eta, ctx), y, ctx.a());
}

cplx green_function(double y, double s, cplx eta, const KernelContext& ctx) {
  const double a = ctx.a();
  const Fundamentals f = fundamentals_at(eta, ctx);
  const auto [p0, p1] = phi_scaled(f, y, a);
  const cplx z = f.z;
  return (-std::exp(-z * std::abs(y - s)) - std::exp(-z * s) * (z - f.mt0) * p0 -
          std::exp(-z * (a - s)) * (z - f.mt1) * p1) /
         (2.0 * z);
}

Eigen::Matrix4cd LambdaTable::unscaled() const {
  Eigen::Matrix4cd m = matrix;
  for (int r = 0; r < 4; ++r) m.row(r) *= std::exp(row_log_scale[r]);
  return m;
}

LambdaTable lambda_coefficients(cplx eta, const KernelContext& ctx) {
  if (std::abs(eta) == 0.0) throw Error(ErrorKind::EtaZero, "Lambda is singular at eta = 0");
  const double a = ctx.a();
  const cplx z = zeta_branch(eta, ctx.k());
  const cplx m0 = ctx.mu_tilde(0, eta), m1 = ctx.mu_tilde(1, eta);
  double ls = 0.0;
  const auto [ch, sh_] = cosh_sinh_scaled(z, a, ls);
  const cplx det = (m0 + m1) * z * ch + (m0 * m1 + z * z) * sh_;
  check_dispersion(det, z.real() < 0.0 ? -z : z, a);
  const cplx emz = std::exp(-a * z - ls);  // e^{-a z} / e^{ls}

  LambdaTable t;
  t.l00 = (1.0 - (m0 - z) * (z * ch + m1 * sh_) / det) / (2.0 * z);
  t.l01 = -(m1 - z) * emz / (2.0 * det);
  t.l10 = -(m0 - z) / (2.0 * det * std::exp(ls));
  if (ls > 700.0) t.l10 = 0.0;
  t.l11 = std::exp(-a * z) * (1.0 - (m1 - z) * (z * ch + m0 * sh_) / det) / (2.0 * z);

  const cplx E = std::exp(-a * z);
  // rows 2 and 3 carry e^{a z}; keep its modulus in the row scale
  const double up = a * z.real();
  const cplx Einv = std::exp(a * z - up);
  const cplx f = -1.0 / (2.0 * eta);
  const cplx A = m0 + z, B = m1 - z, C = m0 - z, D = m1 + z;
  t.matrix << eta * A, eta * A, eta * B * E, eta * B * E,
      kI * A, -kI * A, kI * B * E, -kI * B * E,
      eta * C * std::exp(-up), eta * C * std::exp(-up), eta * D * Einv, eta * D * Einv,
      kI * C * std::exp(-up), -kI * C * std::exp(-up), kI * D * Einv, -kI * D * Einv;
  t.matrix *= f;
  t.row_log_scale = {0.0, 0.0, up, up};
  return t;
}

TransformedForcing delta_source_forcing(cplx eta, const KernelContext& ctx) {
  const cplx z = zeta_branch(eta, ctx.k());
  const auto& s = ctx.config().source;
  TransformedForcing g;
  g.g_hat_plus = -std::exp(kI * eta * s.x - z * s.y);
  g.g_hat_minus = -std::exp(kI * eta * s.x + z * s.y);
  return g;
}

std::pair<cplx, cplx> h_terms(cplx eta, const TransformedForcing& g, const KernelContext& ctx) {
  const double a = ctx.a();
  const cplx z = zeta_branch(eta, ctx.k());
  const cplx m0 = ctx.mu_tilde(0, eta), m1 = ctx.mu_tilde(1, eta);
  double ls = 0.0;
  const auto [ch, sh_] = cosh_sinh_scaled(z, a, ls);
  const cplx det = (m0 + m1) * z * ch + (m0 * m1 + z * z) * sh_;
  check_dispersion(det, z.real() < 0.0 ? -z : z, a);
  const LambdaTable L = lambda_coefficients(eta, ctx);
  const cplx inv_scale = std::exp(-ls);
  const cplx h0 = L.l00 * g.g_hat_plus + L.l01 * g.g_hat_minus - (z * ch + m1 * sh_) / det * g.g0 -
                  z * inv_scale / det * g.g1;
  const cplx h1 = L.l10 * g.g_hat_plus + L.l11 * g.g_hat_minus - z * inv_scale / det * g.g0 -
                  (z * ch + m0 * sh_) / det * g.g1;
  return {h0, h1};
}

}  // namespace sh
