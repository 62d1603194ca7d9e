#include <gtest/gtest.h>

#include "strip_helmholtz/kernel.hpp"

using namespace sh;

namespace {

const KernelContext& membrane() {
  static const KernelContext ctx(dimensionless_config(WallModel::Membrane, {1.0, 0.1}, 5.0, 1.0));
  return ctx;
}

const KernelContext& plate() {
  static const KernelContext ctx(dimensionless_config(WallModel::Plate, {1.0, 0.1}, 1.0, 0.1));
  return ctx;
}

// Second derivative by a centred five-point stencil.
template <class F>
cplx d2(F f, double y, double h) {
  return (-f(y + 2 * h) + 16.0 * f(y + h) - 30.0 * f(y) + 16.0 * f(y - h) - f(y - 2 * h)) / (12.0 * h * h);
}

// One-sided first derivative, fourth order.
template <class F>
cplx d1_forward(F f, double y, double h) {
  return (-25.0 * f(y) + 48.0 * f(y + h) - 36.0 * f(y + 2 * h) + 16.0 * f(y + 3 * h) - 3.0 * f(y + 4 * h)) /
         (12.0 * h);
}

}  // namespace

TEST(Kernel, ZetaBranches) {
  const cplx k{1.0, 0.1};
  EXPECT_NEAR(std::abs(zeta_branch(0.0, k) + kI * k), 0.0, 1e-15);
  for (cplx eta : {cplx(0.3, 0.2), cplx(-2.0, 0.5), cplx(4.0, -1.0), cplx(0.0, 3.0)}) {
    const cplx ze = zeta_even(eta, k), zb = zeta_branch(eta, k);
    EXPECT_NEAR(std::abs(ze * ze - (eta * eta - k * k)), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(zb * zb - (eta * eta - k * k)), 0.0, 1e-13);
    EXPECT_GE(ze.real(), 0.0);
  }
}

TEST(Kernel, BranchIsContinuousAlongTheRealAxis) {
  const cplx k{1.0, 0.1};
  cplx prev = zeta_branch(-20.0, k);
  for (int i = 1; i <= 4000; ++i) {
    const double x = -20.0 + 0.01 * i;
    const cplx z = zeta_branch(x, k);
    EXPECT_LT(std::abs(z - prev), 0.05) << "jump at " << x;
    prev = z;
  }
}

TEST(Kernel, MembranePolynomialMatchesClosedForm) {
  // q(eta) = eta (eta^2 - k^2 + k^2 gamma0) + i k^2 gamma1
  const auto& ctx = membrane();
  const cplx k = ctx.k();
  for (cplx eta : {cplx(0.4, 0.1), cplx(-1.3, 2.0), cplx(3.0, -0.5)}) {
    const cplx q = eta * (eta * eta - k * k + k * k * 5.0) + kI * k * k * 1.0;
    EXPECT_NEAR(std::abs(ctx.rh_poly(eta) - q), 0.0, 1e-12 * std::abs(q));
  }
}

TEST(Kernel, PolynomialIdentityForBothModels) {
  for (const KernelContext* ctx : {&membrane(), &plate()}) {
    for (cplx eta : {cplx(0.4, 0.1), cplx(-1.3, 2.0), cplx(3.0, -0.5)}) {
      const cplx z = zeta_even(eta, ctx->k());
      const cplx lhs = (eta - kI * ctx->mu_hat(z)) * ctx->vertical_poly(z);
      EXPECT_NEAR(std::abs(lhs - double(ctx->rh_sign()) * ctx->rh_poly(-eta)), 0.0, 1e-11 * std::abs(lhs));
    }
  }
}

TEST(Kernel, ScaledDispersionMatchesHyperbolicForm) {
  const double a = 1.0;
  for (cplx z : {cplx(0.5, 0.3), cplx(2.0, -1.0), cplx(0.1, 4.0)}) {
    const cplx m0{0.3, 0.2}, m1{1.1, -0.4};
    const cplx direct = (m0 + m1) * z * std::cosh(a * z) + (m0 * m1 + z * z) * std::sinh(a * z);
    const cplx scaled = dispersion_tilde_scaled(z, m0, m1, a) * std::exp(a * z);
    EXPECT_NEAR(std::abs(scaled - direct), 0.0, 1e-12 * std::abs(direct));
  }
}

TEST(Kernel, DispersionZeroIsReported) {
  EXPECT_THROW(check_dispersion(0.0, {1.0, 0.0}, 1.0), Error);
  EXPECT_NO_THROW(check_dispersion(1.0, {1.0, 0.0}, 1.0));
}

TEST(Kernel, GreenFunctionSolvesTheWallProblem) {
  const auto& ctx = membrane();
  const cplx eta{0.7, 0.2};
  const cplx z = zeta_even(eta, ctx.k());
  const double s = 0.4, h = 1e-3;
  auto G = [&](double y) { return green_function(y, s, eta, ctx); };
  for (double y : {0.1, 0.25, 0.6, 0.9}) EXPECT_NEAR(std::abs(d2(G, y, h) - z * z * G(y)), 0.0, 1e-6);
  // G'(0) - mu~0 G(0) = 0 and G'(a) + mu~1 G(a) = 0
  EXPECT_NEAR(std::abs(d1_forward(G, 0.0, h) - ctx.mu_tilde(0, eta) * G(0.0)), 0.0, 1e-8);
  auto Gr = [&](double t) { return G(1.0 - t); };
  EXPECT_NEAR(std::abs(-d1_forward(Gr, 0.0, h) + ctx.mu_tilde(1, eta) * G(1.0)), 0.0, 1e-8);
  // unit jump of G_y across y = s
  auto Gs = [&](double t) { return G(s + t); };
  auto Gm = [&](double t) { return G(s - t); };
  const cplx jump = d1_forward(Gs, 0.0, h) + d1_forward(Gm, 0.0, h);
  EXPECT_NEAR(std::abs(jump), 1.0, 1e-8);
  // reciprocity
  EXPECT_NEAR(std::abs(green_function(0.2, 0.7, eta, ctx) - green_function(0.7, 0.2, eta, ctx)), 0.0, 1e-14);
}

TEST(Kernel, FundamentalPairCarriesUnitWallData) {
  const auto& ctx = membrane();
  const cplx eta{-0.3, 0.6};
  const double h = 1e-3;
  for (int which = 0; which < 2; ++which) {
    auto p = [&](double y) {
      const auto pr = fundamental_pair(y, eta, ctx);
      return which == 0 ? pr.first : pr.second;
    };
    auto pr = [&](double t) { return p(1.0 - t); };
    const cplx u0 = d1_forward(p, 0.0, h) - ctx.mu_tilde(0, eta) * p(0.0);
    const cplx u1 = -d1_forward(pr, 0.0, h) + ctx.mu_tilde(1, eta) * p(1.0);
    EXPECT_NEAR(std::abs(u0 - (which == 0 ? -1.0 : 0.0)), 0.0, 1e-8);
    EXPECT_NEAR(std::abs(u1 - (which == 1 ? 1.0 : 0.0)), 0.0, 1e-8);
  }
}

TEST(Kernel, MuTildeUsesTheWallPolynomial) {
  const auto& ctx = membrane();
  const cplx eta{0.2, 0.3};
  const cplx a0 = ctx.alpha(0);
  EXPECT_NEAR(std::abs(ctx.wall_poly(0, eta) - (a0 * a0 - eta * eta)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(ctx.mu_tilde(0, eta) - ctx.mu(0) / (a0 * a0 - eta * eta)), 0.0, 1e-14);
  const auto& pc = plate();
  const cplx p0 = pc.alpha(0);
  EXPECT_NEAR(std::abs(pc.wall_poly(0, eta) - (std::pow(p0, 4) - std::pow(eta, 4))), 0.0, 1e-13);
}
