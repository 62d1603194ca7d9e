#include <gtest/gtest.h>

#include <cmath>

#include "strip_helmholtz/field.hpp"
#include "strip_helmholtz/oracle.hpp"

using namespace sh;

namespace {

KernelContext membrane() { return KernelContext(dimensionless_config(WallModel::Membrane, {1.0, 1.0}, 1.0, 0.1)); }

double mms_error(const KernelContext& ctx, int n) {
  const ManufacturedCase mms;
  const FDGrid g = fd_solve(ctx, {4 * n, n, 4.0}, &mms);
  double err = 0.0;
  for (int i = 0; i <= g.nx; ++i)
    for (int j = 0; j <= g.ny; ++j)
      err = std::max(err, std::abs(g.u(i, j) - mms.exact(i * g.hx, j * g.hy, g.a)));
  return err;
}

// Simpson's rule on [lo, hi] with an even number of panels.
template <class F>
cplx simpson(F f, double lo, double hi, int panels = 400) {
  const double h = (hi - lo) / panels;
  cplx s = f(lo) + f(hi);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST(FiniteDifference, ManufacturedSolutionConvergesAtSecondOrder) {
  const auto ctx = membrane();
  const double e16 = mms_error(ctx, 16), e32 = mms_error(ctx, 32);
  EXPECT_LT(e32, e16);
  EXPECT_NEAR(e16 / e32, 4.0, 0.6) << e16 << " " << e32;
}

TEST(FiniteDifference, PlateIsNotDiscretized) {
  const KernelContext plate(dimensionless_config(WallModel::Plate, {1.0, 0.1}, 1.0, 0.1));
  try {
    (void)fd_solve(plate, {64, 16, 4.0});
    FAIL() << "expected UnsupportedCase";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedCase);
  }
}

TEST(FiniteDifference, GridSpacingAndShape) {
  const auto ctx = membrane();
  const FDGrid g = fd_solve(ctx, {64, 16, 4.0});
  EXPECT_EQ(g.u.rows(), 65);
  EXPECT_EQ(g.u.cols(), 17);
  EXPECT_DOUBLE_EQ(g.hx, 4.0 / 64);
  EXPECT_DOUBLE_EQ(g.hy, 1.0 / 16);
  for (int j = 0; j <= g.ny; ++j) EXPECT_EQ(g.u(g.nx, j), cplx(0.0));
}

TEST(Collocation, AgreesWithTheGreenFunctionRepresentation) {
  const auto ctx = membrane();
  const cplx eta{0.4, 0.3};
  auto f = [](double s) { return cplx(std::cos(2.0 * s), s * s); };
  const cplx g0{0.3, -0.2}, g1{-0.5, 0.1};
  const OdeSolution sol = ode_solve_1d(eta, ctx, f, g0, g1);
  for (double y : {0.0, 0.15, 0.5, 0.83, 1.0}) {
    auto integrand = [&](double s) { return green_function(y, s, eta, ctx) * f(s); };
    cplx u = 0.0;
    if (y > 0.0) u += simpson(integrand, 0.0, y);
    if (y < 1.0) u += simpson(integrand, y, 1.0);
    const auto [p0, p1] = fundamental_pair(y, eta, ctx);
    u += g0 * p0 + g1 * p1;
    EXPECT_NEAR(std::abs(sol(y) - u), 0.0, 1e-9) << "y " << y;
  }
}

TEST(Collocation, ZeroDataGivesZero) {
  const auto ctx = membrane();
  const OdeSolution sol = ode_solve_1d({0.2, 0.1}, ctx, [](double) { return cplx(0.0); }, 0.0, 0.0);
  EXPECT_EQ(sol.u.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Collocation, WallFunctionalsMatchTheData) {
  const auto ctx = membrane();
  const cplx eta{-0.6, 0.25};
  const cplx g0{1.0, 0.5}, g1{0.0, -2.0};
  const OdeSolution sol = ode_solve_1d(eta, ctx, [](double s) { return cplx(std::exp(-s)); }, g0, g1);
  const int n = static_cast<int>(sol.y.size()) - 1;
  ASSERT_DOUBLE_EQ(sol.y(0), 0.0);
  ASSERT_DOUBLE_EQ(sol.y(n), 1.0);
  EXPECT_NEAR(std::abs(sol.du(0) - ctx.mu_tilde(0, eta) * sol.u(0) + g0), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(sol.du(n) + ctx.mu_tilde(1, eta) * sol.u(n) - g1), 0.0, 1e-10);
}

TEST(CrossValidation, SemiAnalyticFieldMatchesFiniteDifferences) {
  const Pipeline p = solve_pipeline(dimensionless_config(WallModel::Membrane, {1.0, 1.0}, 1.0, 0.1));
  const auto rep = cross_validate(*p.field, {{128, 32, 8.0}, {256, 64, 8.0}});
  ASSERT_EQ(rep.levels.size(), 2u);
  EXPECT_EQ(rep.xs.size(), 16u);
  EXPECT_EQ(rep.semi.size(), 256);
  EXPECT_LT(rep.levels[1].discrepancy, 0.05);
  EXPECT_LT(rep.levels[1].discrepancy, rep.levels[0].discrepancy);
  EXPECT_TRUE(rep.decreasing);
  EXPECT_FALSE(rep.fingerprint.empty());
}
