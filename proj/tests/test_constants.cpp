#include <gtest/gtest.h>

#include "strip_helmholtz/field.hpp"

using namespace sh;

namespace {

const std::array<WaveguideConfig, 3>& configs() {
  static const std::array<WaveguideConfig, 3> cfgs{
      dimensionless_config(WallModel::Membrane, {1.0, 0.1}, 5.0, 1.0),
      dimensionless_config(WallModel::Membrane, {1.0, 1.0}, 1.0, 0.1),
      dimensionless_config(WallModel::Membrane, {1.0, 0.1}, 0.5, 0.05)};
  return cfgs;
}

const Pipeline& pipeline(int which) {
  static std::array<std::unique_ptr<Pipeline>, 3> cache;
  if (!cache[which]) cache[which] = std::make_unique<Pipeline>(solve_pipeline(configs()[which]));
  return *cache[which];
}

}  // namespace

TEST(Constants, SeriesMatchesQuadratureOnTableRowOne) {
  const auto& p = pipeline(0);
  const auto zeros = dispersion_zero_search(p.ctx, default_search_box(p.ctx, 400), 400);
  const cplx eta = p.ctx.alpha(0);
  const cplx q = psi_quadrature(*p.problem, 0, 0, eta);
  const SeriesValue s = psi_series(*p.problem, 0, 0, eta, zeros, 400);
  EXPECT_LE(s.terms, 400);
  EXPECT_NEAR(std::abs(s.value - q), 0.0, 1e-6 * std::abs(q));
  // the acceleration only improves on the plain partial sum
  EXPECT_LE(std::abs(s.value - q), std::abs(s.partial - q) + 1e-15);
}

TEST(Constants, SeriesTermsNeedEnoughZeros) {
  const auto& p = pipeline(1);
  const auto zeros = dispersion_zero_search(p.ctx, default_search_box(p.ctx, 10), 10);
  EXPECT_THROW(psi_series(*p.problem, 0, 1, p.ctx.alpha(0), zeros, 500), Error);
}

class Solved : public ::testing::TestWithParam<int> {};

TEST_P(Solved, SystemIsSolvedAccurately) {
  const auto& cs = pipeline(GetParam()).field->constants();
  EXPECT_LT(cs.residual, 1e-10);
  EXPECT_LT(cs.wall_relation, 1e-10);
  EXPECT_TRUE(std::isfinite(cs.condition));
  EXPECT_EQ(cs.c.size(), 4);
}

TEST_P(Solved, WallEquationsAreSatisfied) {
  const auto& p = pipeline(GetParam());
  const LinearRows rows = assemble_wall_equations(*p.problem);
  const Eigen::VectorXcd r = rows.rows * p.field->constants().unknowns;
  EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-10);
}

TEST_P(Solved, RegularityRowsHoldAPosteriori) {
  const auto& p = pipeline(GetParam());
  const LinearRows rows = assemble_regularity_rows(*p.problem);
  if (rows.size() == 0) GTEST_SKIP() << "no upper-half-plane zeros to test";
  const Eigen::VectorXcd r = rows.rows * p.field->constants().unknowns;
  const double scale = (rows.rows.cwiseAbs() * p.field->constants().unknowns.cwiseAbs()).maxCoeff();
  EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-5 * scale);
}

TEST_P(Solved, ReflectionSymmetricConstants) {
  const auto& c = pipeline(GetParam()).field->constants().c;
  const double scale = c.cwiseAbs().maxCoeff();
  EXPECT_LT(std::abs(c(1) + c(0)), 1e-8 * scale);
  EXPECT_LT(std::abs(c(3) + c(2)), 1e-8 * scale);
}

INSTANTIATE_TEST_SUITE_P(Cases, Solved, ::testing::Values(0, 1, 2),
                         [](const auto& info) { return std::string("case") + std::to_string(info.param + 1); });

TEST(Constants, CaseIIIWithoutCompatibilityFixesB) {
  const Pipeline p = solve_pipeline(configs()[2], {}, SystemOptions{false});
  const auto& cs = p.field->constants();
  EXPECT_EQ(cs.b[0], 0.0);
  EXPECT_EQ(cs.b[1], 0.0);
  EXPECT_LT(cs.residual, 1e-10);
}

TEST(Constants, CaseIIIBalancesTheCorners) {
  const auto m = pipeline(2).field->corner_mismatch();
  EXPECT_LT(std::abs(m[0]), 1e-6);
  EXPECT_LT(std::abs(m[1]), 1e-6);
}

TEST(Constants, LinearRowsAppend) {
  LinearRows a;
  a.append(Eigen::VectorXcd::Ones(3), "one");
  LinearRows b;
  b.append(Eigen::VectorXcd::Zero(3), "zero");
  a.append(b);
  EXPECT_EQ(a.size(), 2);
  EXPECT_EQ(a.labels[1], "zero");
}
