#include <gtest/gtest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "reference_roots.hpp"
#include "strip_helmholtz/spectra.hpp"

using namespace sh;

namespace {

WaveguideConfig membrane_row(int r) {
  const auto& row = testdata::kMembraneRoots[r];
  return dimensionless_config(WallModel::Membrane, row.k, row.gamma0, row.gamma1);
}

}  // namespace

TEST(Spectra, RootsAgreeWithCompanionEigenvalues) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int deg : {3, 5, 8}) {
    Eigen::VectorXcd c(deg + 1);
    for (int i = 0; i <= deg; ++i) c(i) = {g(rng), g(rng)};
    c(deg) = 1.0;
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    comp.block(1, 0, deg - 1, deg - 1).setIdentity();
    comp.col(deg - 1) = -c.head(deg);
    const Eigen::VectorXcd ev = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(comp).eigenvalues();
    const Eigen::VectorXcd r = polynomial_roots(c);
    ASSERT_EQ(r.size(), deg);
    for (int i = 0; i < deg; ++i) {
      double best = 1e300;
      for (int j = 0; j < deg; ++j) best = std::min(best, std::abs(r(i) - ev(j)));
      EXPECT_LT(best, 1e-10);
      EXPECT_LT(std::abs(polynomial_value(c, r(i))), 1e-12);
    }
  }
}

TEST(Spectra, MembraneTableRoots) {
  for (int r = 0; r < 5; ++r) {
    const KernelContext ctx(membrane_row(r));
    const auto cls = classify_membrane(ctx);
    EXPECT_EQ(cls.case_label, testdata::kMembraneRoots[r].label) << "row " << r + 1;
    for (int i = 0; i < 3; ++i)
      EXPECT_LE(testdata::sigfig_error(cls.roots(i), testdata::kMembraneRoots[r].z[i]), 1.0) << "row " << r + 1 << " z" << i;
    EXPECT_LT(cls.max_residual, 1e-12);
  }
}

TEST(Spectra, PlateTableRoots) {
  // The first printed column carries gamma1 = 2 although its heading reads 1.
  for (int c = 0; c < 4; ++c) {
    const auto& col = testdata::kPlateRoots[c];
    const double g1 = c == 0 ? 2.0 : col.gamma1;
    const KernelContext ctx(dimensionless_config(WallModel::Plate, col.k, col.gamma0, g1));
    const auto cls = classify_plate(ctx);
    for (int i = 0; i < 5; ++i)
      EXPECT_LE(testdata::sigfig_error(cls.roots(i), col.z[i]), 1.0) << "column " << c + 1 << " z" << i;
  }
}

TEST(Spectra, EtaIsTheUpperHalfPlaneRepresentative) {
  for (int r = 0; r < 5; ++r) {
    const auto cls = classify(KernelContext(membrane_row(r)));
    for (int i = 0; i < cls.order(); ++i) {
      EXPECT_GE(cls.eta(i).imag(), 0.0);
      EXPECT_NEAR(std::abs(std::abs(cls.eta(i)) - std::abs(cls.roots(i))), 0.0, 1e-15);
    }
  }
}

TEST(Spectra, WindingMatchesRootCount) {
  for (int r : {0, 1, 3, 4}) {
    const KernelContext ctx(membrane_row(r));
    const auto cls = classify(ctx);
    EXPECT_EQ(winding_index(ctx, cls), winding_from_roots(cls)) << "row " << r + 1;
  }
  // case II: the contour is indented above the real root
  const KernelContext ctx(membrane_row(2));
  const auto cls = classify(ctx);
  EXPECT_THROW(winding_index(ctx, cls), Error);
  EXPECT_EQ(winding_index(ctx, cls, true), winding_from_roots(cls));
}

TEST(Spectra, OverrideOutsideTheBandIsRejected) {
  const KernelContext ctx(membrane_row(0));
  try {
    classify(ctx, CaseLabel::III);
    FAIL() << "expected UnsupportedCase";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedCase);
  }
  EXPECT_EQ(classify(ctx, CaseLabel::I).case_label, CaseLabel::I);
}

TEST(Spectra, DispersionZerosAreCountedAndAreZeros) {
  const KernelContext ctx(membrane_row(0));
  const Box box = default_search_box(ctx, 40);
  const auto z = dispersion_zero_search(ctx, box, 40);
  EXPECT_EQ(static_cast<int>(z.tau.size()), std::min(40, argument_principle_count(ctx, box)));
  for (std::size_t s = 0; s < z.tau.size(); ++s) {
    EXPECT_GT(z.tau[s].imag(), 0.0);
    if (s > 0) EXPECT_GE(std::abs(z.tau[s]), std::abs(z.tau[s - 1]));
    // Delta/zeta vanishes: compare with a nearby value
    const auto w0 = dispersion_entire(z.tau[s], ctx);
    const auto w1 = dispersion_entire(z.tau[s] + 1e-3, ctx);
    EXPECT_LT(std::abs(w0.w), 1e-6 * std::abs(w1.w) * std::exp(w1.log_scale - w0.log_scale));
  }
}
