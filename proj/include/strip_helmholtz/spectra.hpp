#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "strip_helmholtz/kernel.hpp"

namespace sh {

// All roots of sum_i c_i x^i (ascending coefficients), Aberth iteration plus Newton polish.
Eigen::VectorXcd polynomial_roots(const Eigen::VectorXcd& ascending);

cplx polynomial_value(const Eigen::VectorXcd& ascending, cplx x);

enum class CaseLabel { I, II, III };
const char* to_string(CaseLabel c);

enum class HalfPlane { Upper, Real, Lower };

struct RootClassification {
  WallModel model = WallModel::Membrane;
  // z_0 .. z_n in the tables' order
  Eigen::VectorXcd roots;
  std::vector<HalfPlane> side;
  CaseLabel case_label = CaseLabel::I;
  // eta_j = z_j for roots in the closed upper half-plane, -z_j otherwise
  Eigen::VectorXcd eta;
  int kappa = 0;
  double max_residual = 0.0;
  double min_separation = 0.0;

  int order() const { return static_cast<int>(roots.size()); }
  // index of z_0 (always 0) and whether it sits on the real axis
  bool has_real_root() const { return case_label == CaseLabel::II; }
};

// override only settles roots that sit inside the near-real band; an
// incompatible request raises UnsupportedCase.
RootClassification classify_membrane(const KernelContext& ctx, std::optional<CaseLabel> override = {});
RootClassification classify_plate(const KernelContext& ctx, std::optional<CaseLabel> override = {});
RootClassification classify(const KernelContext& ctx, std::optional<CaseLabel> override = {});

// Tolerance for declaring a root real.
inline double real_root_band(cplx z) { return 1e-9 * (1.0 + std::abs(z)); }

// Winding number of H along the real axis. Real roots raise ContourPole unless
// indent is set, in which case the contour passes just above them.
int winding_index(const KernelContext& ctx, const RootClassification& cls, bool indent = false);
// The same number from the root placement: zeros minus poles of H in the upper half-plane.
int winding_from_roots(const RootClassification& cls);

struct Box {
  double re_min, re_max, im_min, im_max;
  bool contains(cplx z) const {
    return z.real() > re_min && z.real() < re_max && z.imag() > im_min && z.imag() < im_max;
  }
};

struct DispersionZeros {
  std::vector<cplx> tau;  // sorted by modulus
  int count_verified = 0;
  Box box{};
  double max_residual = 0.0;
};

// Zeros of Delta(eta)/zeta counted by the argument principle on the box edge.
int argument_principle_count(const KernelContext& ctx, const Box& box);

// A box holding roughly the first n zeros.
Box default_search_box(const KernelContext& ctx, int n);

DispersionZeros dispersion_zero_search(const KernelContext& ctx, const Box& box, int max_count);

}  // namespace sh
