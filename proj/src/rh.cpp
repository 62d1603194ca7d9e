#include "strip_helmholtz/rh.hpp"

#include <algorithm>
#include <cmath>

#include "strip_helmholtz/parallel.hpp"

namespace sh {

cplx coefficient_H(cplx eta, const KernelContext& ctx) {
  const cplx num = ctx.rh_poly(eta);
  const cplx den = ctx.rh_poly(-eta);
  const double scale = std::pow(1.0 + std::abs(eta), ctx.config().order());
  if (std::abs(den) < 1e-14 * scale) throw Error(ErrorKind::PoleOnEvaluation, "H has a pole at this eta");
  return num / den;
}

cplx KernelFactorization::hplus(cplx eta) const {
  cplx v = 1.0;
  for (auto z : zeros_plus) v *= eta - z;
  for (auto p : poles_plus) v /= eta - p;
  return v;
}

KernelFactorization factorize(const RootClassification& cls) {
  KernelFactorization f;
  f.case_label = cls.case_label;
  f.model = cls.model;
  f.order = cls.order();
  if (static_cast<int>(cls.side.size()) != cls.order())
    throw Error(ErrorKind::UnsupportedCase, "classification has no half-plane data");
  for (int i = 0; i < cls.order(); ++i) {
    const cplx z = cls.roots(i);
    if (cls.side[i] == HalfPlane::Lower) {
      f.zeros_plus.push_back(z);
      f.lower_roots.push_back(z);
    } else {
      f.poles_plus.push_back(-z);
      f.upper_roots.push_back(z);
    }
  }
  const int diff = static_cast<int>(f.zeros_plus.size()) - static_cast<int>(f.poles_plus.size());
  if (diff != 1 && diff != -1) throw Error(ErrorKind::UnsupportedCase, "unexpected root split for H+");
  return f;
}

Eigen::VectorXcd UnknownLayout::affine(const Eigen::VectorXcd& row) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(size());
  v.head(nc) = row.head(nc);
  v(constant()) = row(nc);
  return v;
}

namespace {

struct XTable {
  ComponentTable X;  // f * (eta - i mu_hat)
  cplx vp;
  cplx mh;
};

// Forcing transforms of basis m: g~0 at +-eta, g~1 at +-eta and the two halves of g^2(+-zeta).
struct BasisForcing {
  cplx g0p{}, g0m{}, g1p{}, g1m{};
  cplx g2a_p{}, g2a_m{}, g2b_p{}, g2b_m{};
  bool source = false;
};

BasisForcing basis_forcing(int m, cplx eta, cplx zr, const KernelContext& ctx, cplx vp) {
  BasisForcing b;
  const cplx w0 = ctx.wall_poly(0, eta), w1 = ctx.wall_poly(1, eta);
  if (ctx.model() == WallModel::Membrane) {
    switch (m) {
      case 0: b.g0p = b.g0m = -1.0 / w0; break;
      case 1: b.g1p = b.g1m = 1.0 / w1; break;
      case 2: b.g2a_p = b.g2a_m = -1.0 / vp; break;
      case 3: b.g2b_p = b.g2b_m = 1.0 / vp; break;
      default: b.source = true;
    }
    return b;
  }
  switch (m) {
    case 0: b.g0p = b.g0m = 1.0 / w0; break;
    case 1:
      b.g0p = -kI * eta / w0;
      b.g0m = kI * eta / w0;
      break;
    case 2: b.g1p = b.g1m = -1.0 / w1; break;
    case 3:
      b.g1p = kI * eta / w1;
      b.g1m = -kI * eta / w1;
      break;
    case 4: b.g2a_p = b.g2a_m = 1.0 / vp; break;
    case 5:
      b.g2a_p = zr / vp;
      b.g2a_m = -zr / vp;
      break;
    case 6: b.g2b_p = b.g2b_m = -1.0 / vp; break;
    case 7:
      b.g2b_p = -zr / vp;
      b.g2b_m = zr / vp;
      break;
    default: b.source = true;
  }
  return b;
}

XTable x_table(cplx eta, const KernelContext& ctx) {
  const double a = ctx.a();
  const auto& src = ctx.config().source;
  const cplx zr = zeta_even(eta, ctx.k());
  const cplx E = std::exp(-a * zr);
  const cplx mt0 = ctx.mu_tilde(0, eta), mt1 = ctx.mu_tilde(1, eta);
  const cplx vp = ctx.vertical_poly_z2(eta * eta - ctx.k() * ctx.k());
  const cplx mh = ctx.mu(2) / vp;
  const cplx det = dispersion_tilde_scaled(zr, mt0, mt1, a);
  check_dispersion(det, zr, a);
  const cplx T = eta * std::cos(eta * src.x) + mh * std::sin(eta * src.x);
  const cplx em = eta - kI * mh, ep = eta + kI * mh;
  const int nb = ctx.config().n_constants() + 1;

  XTable out;
  out.X.resize(2, nb);
  out.vp = vp;
  out.mh = mh;
  for (int m = 0; m < nb; ++m) {
    const BasisForcing g = basis_forcing(m, eta, zr, ctx, vp);
    const cplx Pp = em * g.g0p + ep * g.g0m + 2.0 * eta * g.g2a_p;
    const cplx Pm = em * g.g0p + ep * g.g0m + 2.0 * eta * g.g2a_m;
    const cplx Qp = em * g.g1p + ep * g.g1m + 2.0 * eta * g.g2b_p;
    const cplx Qm = em * g.g1p + ep * g.g1m + 2.0 * eta * g.g2b_m;
    cplx RA = Pp + Qp * E;
    cplx RBE2 = Pm * E * E + Qm * E;
    cplx RBE = Pm * E + Qm;
    cplx RAE = Pp * E + Qp * E * E;
    if (g.source) {
      const double y0 = src.y;
      RA += 2.0 * std::exp(-zr * y0) * T;
      RBE2 += 2.0 * std::exp(zr * (y0 - 2.0 * a)) * T;
      RBE += 2.0 * std::exp(zr * (y0 - a)) * T;
      RAE += 2.0 * std::exp(-zr * (y0 + a)) * T;
    }
    out.X(0, m) = (RA * (mt1 + zr) - RBE2 * (mt1 - zr)) / (2.0 * det);
    out.X(1, m) = ((mt0 + zr) * RBE - (mt0 - zr) * RAE) / (2.0 * det);
  }
  return out;
}

}  // namespace

ComponentTable rhs_values(cplx eta, const KernelContext& ctx) {
  const XTable t = x_table(eta, ctx);
  const cplx em = eta - kI * t.mh;
  if (std::abs(em) == 0.0) throw Error(ErrorKind::PoleOnEvaluation, "f has a pole at this eta");
  return t.X / em;
}

ComponentTable density_values(cplx eta, const KernelContext& ctx, const KernelFactorization& fac) {
  const XTable t = x_table(eta, ctx);
  // (eta - i mu_hat) H+ = sign * prod_{lower}(eta^2 - z^2) / vp
  const double sign = ctx.rh_sign() * ((fac.order % 2) ? -1.0 : 1.0);
  cplx prod = sign;
  for (auto z : fac.lower_roots) prod *= eta * eta - z * z;
  return t.X * (t.vp / prod);
}

PrintedRhs rhs_components(cplx eta, const KernelContext& ctx) {
  if (ctx.model() != WallModel::Membrane)
    throw Error(ErrorKind::UnsupportedCase, "the printed component table covers membrane walls only");
  const double a = ctx.a();
  const auto& src = ctx.config().source;
  const cplx z = zeta_even(eta, ctx.k());
  const double ls = a * z.real();
  const cplx ch = 0.5 * (std::exp(a * z - ls) + std::exp(-a * z - ls));
  const cplx shh = 0.5 * (std::exp(a * z - ls) - std::exp(-a * z - ls));
  const cplx sc = std::exp(-ls);
  const cplx mu0 = ctx.mu(0), mu1 = ctx.mu(1), mu2 = ctx.mu(2);
  const cplx w[2] = {ctx.wall_poly(0, eta), ctx.wall_poly(1, eta)};
  const cplx mu[2] = {mu0, mu1};
  const cplx vp = ctx.alpha_power(2) + z * z;

  PrintedRhs out;
  out.log_scale = ls;
  for (int j = 0; j < 2; ++j) {
    const double sj = (j % 2) ? 1.0 : -1.0;  // (-1)^{j+1}
    const cplx bracket = mu[1 - j] * shh + w[1 - j] * z * ch;
    out.numerators(j, j) = 2.0 * sj * eta * bracket * vp;
    out.numerators(j, 1 - j) = -2.0 * sj * eta * z * w[j] * vp * sc;
    out.numerators(j, j + 2) = 2.0 * sj * eta * w[j] * bracket;
    out.numerators(j, 3 - j) = -2.0 * sj * eta * z * w[0] * w[1] * sc;
  }
  auto sh_s = [&](double c) { return 0.5 * (std::exp(c * z - ls) - std::exp(-c * z - ls)); };
  auto ch_s = [&](double c) { return 0.5 * (std::exp(c * z - ls) + std::exp(-c * z - ls)); };
  const double y0 = src.y;
  const cplx f0s = -2.0 * w[0] * (mu1 * sh_s(y0 - a) - z * w[1] * ch_s(y0 - a));
  const cplx f1s = 2.0 * w[1] * (mu0 * sh_s(y0) + z * w[0] * ch_s(y0));
  const cplx lead = eta * vp * std::cos(eta * src.x) + mu2 * std::sin(eta * src.x);
  out.numerators(0, 4) = lead * f0s;
  out.numerators(1, 4) = lead * f1s;
  const cplx delta = (mu0 * w[1] + mu1 * w[0]) * z * ch + (mu0 * mu1 + w[0] * w[1] * z * z) * shh;
  out.denominator = ctx.rh_poly(-eta) * delta;
  return out;
}

namespace {

// integral over u in (0, inf) via u = s/(1-s)
cplx half_line(const std::function<cplx(double)>& g, double tol) {
  auto mapped = [&](double s) {
    const double one = 1.0 - s;
    const double u = s / one;
    return g(u) / (one * one);
  };
  return integrate(mapped, 0.0, 1.0, tol, 1e-12).value;
}

}  // namespace

cplx cauchy_psi(cplx eta, int side, const std::function<cplx(double)>& F, double tol) {
  const double x = eta.real(), y = eta.imag();
  if (y == 0.0) {
    if (side != 1 && side != -1) throw Error(ErrorKind::InvalidParameter, "real eta needs side +1 or -1");
    const cplx pv = half_line([&](double u) { return u == 0.0 ? cplx(0.0) : (F(x + u) - F(x - u)) / u; }, tol);
    return pv / (2.0 * kPi * kI) + 0.5 * side * F(x);
  }
  const cplx v = half_line([&](double u) { return F(x + u) / (u - kI * y) - F(x - u) / (u + kI * y); }, tol);
  return v / (2.0 * kPi * kI);
}

// ---------------------------------------------------------------------------

namespace {

double base_width(const KernelContext& ctx, const KernelFactorization& fac) {
  double d = ctx.k().imag() > 0 ? ctx.k().imag() : 1.0;
  for (auto z : fac.lower_roots) d = std::min(d, std::abs(z.imag()));
  for (int j = 0; j < 2; ++j) {
    // nearest root of the wall polynomial to the axis
    const cplx al = ctx.alpha(j);
    const int n = ctx.model() == WallModel::Membrane ? 2 : 4;
    for (int r = 0; r < n; ++r) {
      const cplx root = al * std::polar(1.0, 2.0 * kPi * r / n);
      if (std::abs(root.imag()) > 0) d = std::min(d, std::abs(root.imag()));
    }
  }
  return std::min(0.25, 0.5 * d);
}

}  // namespace

RHProblem::RHProblem(const KernelContext& ctx, const RootClassification& cls, RHOptions opt)
    : ctx_(ctx), cls_(cls), fac_(factorize(cls)) {
  layout_.nc = ctx_.config().n_constants();
  const int nb = layout_.n_basis();
  double amax = 0.0;
  for (int j = 0; j < 3; ++j) amax = std::max(amax, std::abs(ctx_.alpha(j)));
  const double R0 = 2.0 * (std::abs(ctx_.k()) + amax) + 10.0;
  std::vector<double> edges = uniform_edges(0.0, R0, base_width(ctx_, fac_));
  append_geometric(edges, opt.tau_max, 1.15);

  auto sampler = [&](const Eigen::VectorXd& x) {
    Eigen::MatrixXcd out(x.size(), 2 * nb);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const ComponentTable F = density_values(x(i), ctx_, fac_);
      for (int j = 0; j < 2; ++j) out.block(i, j * nb, 1, nb) = F.row(j);
    }
    return out;
  };
  edges = refine_edges(edges, sampler, std::max(opt.rel_tol, 1e-11), 12);
  rule_ = gk15_panels(edges);

  const Eigen::Index n = rule_.size();
  dens_.resize(n, 2 * nb);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    const ComponentTable F = density_values(rule_.x(i), ctx_, fac_);
    for (int j = 0; j < 2; ++j) dens_.block(i, j * nb, 1, nb) = F.row(j);
  });

  // power-law tail beyond the last node: F ~ A tau^-p, int_T^inf F/tau = F(T)/p
  const double T = edges.back();
  const ComponentTable F1 = density_values(T, ctx_, fac_);
  const ComponentTable F2 = density_values(2.0 * T, ctx_, fac_);
  tail_coeff_.resize(1, 2 * nb);
  tail_ = 0.0;
  for (int j = 0; j < 2; ++j)
    for (int m = 0; m < nb; ++m) {
      const cplx a1 = F1(j, m), a2 = F2(j, m);
      double p = 2.0;
      if (std::abs(a1) > 0 && std::abs(a2) > 0) p = std::max(1.0, std::log(std::abs(a1 / a2)) / std::log(2.0));
      tail_coeff_(0, j * nb + m) = a1 / p;
      tail_ = std::max(tail_, std::abs(a1) / p);
    }

  first_moment_ = (rule_.w.cwiseProduct(rule_.x)).transpose().cast<cplx>() * dens_;

  b_forms_.resize(2);
  for (int j = 0; j < 2; ++j) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(layout_.size());
    if (cls_.case_label == CaseLabel::III) {
      v(layout_.b(j)) = 1.0;
    } else if (cls_.case_label == CaseLabel::II) {
      const double x0 = -cls_.eta(0).real();
      const ComponentTable pb = psi_boundary(x0, +1);
      v = -layout_.affine(pb.row(j).transpose());
    }
    b_forms_[j] = v;
  }
}

namespace {

double local_width(const PanelRule& rule, double x) {
  const auto& e = rule.edges;
  const double ax = std::abs(x);
  auto it = std::upper_bound(e.begin(), e.end(), ax);
  if (it == e.begin() || it == e.end()) return e.size() > 1 ? e.back() - e[e.size() - 2] : 1.0;
  return *it - *(it - 1);
}

}  // namespace

ComponentTable RHProblem::psi_direct(cplx eta) const {
  const int nb = layout_.n_basis();
  const cplx e2 = eta * eta;
  Eigen::VectorXcd k(rule_.size());
  for (Eigen::Index i = 0; i < rule_.size(); ++i) {
    const double t = rule_.x(i);
    k(i) = rule_.w(i) * t / (t * t - e2);
  }
  const Eigen::RowVectorXcd row = k.transpose() * dens_ + tail_coeff_;
  ComponentTable out(2, nb);
  for (int j = 0; j < 2; ++j) out.row(j) = row.segment(j * nb, nb) / (kPi * kI);
  return out;
}

ComponentTable RHProblem::psi_subtracted(cplx eta) const {
  const int nb = layout_.n_basis();
  const double x = eta.real(), y = eta.imag();
  const double c = std::max(1.0, 2.0 * local_width(rule_, x));
  ComponentTable Fe = density(eta);
  Eigen::RowVectorXcd fe(2 * nb);
  for (int j = 0; j < 2; ++j) fe.segment(j * nb, nb) = Fe.row(j);
  Eigen::RowVectorXcd acc = Eigen::RowVectorXcd::Zero(2 * nb);
  for (Eigen::Index i = 0; i < rule_.size(); ++i) {
    const double t = rule_.x(i), w = rule_.w(i);
    for (int s : {1, -1}) {
      const double tau = s * t;
      const cplx d = tau - eta;
      if (d == cplx(0.0)) {
        // a node on eta itself: the regularized integrand tends to F'(eta)
        const double h = 1e-5 * (1.0 + std::abs(x));
        const ComponentTable dF = (density(cplx(x + h)) - density(cplx(x - h))) / (2.0 * h);
        for (int j = 0; j < 2; ++j) acc.segment(j * nb, nb) += w * dF.row(j);
        continue;
      }
      const double r = (c * c - y * y) / (c * c + (tau - x) * (tau - x));
      acc += (w / d) * (static_cast<double>(s) * dens_.row(i) - r * fe);
    }
  }
  acc /= 2.0 * kPi * kI;
  acc += tail_coeff_ / (kPi * kI);
  const double sgn = y > 0 ? 1.0 : (y < 0 ? -1.0 : 0.0);
  // r(eta) = 1 keeps the integrand regular; its own integral is known in closed form
  if (sgn != 0.0) acc += fe * (0.5 * sgn * (c - std::abs(y)) / c);
  ComponentTable out(2, nb);
  for (int j = 0; j < 2; ++j) out.row(j) = acc.segment(j * nb, nb);
  return out;
}


ComponentTable RHProblem::psi(cplx eta) const {
  if (eta.imag() == 0.0) throw Error(ErrorKind::InvalidParameter, "psi needs eta off the real axis");
  if (std::abs(eta.imag()) < local_width(rule_, eta.real())) return psi_subtracted(eta);
  return psi_direct(eta);
}

std::vector<ComponentTable> RHProblem::psi_many(const Eigen::VectorXcd& etas) const {
  const int nb = layout_.n_basis();
  const Eigen::Index ne = etas.size();
  std::vector<ComponentTable> out(ne);
  std::vector<Eigen::Index> direct;
  for (Eigen::Index e = 0; e < ne; ++e) {
    const cplx eta = etas(e);
    if (eta.imag() != 0.0 && std::abs(eta.imag()) >= local_width(rule_, eta.real()))
      direct.push_back(e);
    else
      out[e] = psi(eta);
  }
  const Eigen::Index block = 256;
  const std::size_t nblocks = (direct.size() + block - 1) / block;
  parallel_for(nblocks, [&](std::size_t bi) {
    const Eigen::Index lo = bi * block;
    const Eigen::Index hi = std::min<Eigen::Index>(direct.size(), lo + block);
    Eigen::MatrixXcd K(rule_.size(), hi - lo);
    for (Eigen::Index c = lo; c < hi; ++c) {
      const cplx e2 = etas(direct[c]) * etas(direct[c]);
      for (Eigen::Index i = 0; i < rule_.size(); ++i) {
        const double t = rule_.x(i);
        K(i, c - lo) = rule_.w(i) * t / (t * t - e2);
      }
    }
    const Eigen::MatrixXcd R = K.transpose() * dens_;
    for (Eigen::Index c = lo; c < hi; ++c) {
      ComponentTable t(2, nb);
      const Eigen::RowVectorXcd row = R.row(c - lo) + tail_coeff_;
      for (int j = 0; j < 2; ++j) t.row(j) = row.segment(j * nb, nb) / (kPi * kI);
      out[direct[c]] = t;
    }
  });
  return out;
}

ComponentTable RHProblem::psi_boundary(double x, int side) const {
  ComponentTable t = psi_subtracted(cplx(x, 0.0));
  const ComponentTable F = density(x);
  return t + 0.5 * side * F;
}

Eigen::VectorXcd RHProblem::b_form(int j) const { return b_forms_[j]; }

Eigen::VectorXcd RHProblem::phi_plus_form(int j, cplx eta) const {
  const ComponentTable p = psi(eta);
  return fac_.hplus(eta) * (layout_.affine(p.row(j).transpose()) + b_forms_[j]);
}

Eigen::VectorXcd RHProblem::phi_plus_boundary_form(int j, double x) const {
  const ComponentTable p = psi_boundary(x, +1);
  return fac_.hplus(x) * (layout_.affine(p.row(j).transpose()) + b_forms_[j]);
}

Eigen::VectorXcd RHProblem::leading_form(int j) const {
  if (!fac_.grows()) return b_forms_[j];
  const int nb = layout_.n_basis();
  const Eigen::VectorXcd m = first_moment_.block(0, j * nb, 1, nb).transpose();
  return -layout_.affine(m) / (kPi * kI);
}

Eigen::VectorXcd RHProblem::b_form_integral(int j) const {
  if (cls_.case_label != CaseLabel::II)
    throw Error(ErrorKind::UnsupportedCase, "the removability integral exists in case II only");
  const int nb = layout_.n_basis();
  const double x0 = -cls_.eta(0).real();
  // f_j(tau) / (H+(tau) (tau + eta_0)), assembled from the printed factors
  auto g = [&](double tau) -> Eigen::VectorXcd {
    const ComponentTable f = rhs_values(tau, ctx_);
    cplx factor = 1.0;
    bool skipped = false;
    for (auto z : fac_.upper_roots) {
      if (!skipped && std::abs(z - cls_.eta(0)) < 1e-12) {
        skipped = true;
        continue;
      }
      factor *= tau + z;
    }
    for (auto z : fac_.lower_roots) factor /= tau - z;
    return f.row(j).transpose() * factor;
  };
  const double eps = 1e-6;
  const Eigen::VectorXcd rho = 0.5 * eps * (g(x0 + eps) - g(x0 - eps));
  auto pv = [&](double s) -> Eigen::VectorXcd {
    const double one = 1.0 - s;
    const double u = s / one;
    if (u == 0.0) return Eigen::VectorXcd::Zero(nb);
    return (g(x0 + u) + g(x0 - u)) / (one * one);
  };
  const VectorQuadResult r = integrate(pv, nb, 0.0, 1.0, 1e-13, 1e-11);
  const Eigen::VectorXcd b = -r.value / (2.0 * kPi * kI) - 0.5 * rho;
  return layout_.affine(b);
}

// ---------------------------------------------------------------------------

RHSolution::RHSolution(std::shared_ptr<const RHProblem> problem, Eigen::VectorXcd unknowns)
    : problem_(std::move(problem)), x_(std::move(unknowns)) {
  const auto& L = problem_->layout();
  if (x_.size() == L.n_unknowns()) {
    Eigen::VectorXcd full(L.size());
    full.head(L.n_unknowns()) = x_;
    full(L.constant()) = 1.0;
    x_ = full;
  }
  // fixed b in cases I and II follows from the constants
  for (int j = 0; j < 2; ++j)
    if (problem_->classification().case_label != CaseLabel::III) {
      Eigen::VectorXcd bf = problem_->b_form(j);
      bf(L.b(j)) = 0.0;
      x_(L.b(j)) = (bf.transpose() * x_)(0);
    }
}

cplx RHSolution::phi_plus(int j, cplx eta) const {
  const RHProblem& p = *problem_;
  if (eta.imag() == 0.0) {
    const auto& L = p.layout();
    const ComponentTable ps = p.psi_boundary(eta.real(), +1);
    const cplx psi_val = (L.affine(ps.row(j).transpose()).transpose() * x_)(0);
    return p.factorization().hplus(eta) * (psi_val + b(j));
  }
  const auto& L = p.layout();
  const ComponentTable ps = p.psi(eta);
  const cplx psi_val = (L.affine(ps.row(j).transpose()).transpose() * x_)(0);
  return p.factorization().hplus(eta) * (psi_val + b(j));
}

cplx RHSolution::rhs(int j, cplx eta) const {
  const auto& L = problem_->layout();
  const ComponentTable f = rhs_values(eta, problem_->context());
  return (L.affine(f.row(j).transpose()).transpose() * x_)(0);
}

cplx RHSolution::leading(int j) const {
  const auto& L = problem_->layout();
  Eigen::VectorXcd lf = problem_->leading_form(j);
  if (problem_->classification().case_label != CaseLabel::I) return b(j);
  return (lf.transpose() * x_)(0) - lf(L.b(j)) * x_(L.b(j));
}

double check_removability(const RHSolution& sol, double tol) {
  const auto& cls = sol.problem().classification();
  if (cls.case_label != CaseLabel::II) return 0.0;
  const double x0 = -cls.eta(0).real();
  const double eps = 1e-3;
  double gap = 0.0;
  for (int j = 0; j < 2; ++j) {
    auto phi = [&](double x) { return sol.phi_plus(j, cplx(x, 0.0)); };
    const cplx right = 3.0 * phi(x0 + eps) - 3.0 * phi(x0 + 2 * eps) + phi(x0 + 3 * eps);
    const cplx left = 3.0 * phi(x0 - eps) - 3.0 * phi(x0 - 2 * eps) + phi(x0 - 3 * eps);
    gap = std::max(gap, std::abs(right - left) / std::max(1.0, std::abs(right)));
  }
  if (gap > tol) throw Error(ErrorKind::RemovabilityFailure, "Phi+ jumps at -eta_0 after fixing b");
  return gap;
}

}  // namespace sh
