#include "strip_helmholtz/field.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "strip_helmholtz/parallel.hpp"

namespace sh {

namespace {

constexpr double kBeta = 1.0;  // pole of the subtracted tail terms at -i kBeta

cplx contract(const Eigen::VectorXcd& form, const Eigen::VectorXcd& x) { return form.cwiseProduct(x).sum(); }

double wrap_2pi(double t) {
  t = std::fmod(t, 2.0 * kPi);
  return t < 0 ? t + 2.0 * kPi : t;
}

// arg(z) moved into (lo, lo + 2 pi]
double arg_window(cplx z, double lo) {
  double t = std::arg(z);
  while (t <= lo) t += 2.0 * kPi;
  while (t > lo + 2.0 * kPi) t -= 2.0 * kPi;
  return t;
}

// Real-axis panels: fine near the origin, then growing up to hmax until |s| = S.
std::vector<double> spectral_edges(double R, double S, double hmax) {
  std::vector<double> right = uniform_edges(0.0, R, 0.25);
  double w = 0.25;
  while (right.back() < S) {
    w = std::min(w * 1.15, hmax);
    right.push_back(std::min(S, right.back() + w));
  }
  std::vector<double> edges;
  for (auto it = right.rbegin(); it != right.rend(); ++it)
    if (*it > 0) edges.push_back(-*it);
  edges.insert(edges.end(), right.begin(), right.end());
  return edges;
}

double near_radius(const KernelContext& ctx) {
  double amax = 0.0;
  for (int j = 0; j < 3; ++j) amax = std::max(amax, std::abs(ctx.alpha(j)));
  return 2.0 * (std::abs(ctx.k()) + amax) + 10.0;
}

std::vector<cplx> wall_poly_roots(const KernelContext& ctx, int j) {
  const cplx al = ctx.alpha(j);
  if (ctx.model() == WallModel::Membrane) return {al, -al};
  return {al, kI * al, -al, -kI * al};
}

}  // namespace

const char* to_string(Sector s) {
  switch (s) {
    case Sector::D1Plus: return "D1+";
    case Sector::D2Plus: return "D2+";
    case Sector::D3Plus: return "D3+";
    case Sector::D1Minus: return "D1-";
    case Sector::D2Minus: return "D2-";
    case Sector::D3Minus: return "D3-";
  }
  return "?";
}

ContinuationAtlas::ContinuationAtlas(cplx k) : k_(k), arg_k_(std::arg(k)) {
  if (!(k.imag() > 0.0) || k.real() < 0.0)
    throw Error(ErrorKind::InvalidParameter, "the atlas needs k in the open first quadrant");
}

Sector ContinuationAtlas::sector(cplx xi) const {
  const double t = wrap_2pi(std::arg(xi));
  const double al = arg_k_;
  if (t < al) return Sector::D1Plus;
  if (t < 0.5 * kPi) return Sector::D2Plus;
  if (t < kPi) return Sector::D3Plus;
  if (t < al + kPi) return Sector::D1Minus;
  if (t < 1.5 * kPi) return Sector::D2Minus;
  return Sector::D3Minus;
}

cplx ContinuationAtlas::eta_of_xi(cplx xi) const {
  const cplx dp = xi - k_, dm = xi + k_;
  const double tp = arg_window(dp, arg_k_ - 2.0 * kPi);
  const double tm = arg_window(dm, arg_k_ - kPi);
  return kI * std::sqrt(std::abs(dp) * std::abs(dm)) * std::exp(0.5 * kI * (tp + tm));
}

HalfPlane ContinuationAtlas::expected_half_plane(Sector s) {
  return (s == Sector::D2Plus || s == Sector::D2Minus) ? HalfPlane::Lower : HalfPlane::Upper;
}

double ContinuationAtlas::boundary_distance(cplx xi) const {
  const double t = wrap_2pi(std::arg(xi));
  const double rays[] = {0.0, arg_k_, 0.5 * kPi, kPi, arg_k_ + kPi, 1.5 * kPi, 2.0 * kPi};
  double d = 1e300;
  for (double r : rays) d = std::min(d, std::abs(t - r));
  return d;
}

FieldSolution::FieldSolution(std::shared_ptr<const VerticalSpectrum> spectrum, ConstantsSolution constants)
    : spectrum_(std::move(spectrum)),
      constants_(std::move(constants)),
      rh_(spectrum_->problem_ptr(), constants_.unknowns) {
  const auto& ctx = problem().context();
  // the flux trace inverts the wall forcing by residues below the contour
  double lowest = 1e300;
  for (int j = 0; j < 2; ++j)
    for (auto r : wall_poly_roots(ctx, j))
      if (r.imag() > 0) lowest = std::min(lowest, r.imag());
  shift_ = std::min(0.25, 0.5 * lowest);

  const cplx far = kI * 1e4;
  const Eigen::MatrixXcd ph = phi_at(Eigen::VectorXcd::Constant(1, far));
  for (int j = 0; j < 2; ++j) {
    c1_[j] = rh_.leading(j);
    const cplx e = far + kI * kBeta;
    c2_[j] = e * e * (ph(0, j) - c1_[j] / e);
  }
}

Eigen::MatrixXcd FieldSolution::phi_at(const Eigen::VectorXcd& etas) const {
  const RHProblem& p = problem();
  const auto& L = p.layout();
  const auto& x = constants_.unknowns;
  const std::vector<ComponentTable> ps = p.psi_many(etas);
  Eigen::MatrixXcd out(etas.size(), 2);
  const Eigen::VectorXcd b0 = p.b_form(0), b1 = p.b_form(1);
  for (Eigen::Index i = 0; i < etas.size(); ++i) {
    const cplx hp = p.factorization().hplus(etas(i));
    out(i, 0) = hp * contract(L.affine(ps[i].row(0).transpose()) + b0, x);
    out(i, 1) = hp * contract(L.affine(ps[i].row(1).transpose()) + b1, x);
  }
  return out;
}

cplx FieldSolution::phi_jump(int j, cplx eta) const {
  const auto& ctx = problem().context();
  if (eta.imag() > 0.0) {
    const cplx P = rh_.phi_plus(j, eta);
    return P - (P - rh_.rhs(j, eta)) / coefficient_H(eta, ctx);
  }
  if (eta.imag() < 0.0) {
    const cplx M = rh_.phi_plus(j, -eta);
    return coefficient_H(eta, ctx) * M + rh_.rhs(j, eta) - M;
  }
  return rh_.phi_plus(j, eta) - rh_.phi_plus(j, -eta);
}

cplx FieldSolution::n_value(cplx eta, cplx zeta, cplx phi0, cplx phi1) const {
  const auto& ctx = problem().context();
  const auto& x = constants_.unknowns;
  const ForcingForms g = forcing_forms(eta, zeta, ctx, problem().layout());
  const auto& src = ctx.config().source;
  const cplx n0 = (-ctx.mu_tilde(0, eta) - zeta) * phi0 + contract(g.g0 + g.g2a, x) +
                  std::exp(kI * eta * src.x - zeta * src.y);
  const cplx n1 = (zeta - ctx.mu_tilde(1, eta)) * phi1 + contract(g.g1 + g.g2b, x);
  return n0 + std::exp(-ctx.a() * zeta) * n1;
}

cplx FieldSolution::u_hat_vertical(cplx zeta, bool flip) const {
  const auto& ctx = problem().context();
  cplx eta = std::sqrt(zeta * zeta + ctx.k() * ctx.k());
  if (flip) eta = -eta;
  if (std::abs(eta) == 0.0) throw Error(ErrorKind::PoleOnEvaluation, "u^ difference form at eta = 0");
  const auto& x = constants_.unknowns;
  const auto& L = problem().layout();
  const auto& src = ctx.config().source;
  const ForcingForms gp = forcing_forms(eta, zeta, ctx, L), gm = forcing_forms(-eta, zeta, ctx, L);
  const cplx d0 = phi_jump(0, eta), d1 = phi_jump(1, eta);
  const cplx mt0 = ctx.mu_tilde(0, eta), mt1 = ctx.mu_tilde(1, eta);
  const cplx diff = (-mt0 - zeta) * d0 + contract(gp.g0 - gm.g0, x) +
                    (std::exp(kI * eta * src.x) - std::exp(-kI * eta * src.x)) * std::exp(-zeta * src.y) +
                    std::exp(-ctx.a() * zeta) * ((zeta - mt1) * d1 + contract(gp.g1 - gm.g1, x));
  return kI * diff / (2.0 * eta);
}

cplx FieldSolution::u_hat_vertical_upper(cplx zeta) const {
  const auto& ctx = problem().context();
  cplx eta = std::sqrt(zeta * zeta + ctx.k() * ctx.k());
  if (eta.imag() < 0) eta = -eta;
  if (!(eta.imag() > 0)) throw Error(ErrorKind::BranchSelectionFailure, "eta(zeta) is real");
  const cplx vp = ctx.vertical_poly(zeta);
  const cplx den = eta * vp + kI * ctx.mu(2);
  if (std::abs(den) < 1e-14 * (1.0 + std::abs(eta * vp))) throw Error(ErrorKind::PoleOnEvaluation, "eta vp + i mu_2 = 0");
  return kI * vp * n_value(eta, zeta, rh_.phi_plus(0, eta), rh_.phi_plus(1, eta)) / den;
}

cplx FieldSolution::u_hat_vertical_lower(cplx zeta) const {
  const auto& ctx = problem().context();
  cplx eta = std::sqrt(zeta * zeta + ctx.k() * ctx.k());
  if (eta.imag() > 0) eta = -eta;
  if (!(eta.imag() < 0)) throw Error(ErrorKind::BranchSelectionFailure, "eta(zeta) is real");
  const auto& x = constants_.unknowns;
  const auto& src = ctx.config().source;
  const ForcingForms g = forcing_forms(-eta, zeta, ctx, problem().layout());
  const cplx m0 = rh_.phi_minus(0, eta), m1 = rh_.phi_minus(1, eta);
  const cplx n = (-ctx.mu_tilde(0, eta) - zeta) * m0 + contract(g.g0 + g.g2a, x) +
                 std::exp(-kI * eta * src.x - zeta * src.y) +
                 std::exp(-ctx.a() * zeta) * ((zeta - ctx.mu_tilde(1, eta)) * m1 + contract(g.g1 + g.g2b, x));
  const cplx vp = ctx.vertical_poly(zeta);
  const cplx den = eta * vp - kI * ctx.mu(2);
  if (std::abs(den) < 1e-14 * (1.0 + std::abs(eta * vp))) throw Error(ErrorKind::PoleOnEvaluation, "eta vp - i mu_2 = 0");
  return -kI * vp * n / den;
}

cplx FieldSolution::trace_vertical(double y) const {
  const double a = problem().context().a();
  if (!(y > 0.0 && y < a)) throw Error(ErrorKind::InvalidParameter, "trace_vertical needs 0 < y < a");
  return contract(spectrum_->v_form(y), constants_.unknowns);
}

cplx FieldSolution::trace_vertical_ux(double y, int order) const {
  const double a = problem().context().a();
  if (!(y >= 0.0 && y <= a)) throw Error(ErrorKind::InvalidParameter, "trace_vertical_ux needs 0 <= y <= a");
  return contract(spectrum_->w_form(y, order), constants_.unknowns);
}

cplx FieldSolution::trace_vertical_residue(double y) const {
  const RHProblem& p = problem();
  const auto& ctx = p.context();
  const double a = ctx.a();
  if (!(y > 0.0 && y < a)) throw Error(ErrorKind::InvalidParameter, "trace_vertical_residue needs 0 < y < a");
  const CoefficientBundle cb = coefficient_bundle(p);
  const auto& c = constants_.c;
  const auto& src = ctx.config().source;
  const cplx a2 = ctx.alpha_power(2);
  cplx u = 0.0;
  for (int m = cb.s; m < 2; ++m) {
    const cplx em = cb.eta[m], xi = cb.xi[m];
    const cplx p0 = rh_.phi_plus(0, em), p1 = rh_.phi_plus(1, em);
    const cplx w0 = ctx.alpha_power(0) - em * em, w1 = ctx.alpha_power(1) - em * em, w2 = a2 - xi * xi;
    const cplx bottom = cb.rho(0, m) * p0 - c(0) / w0 - c(2) / w2;
    const cplx top = cb.rho(1, m) * p1 + c(1) / w1 + c(3) / w2;
    u += w2 / cb.t[m] *
         (bottom * std::exp(kI * xi * y) + top * std::exp(kI * xi * (a - y)) +
          std::exp(kI * xi * std::abs(y - src.y) + kI * em * src.x));
  }
  return u;
}

cplx FieldSolution::wall_numerator(int j, cplx eta) const {
  const auto& c = constants_.c;
  if (problem().context().model() == WallModel::Membrane) return j == 0 ? -c(0) : c(1);
  return j == 0 ? c(0) - kI * eta * c(1) : -(c(2) - kI * eta * c(3));
}

std::vector<Estimate> FieldSolution::horizontal(const Eigen::VectorXd& xs, int j, TraceKind kind, int order) const {
  if (j != 0 && j != 1) throw Error(ErrorKind::InvalidParameter, "wall index must be 0 or 1");
  if (xs.size() == 0) return {};
  if (!(xs.minCoeff() >= 0.0)) throw Error(ErrorKind::InvalidParameter, "horizontal trace needs x >= 0");
  // the smallest x sets the truncation, the largest the panel width
  const double xlo = xs.minCoeff(), xhi = xs.maxCoeff();
  const auto& ctx = problem().context();
  const double R = near_radius(ctx);
  const double S = xlo > 0 ? std::clamp(200.0 / xlo, 200.0, 2e4) : 2e4;
  const double hmax = xhi > 0 ? std::max(0.25, 6.0 / xhi) : 1e300;
  const PanelRule rule = gk15_panels(spectral_edges(R, S, hmax));
  const Eigen::Index n = rule.size();
  const double d = kind == TraceKind::Continued ? 0.0 : shift_;
  Eigen::VectorXcd etas(n);
  for (Eigen::Index i = 0; i < n; ++i) etas(i) = cplx(rule.x(i), d);

  Eigen::VectorXcd vals(n);
  const cplx c1 = c1_[j], c2 = c2_[j];
  // analytic inverse of whatever was subtracted, as a function of x
  std::function<cplx(double)> added = [](double) { return cplx(0.0); };
  if (kind == TraceKind::Shifted) {
    const Eigen::MatrixXcd ph = phi_at(etas);
    for (Eigen::Index i = 0; i < n; ++i) {
      const cplx e = etas(i) + kI * kBeta;
      vals(i) = ph(i, j) - c1 / e - c2 / (e * e);
    }
    added = [=](double x) { return (-kI * c1 - c2 * x) * std::exp(-kBeta * x); };
  } else if (kind == TraceKind::Continued) {
    const RHProblem& p = problem();
    const Eigen::VectorXcd bj = p.b_form(j);
    const auto& L = p.layout();
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
      const double s = rule.x(i);
      const ComponentTable pm = p.psi_boundary(s, -1);
      const cplx phi = p.factorization().hplus(s) * contract(L.affine(pm.row(j).transpose()) + bj, constants_.unknowns) +
                       rh_.rhs(j, s);
      const cplx e = s + kI * kBeta;
      vals(i) = phi - c1 / e - c2 / (e * e);
    });
    added = [=](double x) { return (-kI * c1 - c2 * x) * std::exp(-kBeta * x); };
  } else {
    // mu~ Phi part on the contour; the wall forcing by residues below it
    const Eigen::MatrixXcd ph = phi_at(etas);
    const cplx mu = ctx.mu(j);
    const bool membrane = ctx.model() == WallModel::Membrane;
    for (Eigen::Index i = 0; i < n; ++i) {
      const cplx eta = etas(i);
      vals(i) = ctx.mu_tilde(j, eta) * ph(i, j) * std::pow(-kI * eta, order);
      if (membrane && order == 1) {
        const cplx e = eta + kI * kBeta;
        vals(i) -= kI * mu * c1 / (e * e);
      }
    }
    const bool tail = membrane && order == 1;
    std::vector<cplx> roots;
    for (auto r : wall_poly_roots(ctx, j))
      if (r.imag() < d) roots.push_back(r);
    // u_y(x, 0) = [mu~0 Phi0] - g0, u_y(x, a) = g1 - [mu~1 Phi1]
    const double sg = j == 0 ? 1.0 : -1.0;
    if (j == 1) vals = -vals;
    added = [=, this](double x) {
      cplx g = 0.0;
      for (auto r : roots)
        g += wall_numerator(j, r) * std::pow(-kI * r, order) * std::exp(-kI * r * x) / ctx.wall_poly_derivative(j, r);
      g *= -kI;
      const cplx t = tail ? -kI * mu * c1 * x * std::exp(-kBeta * x) : cplx(0.0);
      return sg * (t - g);
    };
  }

  std::vector<Estimate> out(xs.size());
  for (Eigen::Index k = 0; k < xs.size(); ++k) {
    const double x = xs(k);
    cplx acc = 0.0, accg = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const cplx t = vals(i) * std::exp(-kI * etas(i) * x);
      acc += rule.w(i) * t;
      accg += rule.w_gauss(i) * t;
    }
    out[k].value = acc / (2.0 * kPi) + added(x);
    out[k].error = std::abs(acc - accg) / (2.0 * kPi);
  }
  return out;
}

Estimate FieldSolution::trace_horizontal_estimate(double x, int j) const {
  return horizontal(Eigen::VectorXd::Constant(1, x), j, TraceKind::Shifted, 0)[0];
}

std::vector<Estimate> FieldSolution::trace_horizontal_row(const Eigen::VectorXd& xs, int j) const {
  return horizontal(xs, j, TraceKind::Shifted, 0);
}

cplx FieldSolution::trace_horizontal_continued(double x, int j) const {
  return horizontal(Eigen::VectorXd::Constant(1, x), j, TraceKind::Continued, 0)[0].value;
}

cplx FieldSolution::trace_horizontal_uy(double x, int j, int order) const {
  if (order != 0 && order != 1) throw Error(ErrorKind::InvalidParameter, "order must be 0 or 1");
  return horizontal(Eigen::VectorXd::Constant(1, x), j, TraceKind::Flux, order)[0].value;
}

std::array<cplx, 2> FieldSolution::corner_mismatch() const {
  const auto& x = constants_.unknowns;
  return {contract(spectrum_->corner_form(0), x), contract(spectrum_->corner_form(1), x)};
}

FieldSolution::Profile FieldSolution::profile(double y) const {
  const double a = problem().context().a();
  // panels double in width away from s = y, then cap at a/8
  auto side = [&](double from, double to) {
    std::vector<double> e{from};
    const double dir = to > from ? 1.0 : -1.0;
    double w = 1e-4 * a;
    while (dir * (to - e.back()) > 1e-15) {
      const double next = e.back() + dir * std::min(w, dir * (to - e.back()));
      e.push_back(next);
      w = std::min(2.0 * w, 0.125 * a);
    }
    return e;
  };
  std::vector<double> edges;
  if (y > 0) {
    std::vector<double> l = side(y, 0.0);
    edges.assign(l.rbegin(), l.rend());
  } else {
    edges.push_back(0.0);
  }
  if (y < a) {
    std::vector<double> r = side(y, a);
    edges.insert(edges.end(), r.begin() + 1, r.end());
  }
  Profile pr;
  pr.rule = gk15_panels(edges);
  const Eigen::Index n = pr.rule.size();
  pr.w.resize(n);
  pr.v.resize(n);
  const Eigen::VectorXcd& xc = constants_.unknowns;
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    const double s = pr.rule.x(i);
    pr.w(i) = contract(spectrum_->w_form(s, 0), xc);
    pr.v(i) = contract(spectrum_->v_form(s), xc);
  });
  pr.wy = contract(spectrum_->w_form(y, 0), xc);
  // on the walls the inner one-sided limit of u(0, y)
  const double yin = std::clamp(y, 1e-12 * a, a - 1e-12 * a);
  pr.vy = contract(spectrum_->v_form(yin), xc);
  return pr;
}

cplx FieldSolution::u_tilde(cplx eta, double y, const Profile& pr) const {
  const auto& ctx = problem().context();
  const double a = ctx.a();
  const auto& src = ctx.config().source;
  const cplx z = zeta_even(eta, ctx.k());
  const auto [p0, p1] = fundamental_pair(y, eta, ctx);
  const cplx mt0 = ctx.mu_tilde(0, eta), mt1 = ctx.mu_tilde(1, eta);
  const cplx q0 = (z - mt0) * p0, q1 = (z - mt1) * p1;
  auto G = [&](double s) {
    return (-std::exp(-z * std::abs(y - s)) - std::exp(-z * s) * q0 - std::exp(-z * (a - s)) * q1) / (2.0 * z);
  };
  // int_0^a G(y, s) ds in closed form
  const cplx ea = std::exp(-z * a);
  const cplx I0 = (-(2.0 - std::exp(-z * y) - std::exp(-z * (a - y))) / z - (1.0 - ea) / z * (q0 + q1)) / (2.0 * z);
  const cplx fy = pr.wy - kI * eta * pr.vy;
  cplx acc = fy * I0;
  for (Eigen::Index i = 0; i < pr.rule.size(); ++i) {
    const double s = pr.rule.x(i);
    acc += pr.rule.w(i) * G(s) * (pr.w(i) - kI * eta * pr.v(i) - fy);
  }
  const auto& x = constants_.unknowns;
  const ForcingForms g = forcing_forms(eta, z, ctx, problem().layout());
  acc += contract(g.g0, x) * p0 + contract(g.g1, x) * p1;
  acc -= std::exp(kI * eta * src.x) * G(src.y);
  return acc;
}

cplx FieldSolution::u_tilde(cplx eta, double y) const {
  const double a = problem().context().a();
  if (!(y >= 0.0 && y <= a)) throw Error(ErrorKind::InvalidParameter, "u_tilde needs 0 <= y <= a");
  return u_tilde(eta, y, profile(y));
}

std::vector<Estimate> FieldSolution::interior_row_estimate(const Eigen::VectorXd& xs, double y) const {
  const auto& ctx = problem().context();
  const double a = ctx.a();
  const auto& src = ctx.config().source;
  if (!(y > 0.0 && y < a)) throw Error(ErrorKind::InvalidParameter, "interior points need 0 < y < a");
  double xmax = 0.0;
  for (double x : xs) {
    if (!(x > 0.0)) throw Error(ErrorKind::InvalidParameter, "interior points need x > 0");
    if (std::hypot(x - src.x, y - src.y) < 1e-2 * a)
      throw Error(ErrorKind::SourceSingularity, "point inside the source exclusion radius");
    xmax = std::max(xmax, x);
  }
  const Profile pr = profile(y);
  const double dy = std::abs(y - src.y);
  const double S = std::clamp(30.0 / std::max(dy, 1e-300), 300.0, 1e4);
  const double hmax = std::max(0.25, 6.0 / xmax);
  const PanelRule rule = gk15_panels(spectral_edges(near_radius(ctx), S, hmax));
  const Eigen::Index n = rule.size();
  Eigen::VectorXcd vals(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    const cplx eta = rule.x(i);
    const cplx e = eta + kI * kBeta;
    // u~ ~ i v/eta - w/eta^2 at infinity
    vals(i) = u_tilde(eta, y, pr) - kI * pr.vy / e + pr.wy / (e * e);
  });
  std::vector<Estimate> out(xs.size());
  for (Eigen::Index k = 0; k < xs.size(); ++k) {
    const double x = xs(k);
    cplx acc = 0.0, accg = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const cplx t = vals(i) * std::exp(-kI * rule.x(i) * x);
      acc += rule.w(i) * t;
      accg += rule.w_gauss(i) * t;
    }
    out[k].value = acc / (2.0 * kPi) + (pr.vy + x * pr.wy) * std::exp(-kBeta * x);
    out[k].error = std::abs(acc - accg) / (2.0 * kPi);
  }
  return out;
}

Eigen::VectorXcd FieldSolution::interior_row(const Eigen::VectorXd& xs, double y) const {
  const auto est = interior_row_estimate(xs, y);
  Eigen::VectorXcd v(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) v(i) = est[i].value;
  return v;
}

cplx FieldSolution::interior(double x, double y) const {
  return interior_row_estimate(Eigen::VectorXd::Constant(1, x), y)[0].value;
}

cplx FieldSolution::pressure(double x, double y) const {
  const auto& cfg = problem().context().config();
  return kI * cfg.omega * cfg.rho * interior(x, y);
}

cplx FieldSolution::wall_deflection(double x, int j) const {
  const auto& cfg = problem().context().config();
  return kI / cfg.omega * trace_horizontal_uy(x, j, 0);
}

FieldGrid field_grid(const FieldSolution& fs, const std::vector<double>& xs, const std::vector<double>& ys) {
  FieldGrid g;
  g.kind = "interior";
  g.method = "green-inverse";
  g.fingerprint = config_fingerprint(fs.problem().context().config());
  const Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  for (double y : ys) {
    const auto row = fs.interior_row_estimate(xv, y);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      g.x.push_back(xs[i]);
      g.y.push_back(y);
      g.values.push_back(row[i].value);
      g.err_est.push_back(row[i].error);
    }
  }
  return g;
}

FieldGrid trace_grid(const FieldSolution& fs, const std::vector<double>& xs, const std::vector<double>& ys) {
  FieldGrid g;
  g.kind = "trace";
  g.method = "shifted-contour;vertical-spectrum";
  g.fingerprint = config_fingerprint(fs.problem().context().config());
  const double a = fs.problem().context().a();
  const Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  for (int j = 0; j < 2; ++j) {
    const auto row = fs.trace_horizontal_row(xv, j);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      g.x.push_back(xs[i]);
      g.y.push_back(j == 0 ? 0.0 : a);
      g.values.push_back(row[i].value);
      g.err_est.push_back(row[i].error);
    }
  }
  const double tail = fs.problem().tail_estimate();
  for (double y : ys) {
    g.x.push_back(0.0);
    g.y.push_back(y);
    g.values.push_back(fs.trace_vertical(y));
    g.err_est.push_back(tail);
  }
  return g;
}

Pipeline solve_pipeline(const WaveguideConfig& cfg, std::optional<CaseLabel> override, SystemOptions opt) {
  Pipeline p{KernelContext(cfg), {}, nullptr, nullptr, nullptr};
  p.cls = classify(p.ctx, override);
  p.problem = std::make_shared<RHProblem>(p.ctx, p.cls);
  auto vs = std::make_shared<VerticalSpectrum>(p.problem);
  p.spectrum = vs;
  ConstantsSolution cs = solve_constants(*p.problem, assemble_system(*vs, opt));
  p.field = std::make_shared<FieldSolution>(vs, std::move(cs));
  return p;
}

}  // namespace sh
