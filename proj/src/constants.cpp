#include "strip_helmholtz/constants.hpp"

#include <algorithm>
#include <cmath>

#include "strip_helmholtz/parallel.hpp"

namespace sh {

cplx psi_quadrature(const RHProblem& problem, int j, int m, cplx eta) {
  if (eta.imag() == 0.0) return problem.psi_boundary(eta.real(), +1)(j, m);
  return problem.psi(eta)(j, m);
}

namespace {

// Residue of a meromorphic function at p from a trapezoidal circle of radius r.
template <class Fn>
cplx circle_residue(const Fn& f, cplx p, double r, int n = 32) {
  cplx s = 0.0;
  for (int i = 0; i < n; ++i) {
    const cplx w = std::polar(r, 2.0 * kPi * (i + 0.5) / n);
    s += f(p + w) * w;
  }
  return s / static_cast<double>(n);
}

double nearest_other(cplx p, const std::vector<cplx>& poles) {
  double d = 1e300;
  for (auto q : poles)
    if (std::abs(q - p) > 1e-12) d = std::min(d, std::abs(q - p));
  return d;
}

}  // namespace

SeriesValue psi_series(const RHProblem& problem, int j, int m, cplx eta, const DispersionZeros& zeros,
                       int max_terms, double tol) {
  const int nc = problem.layout().nc;
  if (m < 0 || m >= nc) throw Error(ErrorKind::InvalidParameter, "the series covers the edge-constant components only");
  const cplx e = eta.imag() < 0 ? -eta : eta;
  auto F = [&](cplx z) { return problem.density(z)(j, m); };

  // every pole of the continued density, both half-planes, for the circle radii
  std::vector<cplx> all;
  const auto& lower = problem.factorization().lower_roots;
  for (auto z : lower) {
    all.push_back(z);
    all.push_back(-z);
  }
  const int ns = std::min<int>(static_cast<int>(zeros.tau.size()), max_terms + 2);
  for (int s = 0; s < ns; ++s) {
    all.push_back(zeros.tau[s]);
    all.push_back(-zeros.tau[s]);
  }
  auto radius = [&](cplx p) { return std::min(0.1, 0.3 * nearest_other(p, all)); };

  SeriesValue out;
  cplx sum = 0.0;
  for (auto z : lower) sum -= circle_residue(F, z, radius(z)) / (z - e);

  // Levin u-transform of order kLevin over the latest partial sums; the terms decay
  // algebraically, so the plain partial sums would need thousands of zeros.
  constexpr int kLevin = 8;
  std::vector<cplx> terms, partial, accel;
  auto levin = [&](int n) {
    cplx num = 0.0, den = 0.0;
    const int n0 = n - kLevin - 1;
    double binom = 1.0;
    for (int i = 0; i <= kLevin; ++i) {
      const int m = n0 + i;
      const cplx w = static_cast<double>(m + 1) * terms[m];
      const double c = (i % 2 ? -binom : binom) * std::pow((m + 1.0) / (n0 + kLevin + 1.0), kLevin - 1);
      num += c * partial[m] / w;
      den += c / w;
      binom = binom * (kLevin - i) / (i + 1);
    }
    return num / den;
  };

  const int available = static_cast<int>(zeros.tau.size());
  for (int s = 0; s < max_terms; ++s) {
    if (s >= available)
      throw Error(ErrorKind::SeriesTruncationTooShort, "ran out of dispersion zeros before the series converged");
    const cplx p = -zeros.tau[s];
    const cplx term = -circle_residue(F, p, radius(p)) / (p - e);
    sum += term;
    terms.push_back(term);
    partial.push_back(sum);
    const int n = s + 1;
    if (term == 0.0) {
      out.value = out.partial = sum;
      out.terms = n;
      return out;
    }
    if (n < 2 * kLevin) continue;
    accel.push_back(levin(n));
    const std::size_t na = accel.size();
    if (na < 5) continue;
    out.tail = std::abs(accel[na - 1] - accel[na - 5]);
    if (out.tail < tol * std::max(std::abs(accel[na - 1]), 1.0)) {
      out.value = accel[na - 1];
      out.partial = sum;
      out.terms = n;
      return out;
    }
  }
  throw Error(ErrorKind::SeriesTruncationTooShort, "series tail above tolerance after the term cap");
}

void LinearRows::append(const Eigen::VectorXcd& row, std::string label) {
  if (rows.size() == 0) rows.resize(0, row.size());
  rows.conservativeResize(rows.rows() + 1, row.size());
  rows.row(rows.rows() - 1) = row.transpose();
  labels.push_back(std::move(label));
}

void LinearRows::append(const LinearRows& other) {
  for (Eigen::Index i = 0; i < other.size(); ++i) append(other.rows.row(i).transpose(), other.labels[i]);
}

ForcingForms forcing_forms(cplx eta, cplx zeta, const KernelContext& ctx, const UnknownLayout& L) {
  ForcingForms f;
  f.g0 = f.g1 = f.g2a = f.g2b = Eigen::VectorXcd::Zero(L.size());
  const cplx w0 = ctx.wall_poly(0, eta), w1 = ctx.wall_poly(1, eta);
  const cplx vp = ctx.vertical_poly(zeta);
  if (ctx.model() == WallModel::Membrane) {
    f.g0(0) = -1.0 / w0;
    f.g1(1) = 1.0 / w1;
    f.g2a(2) = -1.0 / vp;
    f.g2b(3) = 1.0 / vp;
  } else {
    f.g0(0) = 1.0 / w0;
    f.g0(1) = -kI * eta / w0;
    f.g1(2) = -1.0 / w1;
    f.g1(3) = kI * eta / w1;
    f.g2a(4) = 1.0 / vp;
    f.g2a(5) = zeta / vp;
    f.g2b(6) = -1.0 / vp;
    f.g2b(7) = -zeta / vp;
  }
  return f;
}

namespace {

Eigen::VectorXcd phi_form_from(const RHProblem& p, int j, cplx eta, const ComponentTable& psi) {
  const auto& L = p.layout();
  return p.factorization().hplus(eta) * (L.affine(psi.row(j).transpose()) + p.b_form(j));
}

// The two halves of N(eta, zeta): N = N0 + exp(-a zeta) N1.
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> n_forms(const RHProblem& p, cplx eta, cplx zeta,
                                                      const Eigen::VectorXcd& phi0,
                                                      const Eigen::VectorXcd& phi1) {
  const auto& ctx = p.context();
  const auto& L = p.layout();
  const ForcingForms g = forcing_forms(eta, zeta, ctx, L);
  const auto& src = ctx.config().source;
  Eigen::VectorXcd n0 = (-ctx.mu_tilde(0, eta) - zeta) * phi0 + g.g0 + g.g2a;
  n0(L.constant()) += std::exp(kI * eta * src.x - zeta * src.y);
  Eigen::VectorXcd n1 = (zeta - ctx.mu_tilde(1, eta)) * phi1 + g.g1 + g.g2b;
  return {n0, n1};
}

cplx eta_of_t(double t, cplx k) { return kI * std::sqrt(cplx(t * t) - k * k); }

}  // namespace

VerticalSpectrum::VerticalSpectrum(std::shared_ptr<const RHProblem> problem, double t_max)
    : problem_(std::move(problem)) {
  const RHProblem& p = *problem_;
  const auto& ctx = p.context();
  const auto& L = p.layout();
  const int sz = L.size();

  // R = pref * N at the nodes t, pref = i / (eta vp + i mu_2)
  auto eval = [&](const Eigen::VectorXd& t, Eigen::MatrixXcd& r0, Eigen::MatrixXcd& r1) {
    const Eigen::Index n = t.size();
    Eigen::VectorXcd etas(n);
    for (Eigen::Index i = 0; i < n; ++i) etas(i) = eta_of_t(t(i), ctx.k());
    const std::vector<ComponentTable> ps = p.psi_many(etas);
    r0.resize(n, sz);
    r1.resize(n, sz);
    for (Eigen::Index i = 0; i < n; ++i) {
      const cplx eta = etas(i), zeta = kI * t(i);
      const cplx pref = kI / (eta * ctx.vertical_poly(zeta) + kI * ctx.mu(2));
      const auto [n0, n1] = n_forms(p, eta, zeta, phi_form_from(p, 0, eta, ps[i]), phi_form_from(p, 1, eta, ps[i]));
      r0.row(i) = pref * n0.transpose();
      r1.row(i) = pref * n1.transpose();
    }
  };

  double amax = 0.0;
  for (int j = 0; j < 3; ++j) amax = std::max(amax, std::abs(ctx.alpha(j)));
  const double R = 2.0 * (std::abs(ctx.k()) + amax) + 10.0;
  std::vector<double> right = uniform_edges(0.0, R, 0.25);
  append_geometric(right, t_max, 1.2);
  std::vector<double> edges;
  for (auto it = right.rbegin(); it != right.rend(); ++it)
    if (*it > 0) edges.push_back(-*it);
  edges.insert(edges.end(), right.begin(), right.end());

  auto sampler = [&](const Eigen::VectorXd& t) {
    Eigen::MatrixXcd r0, r1;
    eval(t, r0, r1);
    Eigen::MatrixXcd out(t.size(), 2 * sz);
    out << r0, r1;
    return out;
  };
  edges = refine_edges(edges, sampler, 1e-11, 10);
  rule_ = gk15_panels(edges);

  const Eigen::Index nt = rule_.size();
  R0_.resize(nt, sz);
  R1_.resize(nt, sz);
  const Eigen::Index block = 512;
  const std::size_t nb = (nt + block - 1) / block;
  parallel_for(nb, [&](std::size_t b) {
    const Eigen::Index lo = b * block, hi = std::min<Eigen::Index>(nt, lo + block);
    Eigen::MatrixXcd r0, r1;
    eval(rule_.x.segment(lo, hi - lo), r0, r1);
    R0_.middleRows(lo, hi - lo) = r0;
    R1_.middleRows(lo, hi - lo) = r1;
  });

  A0_ = -p.leading_form(0);
  A1_ = p.leading_form(1);
  G0_.resize(nt, sz);
  G1_.resize(nt, sz);
  for (Eigen::Index i = 0; i < nt; ++i) {
    const double t = rule_.x(i);
    const cplx vp = ctx.vertical_poly(kI * t);
    const double s = t / (t * t + 1.0);
    G0_.row(i) = vp * R0_.row(i) - s * A0_.transpose();
    G1_.row(i) = vp * R1_.row(i) - s * A1_.transpose();
  }
}

Eigen::VectorXcd VerticalSpectrum::residue_part(double y, int order) const {
  const auto& ctx = problem_->context();
  const auto& L = problem_->layout();
  const double a = ctx.a();
  const bool membrane = ctx.model() == WallModel::Membrane;
  // roots of vp(it) in t
  std::vector<cplx> roots;
  const cplx al = ctx.alpha(2);
  if (membrane) {
    roots = {al, -al};
  } else {
    roots = {al, kI * al, -al, -kI * al};
  }
  auto dvp = [&](cplx t) { return membrane ? -2.0 * t : -4.0 * t * t * t; };
  // -(1/2 pi) int num(it) e^{itY} / vp(it) dt by residues
  auto term = [&](double Y, const std::function<cplx(cplx)>& num) {
    cplx s = 0.0;
    const bool up = Y >= 0.0;
    for (auto t : roots) {
      if (up != (t.imag() > 0)) continue;
      s += num(t) * std::pow(kI * t, order) * std::exp(kI * t * Y) / dvp(t);
    }
    return up ? -kI * s : kI * s;
  };
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(L.size());
  if (membrane) {
    v(2) = term(y, [](cplx) { return cplx(-1.0); });
    v(3) = term(y - a, [](cplx) { return cplx(1.0); });
  } else {
    v(4) = term(y, [](cplx) { return cplx(1.0); });
    v(5) = term(y, [](cplx t) { return kI * t; });
    v(6) = term(y - a, [](cplx) { return cplx(-1.0); });
    v(7) = term(y - a, [](cplx t) { return -kI * t; });
  }
  return v;
}

Eigen::VectorXcd VerticalSpectrum::w_form(double y, int order) const {
  const auto& ctx = problem_->context();
  const double a = ctx.a();
  const Eigen::Index nt = rule_.size();
  Eigen::VectorXcd k0(nt), k1(nt);
  for (Eigen::Index i = 0; i < nt; ++i) {
    const double t = rule_.x(i);
    const cplx f = rule_.w(i) * std::pow(kI * t, order) / (2.0 * kPi);
    k0(i) = f * std::exp(kI * t * y);
    k1(i) = f * std::exp(kI * t * (y - a));
  }
  const Eigen::VectorXcd j = R0_.transpose() * k0 + R1_.transpose() * k1;
  return ctx.mu(2) * j + residue_part(y, order);
}

Eigen::VectorXcd VerticalSpectrum::v_form(double y) const {
  const double a = problem_->context().a();
  const Eigen::Index nt = rule_.size();
  Eigen::VectorXcd k0(nt), k1(nt);
  for (Eigen::Index i = 0; i < nt; ++i) {
    const double t = rule_.x(i);
    const double f = rule_.w(i) / (2.0 * kPi);
    k0(i) = f * std::exp(kI * t * y);
    k1(i) = f * std::exp(kI * t * (y - a));
  }
  Eigen::VectorXcd v = G0_.transpose() * k0 + G1_.transpose() * k1;
  // (1/2 pi) int t/(t^2+1) e^{itY} dt = (i/2) e^{-Y} for Y > 0, -(i/2) e^{Y} for Y < 0
  if (y > 0.0)
    v += 0.5 * kI * std::exp(-y) * A0_;
  else
    v -= 0.5 * kI * std::exp(y) * A0_;
  const double Y = y - a;
  if (Y < 0.0)
    v -= 0.5 * kI * std::exp(Y) * A1_;
  else
    v += 0.5 * kI * std::exp(-Y) * A1_;
  return v;
}

namespace {

std::vector<cplx> wall_roots(const KernelContext& ctx, int j) {
  const cplx al = ctx.alpha(j);
  if (ctx.model() == WallModel::Membrane) return {al.imag() > 0 ? al : -al};
  std::vector<cplx> r;
  for (int n = 0; n < 4; ++n) {
    const cplx z = al * std::pow(kI, n);
    if (z.imag() > 0) r.push_back(z);
  }
  if (r.size() != 2) throw Error(ErrorKind::InvalidParameter, "plate wall roots sit on the real axis");
  return r;
}

}  // namespace

LinearRows assemble_wall_equations(const RHProblem& p) {
  const auto& ctx = p.context();
  LinearRows rows;
  for (int j = 0; j < 2; ++j) {
    const auto roots = wall_roots(ctx, j);
    for (std::size_t r = 0; r < roots.size(); ++r) {
      const cplx z = roots[r];
      Eigen::VectorXcd row = ctx.mu(j) * p.phi_plus_form(j, z);
      if (ctx.model() == WallModel::Membrane) {
        row(j) += j == 0 ? 1.0 : -1.0;
      } else {
        const double s = j == 0 ? -1.0 : 1.0;
        row(2 * j) += s;
        row(2 * j + 1) -= s * kI * z;
      }
      rows.append(row, "wall " + std::to_string(j) + (roots.size() > 1 ? "." + std::to_string(r) : ""));
    }
  }
  return rows;
}

LinearRows assemble_edge_equations(const VerticalSpectrum& vs) {
  const auto& ctx = vs.problem().context();
  const int orders = ctx.model() == WallModel::Membrane ? 1 : 2;
  LinearRows rows;
  for (int j = 0; j < 2; ++j)
    for (int o = 0; o < orders; ++o)
      rows.append(vs.w_form(j == 0 ? 0.0 : ctx.a(), o), "edge " + std::to_string(j) + (o ? " u_xy" : " u_x"));
  return rows;
}

LinearRows assemble_compatibility_equations(const VerticalSpectrum& vs) {
  if (vs.problem().classification().case_label != CaseLabel::III)
    throw Error(ErrorKind::UnsupportedCase, "compatibility rows belong to case III");
  LinearRows rows;
  rows.append(vs.corner_form(0), "corner 0");
  rows.append(vs.corner_form(1), "corner 1");
  return rows;
}

LinearRows assemble_regularity_rows(const RHProblem& p) {
  const auto& ctx = p.context();
  LinearRows rows;
  for (auto em : p.factorization().upper_roots) {
    if (em.imag() <= real_root_band(em)) continue;
    const Eigen::VectorXcd phi0 = p.phi_plus_form(0, em), phi1 = p.phi_plus_form(1, em);
    for (int sg : {1, -1}) {
      const cplx zeta = static_cast<double>(sg) * zeta_even(em, ctx.k());
      const auto [n0, n1] = n_forms(p, em, zeta, phi0, phi1);
      rows.append(n0 + std::exp(-ctx.a() * zeta) * n1, sg > 0 ? "regular +" : "regular -");
    }
  }
  return rows;
}

LinearRows assemble_plate_system(const VerticalSpectrum& vs, SystemOptions opt) {
  if (vs.problem().context().model() != WallModel::Plate)
    throw Error(ErrorKind::UnsupportedCase, "plate system requested for membrane walls");
  return assemble_system(vs, opt);
}

LinearRows assemble_system(const VerticalSpectrum& vs, SystemOptions opt) {
  LinearRows rows = assemble_wall_equations(vs.problem());
  rows.append(assemble_edge_equations(vs));
  if (vs.problem().classification().case_label == CaseLabel::III && opt.compatibility)
    rows.append(assemble_compatibility_equations(vs));
  return rows;
}

RHSolution ConstantsSolution::rh_solution(std::shared_ptr<const RHProblem> problem) const {
  return RHSolution(std::move(problem), unknowns);
}

ConstantsSolution solve_constants(const RHProblem& p, const LinearRows& sys) {
  const auto& L = p.layout();
  const CaseLabel cl = p.classification().case_label;
  std::vector<int> cols;
  for (int i = 0; i < L.nc; ++i) cols.push_back(i);
  if (cl == CaseLabel::III && sys.size() == L.nc + 2) {
    cols.push_back(L.b(0));
    cols.push_back(L.b(1));
  }
  const int n = static_cast<int>(cols.size());
  if (sys.size() != n) throw Error(ErrorKind::SingularSystem, "the assembled system is not square");

  Eigen::MatrixXcd A(n, n);
  Eigen::VectorXcd r(n);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < n; ++c) A(i, c) = sys.rows(i, cols[c]);
    r(i) = -sys.rows(i, L.constant());
    // row equilibration keeps the solve independent of row scaling
    const double s = A.row(i).cwiseAbs().maxCoeff();
    if (s > 0) {
      A.row(i) /= s;
      r(i) /= s;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  const auto& sv = svd.singularValues();
  const double cond = sv(n - 1) > 0 ? sv(0) / sv(n - 1) : 1e300;
  if (!(cond < 1e12)) throw Error(ErrorKind::SingularSystem, "constants system is numerically singular");
  const Eigen::VectorXcd x = A.fullPivLu().solve(r);

  ConstantsSolution out;
  out.case_label = cl;
  out.condition = cond;
  out.n_unknowns = n;
  out.residual = (A * x - r).norm() / std::max(r.norm(), 1e-300);
  out.unknowns = Eigen::VectorXcd::Zero(L.size());
  for (int c = 0; c < n; ++c) out.unknowns(cols[c]) = x(c);
  out.unknowns(L.constant()) = 1.0;
  if (cl != CaseLabel::III)
    for (int j = 0; j < 2; ++j) out.unknowns(L.b(j)) = (p.b_form(j).transpose() * out.unknowns)(0);
  out.c = out.unknowns.head(L.nc);
  out.b = {out.unknowns(L.b(0)), out.unknowns(L.b(1))};

  // the wall relation through the point evaluators, not the assembled rows
  const RHSolution sol(std::shared_ptr<const RHProblem>(&p, [](const RHProblem*) {}), out.unknowns);
  const auto& ctx = p.context();
  double worst = 0.0;
  for (int j = 0; j < 2; ++j)
    for (auto z : wall_roots(ctx, j)) {
      cplx rel = ctx.mu(j) * sol.phi_plus(j, z);
      if (ctx.model() == WallModel::Membrane) {
        rel += (j == 0 ? 1.0 : -1.0) * out.c(j);
      } else {
        const double s = j == 0 ? -1.0 : 1.0;
        rel += s * (out.c(2 * j) - kI * z * out.c(2 * j + 1));
      }
      worst = std::max(worst, std::abs(rel) / std::max(1.0, out.c.cwiseAbs().maxCoeff()));
    }
  out.wall_relation = worst;
  return out;
}

// ---------------------------------------------------------------------------

Eigen::Matrix<cplx, 2, Eigen::Dynamic> printed_M(const RHProblem& p, double x) {
  const int nb = p.layout().n_basis();
  auto g = [&](double s) -> Eigen::VectorXcd {
    const double one = 1.0 - s;
    const double u = s / one;
    const ComponentTable fp = rhs_values(u, p.context());
    const ComponentTable fm = rhs_values(-u, p.context());
    Eigen::VectorXcd v(2 * nb);
    for (int j = 0; j < 2; ++j)
      v.segment(j * nb, nb) =
          (fp.row(j) * std::exp(-kI * u * x) + fm.row(j) * std::exp(kI * u * x)).transpose() / (one * one);
    return v;
  };
  const VectorQuadResult r = integrate(g, 2 * nb, 0.0, 1.0, 1e-13, 1e-11);
  Eigen::Matrix<cplx, 2, Eigen::Dynamic> M(2, nb);
  for (int j = 0; j < 2; ++j) M.row(j) = -r.value.segment(j * nb, nb).transpose() / (2.0 * kPi);
  return M;
}

namespace {

cplx xi_upper(cplx eta, cplx k) {
  cplx x = kI * std::sqrt(eta * eta - k * k);
  if (x.imag() < 0) x = -x;
  if (!(x.imag() > 0)) throw Error(ErrorKind::BranchSelectionFailure, "xi has no upper half-plane choice");
  return x;
}

}  // namespace

CoefficientBundle coefficient_bundle(const RHProblem& p) {
  const auto& ctx = p.context();
  if (ctx.model() != WallModel::Membrane)
    throw Error(ErrorKind::UnsupportedCase, "the printed coefficients are written for membrane walls");
  const auto& cls = p.classification();
  const auto& L = p.layout();
  const double a = ctx.a();
  const auto& src = ctx.config().source;
  const cplx k = ctx.k(), a2 = ctx.alpha_power(2), mu2 = ctx.mu(2);

  CoefficientBundle cb;
  cb.s = cls.case_label == CaseLabel::I ? 1 : 0;
  cb.eta = {cls.eta(0), cls.eta(1)};
  cb.eta2 = cls.eta(2);
  for (int m = cb.s; m < 2; ++m) {
    const cplx em = cb.eta[m];
    cb.xi[m] = xi_upper(em, k);
    cb.t[m] = cb.xi[m] * (a2 - k * k + 3.0 * em * em) / em;
    for (int j = 0; j < 2; ++j)
      cb.rho(j, m) = (ctx.mu(j) + kI * cb.xi[m] * (ctx.alpha_power(j) - em * em)) / (em * em - ctx.alpha_power(j));
  }
  for (int j = 0; j < 2; ++j) {
    cplx xh = kI * std::sqrt(ctx.alpha_power(j) - k * k);
    if ((j == 0 && xh.imag() > 0) || (j == 1 && xh.imag() < 0)) xh = -xh;
    cb.xi_hat[j] = xh;
    cb.r[j] = -kI * ctx.alpha(j) * (a2 - xh * xh) + mu2;
  }

  std::array<ComponentTable, 2> ps, psm;
  std::array<cplx, 2> hp{};
  for (int m = cb.s; m < 2; ++m) {
    const cplx em = cb.eta[m];
    ps[m] = em.imag() == 0.0 ? p.psi_boundary(em.real(), +1) : p.psi(em);
    psm[m] = em.imag() == 0.0 ? p.psi_boundary(-em.real(), +1) : p.psi(-em);
    hp[m] = p.factorization().hplus(em);
  }

  const double yj[2] = {0.0, a};
  cb.D.setZero();
  for (int j = 0; j < 2; ++j) {
    cb.E[j] = Eigen::VectorXcd::Zero(L.size());
    for (int m = cb.s; m < 2; ++m) {
      const cplx em = cb.eta[m], xi = cb.xi[m];
      const cplx ey = std::exp(kI * xi * yj[j]), eay = std::exp(kI * xi * (a - yj[j]));
      cb.D(j, 0) += ey / (em * em - ctx.alpha_power(0));
      cb.D(j, 1) -= eay / (em * em - ctx.alpha_power(1));
      cb.D(j, 2) += ey / (xi * xi - a2);
      cb.D(j, 3) -= eay / (xi * xi - a2);
      for (int n = 0; n < 4; ++n) cb.D(j, n) += hp[m] * (cb.rho(0, m) * ps[m](0, n) * ey + cb.rho(1, m) * ps[m](1, n) * eay);
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(L.size());
      e(L.constant()) = std::exp(kI * xi * std::abs(yj[j] - src.y) + kI * em * src.x) +
                        hp[m] * (cb.rho(0, m) * ps[m](0, 4) * ey + cb.rho(1, m) * ps[m](1, 4) * eay);
      e += hp[m] * (cb.rho(0, m) * ey * p.b_form(0) + cb.rho(1, m) * eay * p.b_form(1));
      cb.E[j] -= e;
    }
  }

  if (cb.s == 0) {
    const cplx e0 = cb.eta[0], e1 = cb.eta[1], e2 = cb.eta2;
    cb.M0 = printed_M(p, 0.0);
    auto res = [&](int m) { return (m == 0 ? 1.0 : -1.0) * (e2 - cb.eta[m]) / (e1 - e0); };
    cb.beta = -kI * (res(0) + res(1));
    cb.lambda.setZero();
    cb.sigma.setZero();
    for (int j = 0; j < 2; ++j) {
      cb.nu[j] = cb.M0(j, 4);
      for (int m = 0; m < 2; ++m) {
        const cplx em = cb.eta[m], xi = cb.xi[m];
        const cplx w = (a2 - xi * xi) / cb.t[m];
        const cplx ey = std::exp(kI * xi * yj[j]), eay = std::exp(kI * xi * (a - yj[j]));
        cb.beta_j0[j] -= w * cb.rho(0, m) * hp[m] * ey;
        cb.beta_j1[j] -= w * cb.rho(1, m) * hp[m] * eay;
        cb.lambda(j, 0) += w * ey / (ctx.alpha_power(0) - em * em);
        cb.lambda(j, 1) -= w * eay / (ctx.alpha_power(1) - em * em);
        cb.lambda(j, 2) += ey / cb.t[m];
        cb.lambda(j, 3) -= eay / cb.t[m];
        for (int n = 0; n < 4; ++n) {
          cb.sigma(j, n) += -kI * res(m) * (psm[m](j, n) - cb.M0(j, n));
          cb.sigma(j, n) -= w * hp[m] * (cb.rho(0, m) * ps[m](0, n) * ey + cb.rho(1, m) * ps[m](1, n) * eay);
        }
        cb.nu[j] += kI * res(m) * psm[m](j, 4);
        cb.nu[j] += w * (std::exp(kI * xi * std::abs(yj[j] - src.y) - kI * em * src.x) +
                         hp[m] * (cb.rho(0, m) * ps[m](0, 4) * ey + cb.rho(1, m) * ps[m](1, 4) * eay));
      }
    }
  }
  return cb;
}

LinearRows printed_edge_equations(const RHProblem&, const CoefficientBundle& cb) {
  LinearRows rows;
  for (int j = 0; j < 2; ++j) {
    Eigen::VectorXcd row = -cb.E[j];
    for (int n = 0; n < 4; ++n) row(n) += cb.D(j, n);
    rows.append(row, "printed edge " + std::to_string(j));
  }
  return rows;
}

LinearRows printed_compatibility_equations(const RHProblem& p, const CoefficientBundle& cb) {
  if (cb.s != 0) throw Error(ErrorKind::UnsupportedCase, "printed compatibility rows need two upper roots");
  const auto& L = p.layout();
  LinearRows rows;
  for (int j = 0; j < 2; ++j) {
    Eigen::VectorXcd row = Eigen::VectorXcd::Zero(L.size());
    row(L.b(0)) += cb.beta_j0[j];
    row(L.b(1)) += cb.beta_j1[j];
    row(L.b(j)) += cb.beta;
    for (int n = 0; n < 4; ++n) row(n) += cb.sigma(j, n) + cb.lambda(j, n);
    row(L.constant()) -= cb.nu[j];
    rows.append(row, "printed compatibility " + std::to_string(j));
  }
  return rows;
}

}  // namespace sh
