#include "strip_helmholtz/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "strip_helmholtz/field.hpp"

namespace sh {

cplx ManufacturedCase::exact(double x, double y, double a) const {
  return std::exp(kI * beta * x) * std::cos(kPi * y / a);
}

cplx FDGrid::value_at(double x, double y) const {
  if (!(x >= 0.0 && x <= L && y >= 0.0 && y <= a)) throw Error(ErrorKind::InvalidParameter, "point outside the FD grid");
  const double fx = x / hx, fy = y / hy;
  const int i = std::min(static_cast<int>(fx), nx - 1), j = std::min(static_cast<int>(fy), ny - 1);
  const double tx = fx - i, ty = fy - j;
  return (1 - tx) * (1 - ty) * u(i, j) + tx * (1 - ty) * u(i + 1, j) + (1 - tx) * ty * u(i, j + 1) +
         tx * ty * u(i + 1, j + 1);
}

FDGrid fd_solve(const KernelContext& ctx, const FDGridSpec& spec, const ManufacturedCase* mms) {
  if (ctx.model() != WallModel::Membrane)
    throw Error(ErrorKind::UnsupportedCase, "the finite-difference oracle covers membrane walls");
  if (spec.nx < 4 || spec.ny < 4 || !(spec.L > 0.0)) throw Error(ErrorKind::InvalidParameter, "bad FD grid");
  const auto t0 = std::chrono::steady_clock::now();
  const int nx = spec.nx, ny = spec.ny;
  const double a = ctx.a(), L = spec.L, hx = L / nx, hy = a / ny;
  const cplx k2 = ctx.k() * ctx.k();
  const cplx al0 = ctx.alpha_power(0), al1 = ctx.alpha_power(1), al2 = ctx.alpha_power(2);
  const cplx mu0 = ctx.mu(0), mu1 = ctx.mu(1), mu2 = ctx.mu(2);

  const int NU = nx * (ny + 1);
  const int iV0 = NU, iV1 = NU + (nx - 1), iW = NU + 2 * (nx - 1);
  const int N = iW + (ny - 1);
  auto U = [&](int i, int j) { return i * (ny + 1) + j; };

  // boundary data the unknowns do not cover
  auto u_right = [&](int j) { return mms ? mms->exact(L, j * hy, a) : cplx(0.0); };
  auto w_edge = [&](int j) { return mms ? kI * mms->beta * mms->exact(0.0, j * hy, a) : cplx(0.0); };
  // u*_y vanishes on both walls, so the wall data is zero either way

  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(static_cast<std::size_t>(N) * 7);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(N);

  for (int i = 0; i < nx; ++i)
    for (int j = 0; j <= ny; ++j) {
      const int r = U(i, j);
      cplx diag = k2 - 2.0 / (hx * hx) - 2.0 / (hy * hy);
      // x direction; the ghost at i = -1 carries u_x(0, y) = w
      if (i == 0) {
        trip.emplace_back(r, U(1, j), 2.0 / (hx * hx));
        if (j >= 1 && j <= ny - 1)
          trip.emplace_back(r, iW + j - 1, -2.0 / hx);
        else
          rhs(r) += 2.0 / hx * w_edge(j);
      } else {
        trip.emplace_back(r, U(i - 1, j), 1.0 / (hx * hx));
        if (i + 1 < nx)
          trip.emplace_back(r, U(i + 1, j), 1.0 / (hx * hx));
        else
          rhs(r) -= u_right(j) / (hx * hx);
      }
      // y direction; ghosts carry u_y = v on the walls
      if (j == 0) {
        trip.emplace_back(r, U(i, 1), 2.0 / (hy * hy));
        if (i >= 1) trip.emplace_back(r, iV0 + i - 1, -2.0 / hy);
      } else if (j == ny) {
        trip.emplace_back(r, U(i, ny - 1), 2.0 / (hy * hy));
        if (i >= 1) trip.emplace_back(r, iV1 + i - 1, 2.0 / hy);
      } else {
        trip.emplace_back(r, U(i, j - 1), 1.0 / (hy * hy));
        trip.emplace_back(r, U(i, j + 1), 1.0 / (hy * hy));
      }
      trip.emplace_back(r, r, diag);
      if (mms) rhs(r) += (k2 - mms->beta * mms->beta - kPi * kPi / (a * a)) * mms->exact(i * hx, j * hy, a);
    }
  if (!mms) {
    const auto& src = ctx.config().source;
    const int i0 = static_cast<int>(std::lround(src.x / hx)), j0 = static_cast<int>(std::lround(src.y / hy));
    if (i0 < 0 || i0 >= nx || j0 < 0 || j0 > ny) throw Error(ErrorKind::InvalidParameter, "source outside the FD grid");
    rhs(U(i0, j0)) -= 1.0 / (hx * hy);
  }

  // wall relations: v_xx + alpha_j^2 v -+ mu_j u = g_j
  for (int w = 0; w < 2; ++w) {
    const int base = w == 0 ? iV0 : iV1;
    const cplx al = w == 0 ? al0 : al1;
    const cplx sgn = w == 0 ? -mu0 : mu1;
    const int jw = w == 0 ? 0 : ny;
    for (int i = 1; i < nx; ++i) {
      const int r = base + i - 1;
      trip.emplace_back(r, r, -2.0 / (hx * hx) + al);
      if (i > 1) trip.emplace_back(r, r - 1, 1.0 / (hx * hx));
      if (i < nx - 1) trip.emplace_back(r, r + 1, 1.0 / (hx * hx));
      trip.emplace_back(r, U(i, jw), sgn);
      if (mms) rhs(r) += sgn * mms->exact(i * hx, jw * hy, a);
    }
  }
  // vertical wall: w_yy + alpha_2^2 w - mu_2 u(0, y) = g_2
  for (int j = 1; j < ny; ++j) {
    const int r = iW + j - 1;
    trip.emplace_back(r, r, -2.0 / (hy * hy) + al2);
    if (j > 1)
      trip.emplace_back(r, r - 1, 1.0 / (hy * hy));
    else
      rhs(r) -= w_edge(0) / (hy * hy);
    if (j < ny - 1)
      trip.emplace_back(r, r + 1, 1.0 / (hy * hy));
    else
      rhs(r) -= w_edge(ny) / (hy * hy);
    trip.emplace_back(r, U(0, j), -mu2);
    if (mms) {
      const double y = j * hy;
      rhs(r) += (kI * mms->beta * (al2 - kPi * kPi / (a * a)) - mu2) * mms->exact(0.0, y, a);
    }
  }

  Eigen::SparseMatrix<cplx> A(N, N);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw Error(ErrorKind::SingularDiscretization, "sparse LU failed; perturb the grid spacing");
  const Eigen::VectorXcd sol = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !sol.allFinite())
    throw Error(ErrorKind::SingularDiscretization, "sparse solve failed; perturb the grid spacing");

  FDGrid g;
  g.nx = nx;
  g.ny = ny;
  g.L = L;
  g.hx = hx;
  g.hy = hy;
  g.a = a;
  g.u.resize(nx + 1, ny + 1);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j <= ny; ++j) g.u(i, j) = sol(U(i, j));
  for (int j = 0; j <= ny; ++j) g.u(nx, j) = u_right(j);
  g.v0 = Eigen::VectorXcd::Zero(nx + 1);
  g.v1 = Eigen::VectorXcd::Zero(nx + 1);
  for (int i = 1; i < nx; ++i) {
    g.v0(i) = sol(iV0 + i - 1);
    g.v1(i) = sol(iV1 + i - 1);
  }
  g.w.resize(ny + 1);
  g.w(0) = w_edge(0);
  g.w(ny) = w_edge(ny);
  for (int j = 1; j < ny; ++j) g.w(j) = sol(iW + j - 1);
  g.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return g;
}

namespace {

// Chebyshev points on [-1, 1] (descending) and the differentiation matrix.
void cheb(int n, Eigen::VectorXd& x, Eigen::MatrixXd& D) {
  x.resize(n + 1);
  for (int i = 0; i <= n; ++i) x(i) = std::cos(kPi * i / n);
  Eigen::VectorXd c = Eigen::VectorXd::Ones(n + 1);
  c(0) = c(n) = 2.0;
  for (int i = 1; i <= n; i += 2) c(i) = -c(i);
  D.setZero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (i != j) D(i, j) = (c(i) / c(j)) / (x(i) - x(j));
  for (int i = 0; i <= n; ++i) D(i, i) = -D.row(i).sum();
}

}  // namespace

cplx OdeSolution::operator()(double yy) const {
  // barycentric weights of Chebyshev points of the second kind
  const Eigen::Index n = y.size() - 1;
  cplx num = 0.0;
  double den = 0.0;
  for (Eigen::Index i = 0; i <= n; ++i) {
    double w = (i % 2 == 0) ? 1.0 : -1.0;
    if (i == 0 || i == n) w *= 0.5;
    const double d = yy - y(i);
    if (d == 0.0) return u(i);
    num += w / d * u(i);
    den += w / d;
  }
  return num / den;
}

OdeSolution ode_solve_1d(cplx eta, const KernelContext& ctx, const std::function<cplx(double)>& f, cplx g0,
                         cplx g1, int n) {
  // throws DispersionZero when the homogeneous problem is singular
  (void)fundamental_pair(0.0, eta, ctx);
  const double a = ctx.a();
  Eigen::VectorXd x;
  Eigen::MatrixXd D;
  cheb(n, x, D);
  // y = a (1 - x) / 2 runs from 0 (x = 1) to a (x = -1)
  const Eigen::MatrixXd Dy = -(2.0 / a) * D;
  const Eigen::VectorXd y = a * (1.0 - x.array()) / 2.0;
  const cplx z2 = eta * eta - ctx.k() * ctx.k();
  const cplx mt0 = ctx.mu_tilde(0, eta), mt1 = ctx.mu_tilde(1, eta);

  Eigen::MatrixXcd A = (Dy * Dy).cast<cplx>();
  A.diagonal().array() -= z2;
  Eigen::VectorXcd b(n + 1);
  for (int i = 0; i <= n; ++i) b(i) = f(y(i));
  // boundary rows replace the collocation rows at the end points
  A.row(0) = Dy.row(0).cast<cplx>();
  A(0, 0) -= mt0;
  b(0) = -g0;
  A.row(n) = Dy.row(n).cast<cplx>();
  A(n, n) += mt1;
  b(n) = g1;

  OdeSolution s;
  s.y = y;
  s.u = A.partialPivLu().solve(b);
  s.du = Dy.cast<cplx>() * s.u;
  return s;
}

CrossValidationReport cross_validate(const FieldSolution& fs, const std::vector<FDGridSpec>& levels, int samples) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& ctx = fs.problem().context();
  const double a = ctx.a();
  CrossValidationReport rep;
  rep.fingerprint = config_fingerprint(ctx.config());
  double L = 1e300;
  for (const auto& l : levels) L = std::min(L, l.L);
  const double span = std::min(4.0 * a, 0.5 * L);
  for (int i = 0; i < samples; ++i) rep.xs.push_back((i + 0.5) * span / samples);
  for (int j = 0; j < samples; ++j) rep.ys.push_back((j + 0.5) * a / samples);

  const Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(rep.xs.data(), samples);
  rep.semi.resize(samples * samples);
  for (int j = 0; j < samples; ++j) rep.semi.segment(j * samples, samples) = fs.interior_row(xv, rep.ys[j]);

  for (const auto& spec : levels) {
    FDGrid g;
    FDGridSpec used = spec;
    try {
      g = fd_solve(ctx, used);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularDiscretization) throw;
      ++used.nx;
      g = fd_solve(ctx, used);
    }
    double num = 0.0, den = 0.0, dmax = 0.0, smax = 0.0;
    for (int j = 0; j < samples; ++j)
      for (int i = 0; i < samples; ++i) {
        const cplx s = rep.semi(j * samples + i);
        const cplx d = g.value_at(rep.xs[i], rep.ys[j]) - s;
        num += std::norm(d);
        den += std::norm(s);
        dmax = std::max(dmax, std::abs(d));
        smax = std::max(smax, std::abs(s));
      }
    rep.levels.push_back({used, std::sqrt(num / den), dmax / smax, g.seconds});
  }
  rep.decreasing = true;
  for (std::size_t l = 1; l < rep.levels.size(); ++l)
    if (!(rep.levels[l].discrepancy < rep.levels[l - 1].discrepancy)) rep.decreasing = false;
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace sh
