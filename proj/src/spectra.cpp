#include "strip_helmholtz/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace sh {

cplx polynomial_value(const Eigen::VectorXcd& c, cplx x) {
  cplx acc = 0.0;
  for (Eigen::Index i = c.size() - 1; i >= 0; --i) acc = acc * x + c(i);
  return acc;
}

namespace {

cplx polynomial_derivative(const Eigen::VectorXcd& c, cplx x) {
  cplx acc = 0.0;
  for (Eigen::Index i = c.size() - 1; i >= 1; --i) acc = acc * x + static_cast<double>(i) * c(i);
  return acc;
}

}  // namespace

Eigen::VectorXcd polynomial_roots(const Eigen::VectorXcd& ascending) {
  Eigen::Index deg = ascending.size() - 1;
  while (deg > 0 && ascending(deg) == cplx(0.0)) --deg;
  if (deg < 1) throw Error(ErrorKind::InvalidParameter, "polynomial has no roots");
  const Eigen::VectorXcd c = ascending.head(deg + 1) / ascending(deg);
  double radius = 0.0;
  for (Eigen::Index i = 0; i < deg; ++i) radius = std::max(radius, std::abs(c(i)));
  radius += 1.0;

  Eigen::VectorXcd z(deg);
  for (Eigen::Index i = 0; i < deg; ++i) z(i) = std::polar(radius, 2.0 * kPi * i / deg + 0.4);

  for (int it = 0; it < 500; ++it) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < deg; ++i) {
      const cplx p = polynomial_value(c, z(i));
      const cplx dp = polynomial_derivative(c, z(i));
      if (p == cplx(0.0)) continue;
      const cplx ratio = p / dp;
      cplx s = 0.0;
      for (Eigen::Index j = 0; j < deg; ++j)
        if (j != i) s += 1.0 / (z(i) - z(j));
      const cplx w = ratio / (1.0 - ratio * s);
      z(i) -= w;
      worst = std::max(worst, std::abs(w) / (1.0 + std::abs(z(i))));
    }
    if (worst < 1e-16) break;
  }
  for (Eigen::Index i = 0; i < deg; ++i) {
    for (int it = 0; it < 3; ++it) {
      const cplx dp = polynomial_derivative(c, z(i));
      if (dp == cplx(0.0)) break;
      z(i) -= polynomial_value(c, z(i)) / dp;
    }
  }
  return z;
}

const char* to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::I: return "I";
    case CaseLabel::II: return "II";
    case CaseLabel::III: return "III";
  }
  return "?";
}

namespace {

// loose band within which an override may reassign a root
double override_band(cplx z) { return 1e-3 * (1.0 + std::abs(z)); }

std::vector<HalfPlane> assign_sides(const Eigen::VectorXcd& r, std::optional<CaseLabel> override) {
  std::vector<HalfPlane> side(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const double im = r(i).imag();
    side[i] = std::abs(im) < real_root_band(r(i)) ? HalfPlane::Real : (im > 0 ? HalfPlane::Upper : HalfPlane::Lower);
  }
  if (!override) return side;
  // closest root to the axis is the only one an override may touch
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < r.size(); ++i)
    if (std::abs(r(i).imag()) / (1.0 + std::abs(r(i))) < std::abs(r(best).imag()) / (1.0 + std::abs(r(best))))
      best = i;
  if (*override == CaseLabel::II) {
    if (std::abs(r(best).imag()) > override_band(r(best)))
      throw Error(ErrorKind::UnsupportedCase, "case II override: no root near the real axis");
    side[best] = HalfPlane::Real;
  } else if (side[best] == HalfPlane::Real) {
    if (r(best).imag() == 0.0)
      throw Error(ErrorKind::UnsupportedCase, "override cannot move an exactly real root off the axis");
    side[best] = r(best).imag() > 0 ? HalfPlane::Upper : HalfPlane::Lower;
  }
  return side;
}

void fill_common(RootClassification& cls, const KernelContext& ctx) {
  const auto& poly = ctx.rh_polynomial();
  const int n = cls.order();
  cls.max_residual = 0.0;
  cls.min_separation = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const cplx z = cls.roots(i);
    const double res = std::abs(polynomial_value(poly, z)) / std::pow(std::max(1.0, std::abs(z)), n);
    cls.max_residual = std::max(cls.max_residual, res);
    for (int j = i + 1; j < n; ++j) cls.min_separation = std::min(cls.min_separation, std::abs(z - cls.roots(j)));
  }
  if (cls.max_residual > 1e-10) throw Error(ErrorKind::DegenerateRoots, "root residual too large");
  if (cls.min_separation < 1e-8) throw Error(ErrorKind::DegenerateRoots, "roots are not simple");
  cls.eta.resize(n);
  for (int i = 0; i < n; ++i) cls.eta(i) = cls.side[i] == HalfPlane::Lower ? -cls.roots(i) : cls.roots(i);
  cls.kappa = winding_from_roots(cls);
}

CaseLabel label_from(HalfPlane s) {
  return s == HalfPlane::Lower ? CaseLabel::I : (s == HalfPlane::Real ? CaseLabel::II : CaseLabel::III);
}

void check_override(const RootClassification& cls, std::optional<CaseLabel> override) {
  if (override && *override != cls.case_label)
    throw Error(ErrorKind::UnsupportedCase, std::string("roots give case ") + to_string(cls.case_label) +
                                                ", override asked for " + to_string(*override));
}

}  // namespace

RootClassification classify_membrane(const KernelContext& ctx, std::optional<CaseLabel> override) {
  if (ctx.model() != WallModel::Membrane) throw Error(ErrorKind::InvalidParameter, "not a membrane config");
  const Eigen::VectorXcd r = polynomial_roots(ctx.rh_polynomial());
  const auto side = assign_sides(r, override);
  std::vector<int> up, lo, re;
  for (int i = 0; i < 3; ++i) (side[i] == HalfPlane::Upper ? up : side[i] == HalfPlane::Lower ? lo : re).push_back(i);

  RootClassification cls;
  cls.model = WallModel::Membrane;
  std::vector<int> order;
  if (re.size() == 1 && up.size() == 1 && lo.size() == 1) {
    cls.case_label = CaseLabel::II;
    order = {re[0], up[0], lo[0]};
  } else if (re.empty() && up.size() == 1 && lo.size() == 2) {
    cls.case_label = CaseLabel::I;
    if (std::abs(r(lo[1]).imag()) < std::abs(r(lo[0]).imag())) std::swap(lo[0], lo[1]);
    order = {lo[0], up[0], lo[1]};
  } else if (re.empty() && up.size() == 2 && lo.size() == 1) {
    cls.case_label = CaseLabel::III;
    const cplx a = r(up[0]), b = r(up[1]);
    const bool tie = std::abs(a.imag() - b.imag()) < 1e-9 * (1.0 + std::abs(a) + std::abs(b));
    if (tie ? b.real() < a.real() : b.imag() < a.imag()) std::swap(up[0], up[1]);
    order = {up[0], up[1], lo[0]};
  } else {
    throw Error(ErrorKind::DegenerateRoots, "roots of q fit none of the three cases");
  }
  cls.roots.resize(3);
  for (int i = 0; i < 3; ++i) {
    cls.roots(i) = r(order[i]);
    cls.side.push_back(side[order[i]]);
  }
  fill_common(cls, ctx);
  check_override(cls, override);
  return cls;
}

RootClassification classify_plate(const KernelContext& ctx, std::optional<CaseLabel> override) {
  if (ctx.model() != WallModel::Plate) throw Error(ErrorKind::InvalidParameter, "not a plate config");
  const Eigen::VectorXcd r = polynomial_roots(ctx.rh_polynomial());
  int z0 = 0;
  for (int i = 1; i < 5; ++i)
    if (r(i).real() < r(z0).real()) z0 = i;
  // only z0 may be settled by an override; the others must be clearly off the axis
  std::vector<HalfPlane> side(5);
  {
    Eigen::VectorXcd single(1);
    single(0) = r(z0);
    side[z0] = assign_sides(single, override)[0];
  }
  std::vector<int> up, lo;
  for (int i = 0; i < 5; ++i) {
    if (i == z0) continue;
    if (std::abs(r(i).imag()) < real_root_band(r(i)))
      throw Error(ErrorKind::DegenerateRoots, "a plate root other than z0 is real");
    side[i] = r(i).imag() > 0 ? HalfPlane::Upper : HalfPlane::Lower;
    (side[i] == HalfPlane::Upper ? up : lo).push_back(i);
  }
  if (up.size() != 2 || lo.size() != 2)
    throw Error(ErrorKind::DegenerateRoots, "plate roots are not split two up, two down");
  auto by_re = [&](int a, int b) { return r(a).real() < r(b).real(); };
  std::sort(up.begin(), up.end(), by_re);
  std::sort(lo.begin(), lo.end(), by_re);
  const std::vector<int> order{z0, up[0], up[1], lo[0], lo[1]};

  RootClassification cls;
  cls.model = WallModel::Plate;
  cls.case_label = label_from(side[z0]);
  cls.roots.resize(5);
  for (int i = 0; i < 5; ++i) {
    cls.roots(i) = r(order[i]);
    cls.side.push_back(side[order[i]]);
  }
  fill_common(cls, ctx);
  check_override(cls, override);
  return cls;
}

RootClassification classify(const KernelContext& ctx, std::optional<CaseLabel> override) {
  return ctx.model() == WallModel::Membrane ? classify_membrane(ctx, override) : classify_plate(ctx, override);
}

int winding_from_roots(const RootClassification& cls) {
  // zeros of H are z_j, poles are -z_j; real ones sit below an indented contour
  int up = 0, lo = 0;
  for (auto s : cls.side) {
    if (s == HalfPlane::Upper) ++up;
    if (s == HalfPlane::Lower) ++lo;
  }
  return up - lo;
}

namespace {

double wrap(double d) {
  while (d > kPi) d -= 2.0 * kPi;
  while (d <= -kPi) d += 2.0 * kPi;
  return d;
}

}  // namespace

int winding_index(const KernelContext& ctx, const RootClassification& cls, bool indent) {
  double shift = 0.0;
  if (cls.has_real_root()) {
    if (!indent) throw Error(ErrorKind::ContourPole, "H has a zero and a pole on the real axis (case II)");
    double m = 1e-4;
    for (int i = 0; i < cls.order(); ++i)
      if (cls.side[i] != HalfPlane::Real) m = std::min(m, 0.5 * std::abs(cls.roots(i).imag()));
    shift = m;
  }
  const auto& p = ctx.rh_polynomial();
  auto H = [&](double th) {
    const cplx eta(std::tan(th), shift);
    return polynomial_value(p, eta) / polynomial_value(p, -eta);
  };
  const double lim = 0.5 * kPi - 1e-9;
  double th = -lim, h = 1e-3, total = 0.0;
  cplx prev = H(th);
  while (th < lim) {
    const double next = std::min(lim, th + h);
    const cplx cur = H(next);
    const double d = wrap(std::arg(cur / prev));
    if (std::abs(d) > 0.2) {
      h *= 0.5;
      if (h < 1e-15) throw Error(ErrorKind::ContourPole, "H is singular on the contour");
      continue;
    }
    total += d;
    th = next;
    prev = cur;
    h = std::min(h * 1.5, 1e-2);
  }
  const double w = total / (2.0 * kPi);
  const double n = std::round(w);
  if (std::abs(w - n) > 0.05) throw Error(ErrorKind::ContourPole, "winding integral is not an integer");
  return static_cast<int>(n);
}

namespace {

struct WSample {
  cplx w;
  cplx zr;
};

WSample w_sample(const KernelContext& ctx, cplx eta) {
  const EntireDispersion d = dispersion_entire(eta, ctx);
  return {d.w, zeta_even(eta, ctx.k())};
}

// arg W(q) - arg W(p), exact up to the small-step assumption
double phase_step(const KernelContext& ctx, const WSample& p, const WSample& q) {
  if (std::abs(p.w) == 0.0 || std::abs(q.w) == 0.0)
    throw Error(ErrorKind::ContourPole, "Delta/zeta vanishes on the counting contour");
  return wrap(std::arg(q.w / p.w) + ctx.a() * (q.zr - p.zr).imag());
}

double edge_phase(const KernelContext& ctx, cplx from, cplx to) {
  const double len = std::abs(to - from);
  double t = 0.0, h = std::min(0.05, 0.1) / std::max(len, 1e-300);
  WSample prev = w_sample(ctx, from);
  double total = 0.0;
  while (t < 1.0) {
    const double next = std::min(1.0, t + h);
    const WSample cur = w_sample(ctx, from + next * (to - from));
    const double d = phase_step(ctx, prev, cur);
    if (std::abs(d) > 0.3) {
      h *= 0.5;
      if (h * len < 1e-13) throw Error(ErrorKind::ContourPole, "zero of Delta/zeta on the counting contour");
      continue;
    }
    total += d;
    t = next;
    prev = cur;
    h = std::min(h * 1.5, 0.25 / std::max(len, 1e-300));
  }
  return total;
}

bool newton_w(const KernelContext& ctx, cplx& eta, double& residual) {
  for (int it = 0; it < 80; ++it) {
    const EntireDispersion d = dispersion_entire(eta, ctx);
    if (d.dw == cplx(0.0)) return false;
    cplx step = d.w / d.dw;
    const double cap = 0.5 * (1.0 + std::abs(eta));
    if (std::abs(step) > cap) step *= cap / std::abs(step);
    eta -= step;
    residual = std::abs(step) / (1.0 + std::abs(eta));
    if (!std::isfinite(eta.real()) || !std::isfinite(eta.imag())) return false;
    if (residual < 1e-14) return true;
  }
  return residual < 1e-11;
}

void add_unique(std::vector<cplx>& roots, cplx z) {
  for (const auto& r : roots)
    if (std::abs(r - z) < 1e-8 * (1.0 + std::abs(z))) return;
  roots.push_back(z);
}

int count_in(const std::vector<cplx>& roots, const Box& b) {
  return static_cast<int>(std::count_if(roots.begin(), roots.end(), [&](cplx z) { return b.contains(z); }));
}

}  // namespace

int argument_principle_count(const KernelContext& ctx, const Box& b) {
  const cplx c0(b.re_min, b.im_min), c1(b.re_max, b.im_min), c2(b.re_max, b.im_max), c3(b.re_min, b.im_max);
  const double total = edge_phase(ctx, c0, c1) + edge_phase(ctx, c1, c2) + edge_phase(ctx, c2, c3) +
                       edge_phase(ctx, c3, c0);
  const double n = total / (2.0 * kPi);
  const double r = std::round(n);
  if (std::abs(n - r) > 0.05) throw Error(ErrorKind::CountMismatch, "argument principle gave a non-integer");
  return static_cast<int>(r);
}

Box default_search_box(const KernelContext& ctx, int n) {
  double scale = std::abs(ctx.k());
  for (int j = 0; j < 3; ++j) {
    scale = std::max(scale, std::abs(ctx.alpha(j)));
    scale = std::max(scale, std::cbrt(std::abs(ctx.mu(j))));
  }
  const double R = 4.0 + 2.0 * scale;
  const double H = kPi * (n + 0.5) / ctx.a() + std::abs(ctx.k());
  return {-R, R, 1e-8, H};
}

DispersionZeros dispersion_zero_search(const KernelContext& ctx, const Box& box, int max_count) {
  const double a = ctx.a();
  const cplx k2 = ctx.k() * ctx.k();
  std::vector<cplx> found;
  double worst = 0.0;
  auto try_seed = [&](cplx seed, const Box& within) {
    double res = 1.0;
    cplx z = seed;
    if (newton_w(ctx, z, res) && within.contains(z)) {
      worst = std::max(worst, res);
      add_unique(found, z);
    }
  };
  // modes near zeta = i pi s / a
  const int smax = static_cast<int>(box.im_max * a / kPi) + 3;
  for (int s = 0; s <= smax; ++s) {
    cplx seed = std::sqrt(k2 - std::pow(kPi * s / a, 2));
    if (seed.imag() < 0) seed = -seed;
    if (seed.imag() <= box.im_min) seed += cplx(0.0, box.im_min + 1e-3);
    try_seed(seed, box);
    try_seed(-std::conj(seed), box);
  }
  const double gh = std::min(box.im_max, box.im_min + (box.re_max - box.re_min));
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      try_seed(cplx(box.re_min + (i + 0.5) * (box.re_max - box.re_min) / 8.0,
                    box.im_min + (j + 0.5) * (gh - box.im_min) / 8.0),
               box);

  std::function<void(const Box&, int)> settle = [&](const Box& b, int depth) {
    const int n = argument_principle_count(ctx, b);
    int have = count_in(found, b);
    if (n == have) return;
    if (n < have || depth > 14)
      throw Error(ErrorKind::CountMismatch, "argument principle count " + std::to_string(n) + " vs " +
                                                std::to_string(have) + " refined zeros");
    for (double u : {0.5, 0.25, 0.75})
      for (double v : {0.5, 0.25, 0.75})
        try_seed(cplx(b.re_min + u * (b.re_max - b.re_min), b.im_min + v * (b.im_max - b.im_min)), b);
    have = count_in(found, b);
    if (n == have) return;
    Box lo = b, hi = b;
    if (b.re_max - b.re_min > b.im_max - b.im_min) {
      // offsets keep the cut line away from exact symmetry points
      const double m = 0.5 * (b.re_min + b.re_max) + 1e-7 * (b.re_max - b.re_min);
      lo.re_max = m;
      hi.re_min = m;
    } else {
      const double m = 0.5 * (b.im_min + b.im_max) + 1e-7 * (b.im_max - b.im_min);
      lo.im_max = m;
      hi.im_min = m;
    }
    settle(lo, depth + 1);
    settle(hi, depth + 1);
  };

  DispersionZeros out;
  out.box = box;
  out.count_verified = argument_principle_count(ctx, box);
  if (count_in(found, box) != out.count_verified) settle(box, 0);
  std::vector<cplx> inside;
  for (auto z : found)
    if (box.contains(z)) inside.push_back(z);
  if (static_cast<int>(inside.size()) != out.count_verified)
    throw Error(ErrorKind::CountMismatch, "refined zeros do not match the contour count");
  std::sort(inside.begin(), inside.end(), [](cplx x, cplx y) { return std::abs(x) < std::abs(y); });
  if (static_cast<int>(inside.size()) > max_count) inside.resize(max_count);
  out.tau = std::move(inside);
  out.max_residual = worst;
  return out;
}

}  // namespace sh
