#include "strip_helmholtz/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace sh {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights at kXgk[1], kXgk[3], kXgk[5], kXgk[7]
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Reference {
  double x[15];
  double w[15];
  double wg[15];
};

const Reference& reference() {
  static const Reference r = [] {
    Reference ref{};
    int n = 0;
    for (int i = 0; i < 7; ++i) {
      const double wg = (i % 2 == 1) ? kWg[i / 2] : 0.0;
      ref.x[n] = -kXgk[i];
      ref.w[n] = kWgk[i];
      ref.wg[n++] = wg;
      ref.x[n] = kXgk[i];
      ref.w[n] = kWgk[i];
      ref.wg[n++] = wg;
    }
    ref.x[n] = 0.0;
    ref.w[n] = kWgk[7];
    ref.wg[n] = kWg[3];
    return ref;
  }();
  return r;
}

}  // namespace

PanelRule gk15_panels(const std::vector<double>& edges) {
  const auto& ref = reference();
  PanelRule rule;
  rule.edges = edges;
  const Eigen::Index np = edges.size() < 2 ? 0 : static_cast<Eigen::Index>(edges.size() - 1);
  rule.x.resize(15 * np);
  rule.w.resize(15 * np);
  rule.w_gauss.resize(15 * np);
  for (Eigen::Index p = 0; p < np; ++p) {
    const double lo = edges[p], hi = edges[p + 1];
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    for (int i = 0; i < 15; ++i) {
      rule.x(15 * p + i) = c + h * ref.x[i];
      rule.w(15 * p + i) = h * ref.w[i];
      rule.w_gauss(15 * p + i) = h * ref.wg[i];
    }
  }
  return rule;
}

std::vector<double> uniform_edges(double a, double b, double h) {
  const int n = std::max(1, static_cast<int>(std::ceil((b - a) / h - 1e-9)));
  std::vector<double> e(n + 1);
  for (int i = 0; i <= n; ++i) e[i] = a + (b - a) * i / n;
  return e;
}

void append_geometric(std::vector<double>& edges, double end, double ratio) {
  double x = edges.back();
  while (x < end) {
    x *= ratio;
    edges.push_back(x);
  }
}

namespace {

template <class Value, class Eval, class Norm>
void gk_panel(const Eval& f, double lo, double hi, Value& k15, Value& g7, Norm) {
  const auto& ref = reference();
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  for (int i = 0; i < 15; ++i) {
    const auto v = f(c + h * ref.x[i]);
    k15 += (h * ref.w[i]) * v;
    if (ref.wg[i] != 0.0) g7 += (h * ref.wg[i]) * v;
  }
}

}  // namespace

QuadResult integrate(const std::function<cplx(double)>& f, double a, double b, double abs_tol, double rel_tol,
                     int max_depth) {
  struct Seg {
    double lo, hi;
    int depth;
  };
  QuadResult out;
  std::deque<Seg> work{{a, b, 0}};
  double worst = 0.0;
  // first pass estimates the scale for the relative tolerance
  cplx total_guess = 0.0;
  {
    cplx k = 0.0, g = 0.0;
    gk_panel<cplx>(f, a, b, k, g, 0);
    total_guess = k;
  }
  while (!work.empty()) {
    Seg s = work.front();
    work.pop_front();
    cplx k = 0.0, g = 0.0;
    gk_panel<cplx>(f, s.lo, s.hi, k, g, 0);
    out.evaluations += 15;
    const double err = std::abs(k - g);
    const double share = (s.hi - s.lo) / (b - a);
    const double tol = std::max(abs_tol, rel_tol * std::abs(total_guess)) * std::max(share, 1e-6);
    if (err <= tol || s.depth >= max_depth) {
      if (err > tol) worst = std::max(worst, err / tol);
      out.value += k;
      out.error += err;
      continue;
    }
    const double m = 0.5 * (s.lo + s.hi);
    work.push_back({s.lo, m, s.depth + 1});
    work.push_back({m, s.hi, s.depth + 1});
  }
  if (worst > 1e3) throw Error(ErrorKind::QuadratureNotConverged, "adaptive quadrature missed its tolerance");
  return out;
}

VectorQuadResult integrate(const std::function<Eigen::VectorXcd(double)>& f, Eigen::Index dim, double a,
                           double b, double abs_tol, double rel_tol, int max_depth) {
  struct Seg {
    double lo, hi;
    int depth;
  };
  VectorQuadResult out;
  out.value = Eigen::VectorXcd::Zero(dim);
  Eigen::VectorXcd guess = Eigen::VectorXcd::Zero(dim), gg = Eigen::VectorXcd::Zero(dim);
  gk_panel<Eigen::VectorXcd>(f, a, b, guess, gg, 0);
  const double scale = guess.cwiseAbs().maxCoeff();
  std::deque<Seg> work{{a, b, 0}};
  double worst = 0.0;
  while (!work.empty()) {
    Seg s = work.front();
    work.pop_front();
    Eigen::VectorXcd k = Eigen::VectorXcd::Zero(dim), g = Eigen::VectorXcd::Zero(dim);
    gk_panel<Eigen::VectorXcd>(f, s.lo, s.hi, k, g, 0);
    const double err = (k - g).cwiseAbs().maxCoeff();
    const double share = (s.hi - s.lo) / (b - a);
    const double tol = std::max(abs_tol, rel_tol * scale) * std::max(share, 1e-6);
    if (err <= tol || s.depth >= max_depth) {
      if (err > tol) worst = std::max(worst, err / tol);
      out.value += k;
      out.error += err;
      continue;
    }
    const double m = 0.5 * (s.lo + s.hi);
    work.push_back({s.lo, m, s.depth + 1});
    work.push_back({m, s.hi, s.depth + 1});
  }
  if (worst > 1e3) throw Error(ErrorKind::QuadratureNotConverged, "adaptive quadrature missed its tolerance");
  return out;
}

std::vector<double> refine_edges(const std::vector<double>& edges,
                                 const std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)>& sampler,
                                 double rel_tol, int max_depth) {
  const auto& ref = reference();
  Eigen::VectorXd xr(15), wk(15), wg(15);
  for (int i = 0; i < 15; ++i) {
    xr(i) = ref.x[i];
    wk(i) = ref.w[i];
    wg(i) = ref.wg[i];
  }
  // sampler returns a (15 x m) block: one column per density component
  auto panel = [&](double lo, double hi, Eigen::VectorXcd& k, double& err) {
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    const Eigen::VectorXd x = (c + h * xr.array()).matrix();
    const Eigen::MatrixXcd v = sampler(x);
    k = h * (v.transpose() * wk.cast<cplx>());
    const Eigen::VectorXcd g = h * (v.transpose() * wg.cast<cplx>());
    err = (k - g).cwiseAbs().maxCoeff();
  };
  // magnitude reference from the coarse pass
  std::vector<Eigen::VectorXcd> ks(edges.size() - 1);
  std::vector<double> errs(edges.size() - 1);
  Eigen::VectorXd mag;
  for (size_t p = 0; p + 1 < edges.size(); ++p) {
    panel(edges[p], edges[p + 1], ks[p], errs[p]);
    const Eigen::VectorXd m = ks[p].cwiseAbs();
    mag = mag.size() ? mag.cwiseMax(m).eval() : m;
  }
  const double tol = rel_tol * std::max(mag.size() ? mag.sum() : 0.0, 1e-300);
  std::vector<double> out{edges.front()};
  struct Seg {
    double lo, hi;
    int depth;
    double err;
  };
  for (size_t p = 0; p + 1 < edges.size(); ++p) {
    std::vector<Seg> stack{{edges[p], edges[p + 1], 0, errs[p]}};
    std::vector<Seg> done;
    while (!stack.empty()) {
      Seg s = stack.back();
      stack.pop_back();
      if (s.err <= tol || s.depth >= max_depth) {
        done.push_back(s);
        continue;
      }
      const double m = 0.5 * (s.lo + s.hi);
      Eigen::VectorXcd k;
      double e1, e2;
      panel(m, s.hi, k, e2);
      panel(s.lo, m, k, e1);
      stack.push_back({m, s.hi, s.depth + 1, e2});
      stack.push_back({s.lo, m, s.depth + 1, e1});
    }
    std::sort(done.begin(), done.end(), [](const Seg& x, const Seg& y) { return x.lo < y.lo; });
    for (const auto& s : done) out.push_back(s.hi);
  }
  return out;
}

}  // namespace sh
