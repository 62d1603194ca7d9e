#include "strip_helmholtz/model.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>

namespace sh {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::OnBranchCut: return "OnBranchCut";
    case ErrorKind::DispersionZero: return "DispersionZero";
    case ErrorKind::EtaZero: return "EtaZero";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::DegenerateRoots: return "DegenerateRoots";
    case ErrorKind::ContourPole: return "ContourPole";
    case ErrorKind::CountMismatch: return "CountMismatch";
    case ErrorKind::PoleOnEvaluation: return "PoleOnEvaluation";
    case ErrorKind::UnsupportedCase: return "UnsupportedCase";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::RemovabilityFailure: return "RemovabilityFailure";
    case ErrorKind::SeriesTruncationTooShort: return "SeriesTruncationTooShort";
    case ErrorKind::BranchSelectionFailure: return "BranchSelectionFailure";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::SourceSingularity: return "SourceSingularity";
    case ErrorKind::SingularDiscretization: return "SingularDiscretization";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

namespace {

std::string fmt(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::InvalidParameter, what); }

void check_geometry(double a, const SourcePoint& s) {
  if (!(a > 0.0) || !std::isfinite(a)) invalid("strip width a must be positive, got " + std::to_string(a));
  if (!(s.x > 0.0) || !std::isfinite(s.x))
    invalid("source x must be positive, got " + std::to_string(s.x));
  if (!(s.y > 0.0 && s.y < a))
    invalid("source y must lie strictly inside (0, a), got " + std::to_string(s.y));
}

void check_k(cplx k) {
  if (!std::isfinite(k.real()) || !std::isfinite(k.imag())) invalid("k is not finite");
  if (std::abs(k) == 0.0) invalid("|k| must be positive");
  if (k.imag() < 0.0) invalid("Im k must be non-negative, k = " + fmt(k));
  if (k.real() < 0.0) invalid("Re k must be non-negative, k = " + fmt(k));
}

void check_alpha(WallModel model, int j, cplx alpha) {
  if (model == WallModel::Membrane && !(alpha.imag() > 0.0))
    invalid("membrane wall " + std::to_string(j) + " needs Im alpha > 0, alpha = " + fmt(alpha));
  if (std::abs(alpha) == 0.0) invalid("wall " + std::to_string(j) + " has alpha = 0");
}

}  // namespace

cplx wall_alpha(WallModel model, cplx power) {
  if (model == WallModel::Membrane) {
    cplx r = std::sqrt(power);
    return r.imag() < 0.0 ? -r : r;
  }
  return std::pow(power, 0.25);  // principal fourth root
}

WaveguideConfig validate_config(const WaveguideConfig& raw) {
  WaveguideConfig cfg = raw;
  check_geometry(cfg.a, cfg.source);
  if (!raw.physical) {
    check_k(cfg.k);
    for (int j = 0; j < 3; ++j) {
      check_alpha(cfg.model, j, cfg.wall[j].alpha);
      if (std::abs(cfg.wall[j].mu) == 0.0) invalid("wall " + std::to_string(j) + " has mu = 0");
    }
    return cfg;
  }
  const cplx w = cfg.omega;
  if (!(w.real() > 0.0) || !(w.imag() > 0.0))
    invalid("omega must have positive real and imaginary parts, omega = " + fmt(w));
  if (!(cfg.c_sound > 0.0)) invalid("sound speed must be positive");
  if (!(cfg.rho > 0.0)) invalid("density must be positive");
  cfg.k = w / cfg.c_sound;
  check_k(cfg.k);
  for (int j = 0; j < 3; ++j) {
    WallSpec& ws = cfg.wall[j];
    if (!(ws.mass > 0.0)) invalid("wall " + std::to_string(j) + " mass must be positive");
    if (!(ws.stiffness > 0.0)) invalid("wall " + std::to_string(j) + " stiffness must be positive");
    if (cfg.model == WallModel::Membrane) {
      ws.alpha = w * std::sqrt(ws.mass / ws.stiffness);
    } else {
      ws.alpha = wall_alpha(WallModel::Plate, ws.mass * w * w / ws.stiffness);
    }
    ws.mu = cfg.rho * w * w / ws.stiffness;
    check_alpha(cfg.model, j, ws.alpha);
  }
  return cfg;
}

WaveguideConfig explicit_config(WallModel model, cplx k, double a, const std::array<cplx, 3>& alpha,
                                const std::array<cplx, 3>& mu, SourcePoint source) {
  WaveguideConfig cfg;
  cfg.model = model;
  cfg.physical = false;
  cfg.k = k;
  cfg.omega = k;  // c = rho = 1 so that p = i omega rho u stays meaningful
  cfg.c_sound = 1.0;
  cfg.rho = 1.0;
  cfg.a = a;
  cfg.source = source;
  for (int j = 0; j < 3; ++j) {
    cfg.wall[j].alpha = alpha[j];
    cfg.wall[j].mu = mu[j];
  }
  return validate_config(cfg);
}

WaveguideConfig dimensionless_config(WallModel model, cplx k, double gamma0, double gamma1, double a,
                                     SourcePoint source) {
  if (!(gamma0 > 0.0) || !(gamma1 > 0.0)) invalid("gamma0 and gamma1 must be positive");
  const cplx alpha = wall_alpha(model, gamma0 * k * k);
  const cplx mu = gamma1 * k * k;
  return explicit_config(model, k, a, {alpha, alpha, alpha}, {mu, mu, mu}, source);
}

Gammas gammas(const WaveguideConfig& cfg) {
  const cplx k2 = cfg.k * cfg.k;
  const cplx al = cfg.wall[2].alpha;
  const cplx p = cfg.model == WallModel::Membrane ? al * al : al * al * al * al;
  return {p / k2, cfg.wall[2].mu / k2};
}

std::string config_fingerprint(const WaveguideConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << (cfg.model == WallModel::Membrane ? "M" : "P") << cfg.k << cfg.a << cfg.source.x << cfg.source.y;
  for (const auto& w : cfg.wall) os << w.alpha << w.mu;
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char ch : os.str()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sh
