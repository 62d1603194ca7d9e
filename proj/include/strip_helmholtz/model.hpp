#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace sh {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

enum class WallModel { Membrane, Plate };

enum class ErrorKind {
  InvalidParameter,
  OnBranchCut,
  DispersionZero,
  EtaZero,
  Overflow,
  DegenerateRoots,
  ContourPole,
  CountMismatch,
  PoleOnEvaluation,
  UnsupportedCase,
  QuadratureNotConverged,
  RemovabilityFailure,
  SeriesTruncationTooShort,
  BranchSelectionFailure,
  SingularSystem,
  SourceSingularity,
  SingularDiscretization,
};

const char* to_string(ErrorKind kind);

// Single exception type; the kind tells validation failures from numerical ones.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const { return kind_; }
  bool is_validation() const { return kind_ == ErrorKind::InvalidParameter; }

 private:
  ErrorKind kind_;
};

struct WallSpec {
  double mass = 0.0;       // m_j
  double stiffness = 0.0;  // T_j (membrane) or B_j (plate)
  cplx alpha{};            // derived
  cplx mu{};               // derived
};

struct SourcePoint {
  double x = 1.0;
  double y = 0.5;
};

struct WaveguideConfig {
  WallModel model = WallModel::Membrane;
  cplx omega{1.0, 0.1};
  double c_sound = 1.0;
  double rho = 1.0;
  double a = 1.0;
  std::array<WallSpec, 3> wall{};
  SourcePoint source{};
  cplx k{};
  // false when alpha, mu and k were given directly instead of from m_j, T_j, omega
  bool physical = true;

  // degree of the polynomial q (membrane) or Q (plate)
  int order() const { return model == WallModel::Membrane ? 3 : 5; }
  // number of edge constants c
  int n_constants() const { return model == WallModel::Membrane ? 4 : 8; }
};

// Checks the physical inputs and fills k, alpha_j, mu_j.
WaveguideConfig validate_config(const WaveguideConfig& raw);

// Identical walls from gamma0 = alpha_2^2/k^2 (membrane) or alpha_2^4/k^2 (plate)
// and gamma1 = mu_2/k^2.
WaveguideConfig dimensionless_config(WallModel model, cplx k, double gamma0, double gamma1,
                                     double a = 1.0, SourcePoint source = {});

WaveguideConfig explicit_config(WallModel model, cplx k, double a,
                                const std::array<cplx, 3>& alpha,
                                const std::array<cplx, 3>& mu, SourcePoint source = {});

struct Gammas {
  cplx gamma0;
  cplx gamma1;
};

// Recovers (gamma0, gamma1) of the vertical wall.
Gammas gammas(const WaveguideConfig& cfg);

// alpha from alpha^2 = g (membrane, Im > 0 branch) or alpha^4 = g (plate, principal root)
cplx wall_alpha(WallModel model, cplx power);

// Stable short text used to tag outputs.
std::string config_fingerprint(const WaveguideConfig& cfg);

}  // namespace sh
