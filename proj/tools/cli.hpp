#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "strip_helmholtz/field.hpp"
#include "strip_helmholtz/oracle.hpp"

namespace sh::cli {

enum class Mode { Roots, Solve, Trace, Field, Verify };

struct RunRequest {
  Mode mode = Mode::Roots;
  std::string config_path;
  std::string output_path;
  // Sample counts for trace/field, FD cells (nx along x, ny across) for verify.
  std::optional<std::pair<int, int>> grid;
  // Acceptance threshold of verify on the relative L2 discrepancy.
  double tol = 0.05;
  double xmax = 0.0;  // 0 -> 4a
  std::optional<CaseLabel> case_override;
  bool emit_plot_data = false;
};

enum ExitCode { kOk = 0, kValidation = 2, kNumerical = 3 };

// Accepts the physical form (omega, walls) or the dimensionless one (k with
// gamma0/gamma1, or k with alphas/mus). Throws Error(InvalidParameter).
WaveguideConfig parse_config(const nlohmann::json& j);
WaveguideConfig load_config(const std::string& path);

nlohmann::json to_json(cplx z);
nlohmann::json roots_report(const KernelContext& ctx, const RootClassification& cls);
nlohmann::json solve_report(const Pipeline& p);
nlohmann::json verify_report(const CrossValidationReport& r, double tol);

std::string grid_csv(const FieldGrid& g);
// gnuplot "splot ... with pm3d" blocks, one per y, blank line between.
std::string grid_plot_data(const FieldGrid& g);

// Runs one request; diagnostics go to `log`. Nothing is written on failure.
int run(const RunRequest& req, std::ostream& log);

// Full command line handling, including flag errors (exit 2).
int main(int argc, char** argv);

}  // namespace sh::cli
