#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace sh;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "strip_helmholtz_cli_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  fs::remove(p);
  fs::remove(p.string() + ".dat");
  return p;
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = scratch(name);
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorKind kind_of(const json& j) {
  try {
    (void)cli::parse_config(j);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Overflow;  // marker: nothing thrown
}

const char* kRow1 = R"({"k": [1, 0.1], "gamma0": 5, "gamma1": 1})";

}  // namespace

TEST(Config, DimensionlessFormMatchesTheLibrary) {
  const auto cfg = cli::parse_config(json::parse(kRow1));
  const auto ref = dimensionless_config(WallModel::Membrane, {1.0, 0.1}, 5.0, 1.0);
  EXPECT_EQ(config_fingerprint(cfg), config_fingerprint(ref));
}

TEST(Config, ComplexValuesInEveryNotation) {
  const auto a = cli::parse_config(json::parse(R"({"k": [1, 1], "gamma0": 1, "gamma1": 0.1})"));
  const auto b = cli::parse_config(json::parse(R"({"k": {"re": 1, "im": 1}, "gamma0": 1, "gamma1": 0.1})"));
  EXPECT_EQ(a.k, cplx(1.0, 1.0));
  EXPECT_EQ(config_fingerprint(a), config_fingerprint(b));
  const auto c = cli::parse_config(json::parse(R"({"k": [2, 0.5], "gamma0": 1, "gamma1": 0.1})"));
  EXPECT_EQ(c.k, cplx(2.0, 0.5));
}

TEST(Config, PlateModelAndSource) {
  const auto cfg = cli::parse_config(
      json::parse(R"({"model": "plate", "k": [1, 0.1], "gamma0": 1, "gamma1": 0.1, "source": {"x": 0.5, "y": 0.3}})"));
  EXPECT_EQ(cfg.model, WallModel::Plate);
}

TEST(Config, PhysicalForm) {
  const auto cfg = cli::parse_config(json::parse(R"({
    "omega": [1.0, 0.1], "c": 1.0, "rho": 1.0,
    "walls": [{"mass": 1.0, "stiffness": 2.0}, {"mass": 1.0, "stiffness": 3.0}, {"mass": 2.0, "stiffness": 1.0}]})"));
  EXPECT_EQ(cfg.model, WallModel::Membrane);
  EXPECT_NEAR(std::abs(cfg.k - cplx(1.0, 0.1)), 0.0, 1e-14);
}

TEST(Config, MalformedInputIsAValidationError) {
  EXPECT_EQ(kind_of(json::parse(R"({"gamma0": 1, "gamma1": 0.1})")), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of(json::parse(R"({"k": "one", "gamma0": 1, "gamma1": 0.1})")), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of(json::parse(R"({"k": [1, 0.1, 3], "gamma0": 1, "gamma1": 0.1})")), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of(json::parse(R"({"model": "shell", "k": 1, "gamma0": 1, "gamma1": 0.1})")),
            ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of(json::parse(R"({"k": [1, 0.1], "gamma0": 5, "gamma1": -1})")), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of(json::parse("[1, 2]")), ErrorKind::InvalidParameter);
}

TEST(Run, RootsReportOnTheFirstTableRow) {
  const auto cfg = write_config("row1.json", kRow1);
  const auto out = scratch("row1_roots.json");
  std::ostringstream log;
  ASSERT_EQ(cli::run({cli::Mode::Roots, cfg.string(), out.string()}, log), cli::kOk) << log.str();
  const json r = json::parse(slurp(out));
  EXPECT_EQ(r.at("case"), "I");
  EXPECT_EQ(r.at("roots").size(), 3u);
  EXPECT_TRUE(r.contains("fingerprint"));
}

TEST(Run, MalformedConfigWritesNothing) {
  const auto cfg = write_config("broken.json", R"({"k": [1, 0.1], "gamma0": )");
  const auto out = scratch("broken_out.json");
  std::ostringstream log;
  EXPECT_EQ(cli::run({cli::Mode::Solve, cfg.string(), out.string()}, log), cli::kValidation);
  EXPECT_FALSE(fs::exists(out));
  EXPECT_FALSE(log.str().empty());
}

TEST(Run, MissingConfigIsAValidationError) {
  const auto out = scratch("missing_out.json");
  std::ostringstream log;
  EXPECT_EQ(cli::run({cli::Mode::Roots, scratch("nope.json").string(), out.string()}, log), cli::kValidation);
  EXPECT_FALSE(fs::exists(out));
}

TEST(Run, CaseOverrideOutsideTheClassificationFails) {
  const auto cfg = write_config("row1_override.json", kRow1);
  const auto out = scratch("override_out.json");
  cli::RunRequest req{cli::Mode::Solve, cfg.string(), out.string()};
  req.case_override = CaseLabel::III;
  std::ostringstream log;
  EXPECT_EQ(cli::run(req, log), cli::kNumerical);
  EXPECT_FALSE(fs::exists(out));
}

TEST(Run, SolveOutputIsByteIdentical) {
  const auto cfg = write_config("row1_solve.json", kRow1);
  const auto o1 = scratch("solve1.json"), o2 = scratch("solve2.json");
  std::ostringstream log;
  ASSERT_EQ(cli::run({cli::Mode::Solve, cfg.string(), o1.string()}, log), cli::kOk) << log.str();
  ASSERT_EQ(cli::run({cli::Mode::Solve, cfg.string(), o2.string()}, log), cli::kOk) << log.str();
  const std::string a = slurp(o1);
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(o2));
  const json r = json::parse(a);
  EXPECT_TRUE(r.contains("c"));
  EXPECT_TRUE(r.contains("residuals"));
}

TEST(Run, TraceCsvLayout) {
  const auto cfg = write_config("row1_trace.json", kRow1);
  const auto out = scratch("trace.csv");
  cli::RunRequest req{cli::Mode::Trace, cfg.string(), out.string()};
  req.grid = std::make_pair(4, 3);
  req.emit_plot_data = true;
  std::ostringstream log;
  ASSERT_EQ(cli::run(req, log), cli::kOk) << log.str();
  std::istringstream in(slurp(out));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("# ", 0), 0u);
  std::getline(in, line);
  EXPECT_EQ(line, "x,y,re_u,im_u,err_est");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  EXPECT_EQ(rows, 4 + 4 + 3);  // both walls, then the vertical edge
  EXPECT_TRUE(fs::exists(out.string() + ".dat"));
}

TEST(Binary, ExitCodes) {
  const auto cfg = write_config("bin_broken.json", "{");
  const auto out = scratch("bin_out.json");
  const std::string exe = STRIP_HELMHOLTZ_CLI;
  auto status = [](const std::string& cmd) {
    const int s = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status(exe + " --mode solve --config " + cfg.string() + " --out " + out.string()), 2);
  EXPECT_FALSE(fs::exists(out));
  EXPECT_EQ(status(exe + " --mode nonsense --config " + cfg.string() + " --out " + out.string()), 2);
  const auto good = write_config("bin_row1.json", kRow1);
  EXPECT_EQ(status(exe + " --mode roots --config " + good.string() + " --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out));
}
