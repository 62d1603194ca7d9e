#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

namespace sh::cli {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::InvalidParameter, what); }

cplx complex_of(const json& v, const char* key) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  if (v.is_object() && v.contains("re")) {
    const double im = v.contains("im") ? v.at("im").get<double>() : 0.0;
    return {v.at("re").get<double>(), im};
  }
  invalid(std::string("'") + key + "' is not a complex number");
}

double real_of(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) invalid(std::string("'") + key + "' must be a number");
  return j.at(key).get<double>();
}

std::array<cplx, 3> triple(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 3) invalid(std::string("'") + key + "' needs three entries");
  return {complex_of(v[0], key), complex_of(v[1], key), complex_of(v[2], key)};
}

const char* half_plane_name(HalfPlane h) {
  switch (h) {
    case HalfPlane::Upper: return "upper";
    case HalfPlane::Real: return "real";
    case HalfPlane::Lower: return "lower";
  }
  return "?";
}

const char* model_name(WallModel m) { return m == WallModel::Membrane ? "membrane" : "plate"; }

json vector_json(const Eigen::VectorXcd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::optional<std::pair<int, int>> parse_grid(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return std::nullopt;
  try {
    std::size_t p1 = 0, p2 = 0;
    const int nx = std::stoi(s.substr(0, comma), &p1);
    const int ny = std::stoi(s.substr(comma + 1), &p2);
    if (p1 != comma || p2 != s.size() - comma - 1 || nx < 1 || ny < 1) return std::nullopt;
    return std::make_pair(nx, ny);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) invalid("cannot open '" + path + "' for writing");
  out << text;
  if (!out) invalid("write to '" + path + "' failed");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

WaveguideConfig parse_config(const json& j) {
  if (!j.is_object()) invalid("config must be a JSON object");
  try {
    WallModel model = WallModel::Membrane;
    if (j.contains("model")) {
      const std::string m = j.at("model").get<std::string>();
      if (m == "plate") model = WallModel::Plate;
      else if (m != "membrane") invalid("unknown model '" + m + "'");
    }
    const double a = real_of(j, "a", 1.0);
    SourcePoint src{1.0, 0.5 * a};
    if (j.contains("source")) {
      const json& s = j.at("source");
      if (!s.is_object()) invalid("'source' must be an object {x, y}");
      src.x = real_of(s, "x", src.x);
      src.y = real_of(s, "y", src.y);
    }

    if (j.contains("omega")) {
      WaveguideConfig cfg;
      cfg.model = model;
      cfg.omega = complex_of(j.at("omega"), "omega");
      cfg.c_sound = real_of(j, "c", cfg.c_sound);
      cfg.rho = real_of(j, "rho", cfg.rho);
      cfg.a = a;
      cfg.source = src;
      const json& walls = j.at("walls");
      if (!walls.is_array() || walls.size() != 3) invalid("'walls' needs three entries");
      for (int i = 0; i < 3; ++i) {
        cfg.wall[i].mass = real_of(walls[i], "mass", 0.0);
        if (!walls[i].contains("stiffness")) invalid("wall " + std::to_string(i) + " has no stiffness");
        cfg.wall[i].stiffness = real_of(walls[i], "stiffness", 0.0);
      }
      cfg.physical = true;
      return validate_config(cfg);
    }
    if (!j.contains("k")) invalid("config needs 'omega' (physical) or 'k' (dimensionless)");
    const cplx k = complex_of(j.at("k"), "k");
    if (j.contains("gamma0") || j.contains("gamma1")) {
      if (!j.contains("gamma0") || !j.contains("gamma1")) invalid("both gamma0 and gamma1 are required");
      return dimensionless_config(model, k, real_of(j, "gamma0", 0.0), real_of(j, "gamma1", 0.0), a, src);
    }
    if (j.contains("alphas") && j.contains("mus"))
      return explicit_config(model, k, a, triple(j, "alphas"), triple(j, "mus"), src);
    invalid("config needs gamma0/gamma1 or alphas/mus next to 'k'");
  } catch (const json::exception& e) {
    invalid(std::string("malformed config: ") + e.what());
  }
}

WaveguideConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot read config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    invalid(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

json to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json roots_report(const KernelContext& ctx, const RootClassification& cls) {
  json r;
  r["fingerprint"] = config_fingerprint(ctx.config());
  r["model"] = model_name(cls.model);
  r["case"] = to_string(cls.case_label);
  r["kappa"] = cls.kappa;
  r["winding"] = winding_index(ctx, cls, cls.has_real_root());
  json roots = json::array();
  for (int i = 0; i < cls.order(); ++i) {
    json z = to_json(cls.roots(i));
    z["half_plane"] = half_plane_name(cls.side[i]);
    roots.push_back(z);
  }
  r["roots"] = roots;
  r["eta"] = vector_json(cls.eta);
  r["max_residual"] = cls.max_residual;
  r["min_separation"] = cls.min_separation;
  return r;
}

json solve_report(const Pipeline& p) {
  const ConstantsSolution& cs = p.field->constants();
  json r;
  r["fingerprint"] = config_fingerprint(p.ctx.config());
  r["model"] = model_name(p.cls.model);
  r["case"] = to_string(cs.case_label);
  r["c"] = vector_json(cs.c);
  r["b"] = json::array({to_json(cs.b[0]), to_json(cs.b[1])});

  const LinearRows reg = assemble_regularity_rows(*p.problem);
  double reg_max = 0.0;
  if (reg.size() > 0) reg_max = (reg.rows * cs.unknowns).cwiseAbs().maxCoeff();
  r["residuals"] = {{"system", cs.residual},
                    {"wall_relation", cs.wall_relation},
                    {"regularity", reg_max},
                    {"condition", cs.condition}};
  const auto corner = p.field->corner_mismatch();
  r["corner_mismatch"] = json::array({to_json(corner[0]), to_json(corner[1])});
  return r;
}

json verify_report(const CrossValidationReport& rep, double tol) {
  json r;
  r["fingerprint"] = rep.fingerprint;
  r["samples"] = {{"nx", rep.xs.size()}, {"ny", rep.ys.size()}};
  json levels = json::array();
  for (const auto& l : rep.levels)
    levels.push_back({{"nx", l.spec.nx},
                      {"ny", l.spec.ny},
                      {"L", l.spec.L},
                      {"discrepancy", l.discrepancy},
                      {"max_pointwise", l.max_pointwise}});
  r["levels"] = levels;
  r["decreasing"] = rep.decreasing;
  r["tolerance"] = tol;
  const double last = rep.levels.empty() ? 1.0 : rep.levels.back().discrepancy;
  r["discrepancy"] = last;
  r["pass"] = last < tol;
  return r;
}

std::string grid_csv(const FieldGrid& g) {
  std::ostringstream os;
  os << "# kind=" << g.kind << " method=" << g.method << " fingerprint=" << g.fingerprint << '\n';
  os << "x,y,re_u,im_u,err_est\n";
  for (std::size_t i = 0; i < g.values.size(); ++i)
    os << number(g.x[i]) << ',' << number(g.y[i]) << ',' << number(g.values[i].real()) << ','
       << number(g.values[i].imag()) << ',' << number(g.err_est[i]) << '\n';
  return os.str();
}

std::string grid_plot_data(const FieldGrid& g) {
  std::ostringstream os;
  os << "# x y re_u im_u abs_u\n";
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    if (i > 0 && (g.y[i] != g.y[i - 1] || g.x[i] < g.x[i - 1])) os << '\n';
    os << number(g.x[i]) << ' ' << number(g.y[i]) << ' ' << number(g.values[i].real()) << ' '
       << number(g.values[i].imag()) << ' ' << number(std::abs(g.values[i])) << '\n';
  }
  return os.str();
}

int run(const RunRequest& req, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (req.output_path.empty()) invalid("--out is required");
    if (!(req.tol > 0.0)) invalid("--tol must be positive");
    const WaveguideConfig cfg = load_config(req.config_path);
    const double a = cfg.a;
    std::string text, plot;

    switch (req.mode) {
      case Mode::Roots: {
        const KernelContext ctx(cfg);
        text = roots_report(ctx, classify(ctx, req.case_override)).dump(2) + "\n";
        break;
      }
      case Mode::Solve: {
        text = solve_report(solve_pipeline(cfg, req.case_override)).dump(2) + "\n";
        break;
      }
      case Mode::Trace:
      case Mode::Field: {
        const auto [nx, ny] = req.grid.value_or(std::make_pair(32, 16));
        const double xmax = req.xmax > 0.0 ? req.xmax : 4.0 * a;
        std::vector<double> xs(nx), ys(ny);
        for (int i = 0; i < nx; ++i) xs[i] = xmax * (i + 1) / nx;
        for (int j = 0; j < ny; ++j) ys[j] = a * (j + 0.5) / ny;
        const Pipeline p = solve_pipeline(cfg, req.case_override);
        const FieldGrid g = req.mode == Mode::Trace ? trace_grid(*p.field, xs, ys) : field_grid(*p.field, xs, ys);
        text = grid_csv(g);
        if (req.emit_plot_data) plot = grid_plot_data(g);
        break;
      }
      case Mode::Verify: {
        const auto [nx, ny] = req.grid.value_or(std::make_pair(512, 128));
        if (nx < 8 || ny < 8) invalid("verify needs at least an 8x8 FD grid");
        const Pipeline p = solve_pipeline(cfg, req.case_override);
        const std::vector<FDGridSpec> levels{{nx / 2, ny / 2, 8.0 * a}, {nx, ny, 8.0 * a}};
        const CrossValidationReport rep = cross_validate(*p.field, levels);
        const json r = verify_report(rep, req.tol);
        write_file(req.output_path, r.dump(2) + "\n");
        for (const auto& l : rep.levels)
          log << "fd " << l.spec.ny << "x" << l.spec.nx << ": discrepancy " << l.discrepancy << " (" << l.seconds
              << " s)\n";
        log << "verify: " << (r["pass"].get<bool>() ? "pass" : "FAIL") << " in " << seconds_since(t0) << " s\n";
        return r["pass"].get<bool>() ? kOk : kNumerical;
      }
    }
    write_file(req.output_path, text);
    if (!plot.empty()) write_file(req.output_path + ".dat", plot);
    log << "wrote " << req.output_path << " in " << seconds_since(t0) << " s\n";
    return kOk;
  } catch (const Error& e) {
    log << (e.is_validation() ? "invalid input: " : "numerical failure: ") << e.what() << '\n';
    return e.is_validation() ? kValidation : kNumerical;
  } catch (const std::exception& e) {
    log << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}

int main(int argc, char** argv) {
  CLI::App app{"Acoustic fields in a semi-infinite strip waveguide with membrane or plate walls"};
  app.set_version_flag("--version", "1.0.0");

  RunRequest req;
  const std::map<std::string, Mode> modes{{"roots", Mode::Roots},
                                          {"solve", Mode::Solve},
                                          {"trace", Mode::Trace},
                                          {"field", Mode::Field},
                                          {"verify", Mode::Verify}};
  const std::map<std::string, CaseLabel> cases{{"I", CaseLabel::I},     {"II", CaseLabel::II},
                                               {"III", CaseLabel::III}, {"i", CaseLabel::I},
                                               {"ii", CaseLabel::II},   {"iii", CaseLabel::III}};
  std::string grid, case_label;
  app.add_option("--mode", req.mode, "roots, solve, trace, field or verify")
      ->required()
      ->transform(CLI::CheckedTransformer(modes));
  app.add_option("--config", req.config_path, "JSON configuration")->required();
  app.add_option("--out", req.output_path, "output file")->required();
  app.add_option("--grid", grid, "NX,NY: samples for trace/field, FD cells for verify");
  app.add_option("--tol", req.tol, "verify threshold on the relative L2 discrepancy");
  app.add_option("--xmax", req.xmax, "right end of trace/field samples (default 4a)");
  app.add_option("--case-override", case_label, "force the root case (testing only)")
      ->check(CLI::IsMember({"I", "II", "III", "i", "ii", "iii"}));
  app.add_flag("--emit-plot-data", req.emit_plot_data, "also write OUT.dat as gnuplot blocks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }
  if (!grid.empty()) {
    req.grid = parse_grid(grid);
    if (!req.grid) {
      std::cerr << "invalid input: --grid expects NX,NY\n";
      return kValidation;
    }
  }
  if (!case_label.empty()) req.case_override = cases.at(case_label);
  return run(req, std::cerr);
}

}  // namespace sh::cli
