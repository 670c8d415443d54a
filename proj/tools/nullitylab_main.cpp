// Command-line entry point: build surfaces, run verification scenarios,
// export meshes and per-point tables.
//
// Exit codes: 0 on success / overall pass, 1 on verification failure,
// 2 on configuration errors.

#include <CLI11.hpp>

#include <nullitylab/export.hpp>
#include <nullitylab/verify.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

std::vector<int> parse_grid_spec(const std::string& spec) {
  std::vector<int> counts;
  std::string token;
  for (char ch : spec + "x") {
    if (ch == 'x' || ch == 'X') {
      if (token.empty()) throw nlab::config_error("malformed grid spec: " + spec);
      counts.push_back(std::stoi(token));
      token.clear();
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      token.push_back(ch);
    } else {
      throw nlab::config_error("malformed grid spec: " + spec);
    }
  }
  if (counts.empty()) throw nlab::config_error("empty grid spec");
  return counts;
}

void apply_overrides(nlab::ordered_json& cfg, const std::vector<std::string>& tols,
                     const std::string& grid_spec, long long seed, const std::string& out) {
  for (const auto& kv : tols) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw nlab::config_error("tolerance override must be key=value: " + kv);
    const std::string key = kv.substr(0, eq);
    try {
      cfg["tolerances"][key] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw nlab::config_error("tolerance override is not a number: " + kv);
    }
  }
  if (!grid_spec.empty()) cfg["grid"]["counts"] = parse_grid_spec(grid_spec);
  if (seed >= 0) cfg["seed"] = seed;
  if (!out.empty()) cfg["outputs"]["report_path"] = out;
}

int cmd_verify(const std::string& config_path, const std::vector<std::string>& tols,
               const std::string& grid_spec, long long seed, const std::string& out) {
  nlab::ordered_json cfg;
  {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot read config " << config_path << "\n";
      return 2;
    }
    try {
      in >> cfg;
    } catch (const nlohmann::json::parse_error& e) {
      std::cerr << "error: malformed JSON in " << config_path << ": " << e.what() << "\n";
      return 2;
    }
  }
  apply_overrides(cfg, tols, grid_spec, seed, out);
  auto rep = nlab::run_scenario(cfg);
  for (const auto& c : rep.checks)
    std::printf("  [%s] %-38s residual %.3e  tolerance %.3e  (%s)\n", c.pass ? "pass" : "FAIL",
                c.name.c_str(), c.residual, c.tolerance, nlab::to_string(c.mode));
  std::printf("%s: %s in %.0f ms\n", rep.scenario.c_str(),
              rep.overall_pass ? "overall pass" : "overall FAIL", rep.elapsed_ms);
  if (!cfg.contains("outputs") || !cfg["outputs"].contains("report_path")) {
    const std::string fallback = rep.scenario + "_report.json";
    nlab::write_report(rep, fallback);
    std::printf("report written to %s\n", fallback.c_str());
  } else {
    std::printf("report written to %s\n",
                cfg["outputs"]["report_path"].get<std::string>().c_str());
  }
  return rep.overall_pass ? 0 : 1;
}

int cmd_build_export(bool want_obj, const std::string& kind, double phi, double theta,
                     const std::vector<std::string>& params, const std::string& grid_spec,
                     const std::string& out_base) {
  nlab::ordered_json surface;
  surface["kind"] = kind;
  surface["phi"] = phi;
  surface["theta"] = theta;
  for (const auto& kv : params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw nlab::config_error("surface parameter must be key=value: " + kv);
    surface[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
  nlab::Chart chart = nlab::chart_from_config(surface);

  nlab::SampleGrid grid;
  grid.counts = grid_spec.empty() ? std::vector<int>(chart.dim, 11) : parse_grid_spec(grid_spec);
  if (static_cast<int>(grid.counts.size()) != chart.dim)
    throw nlab::config_error("grid dimension does not match the surface parameter count");
  grid.ranges = chart.domain.intervals;
  if (chart.dim == 3) grid.ranges[2] = {0.0, 2.0 * M_PI};

  const std::string base = out_base.empty() ? kind : out_base;
  if (want_obj) {
    nlab::write_obj(chart, grid, base + ".obj");
    std::printf("mesh written to %s.obj (%d vertices)\n", base.c_str(),
                grid.counts[0] * grid.counts[1]);
  }
  nlab::write_surface_csv(chart, grid, base + ".csv");
  std::printf("table written to %s.csv (%d grid points)\n", base.c_str(), grid.total());
  if (chart.dim == 2) {
    nlab::write_ellipse_csv(chart, grid, base + "_ellipses.csv");
    std::printf("ellipse table written to %s_ellipses.csv\n", base.c_str());
  }
  if (kind == "delaunay") {
    auto prof = nlab::delaunay_profile(
        surface.value("mean_curvature", 0.2), surface.value("c0", 0.3),
        {surface.value("x_min", 1.0), surface.value("x_max", 1.6)}, surface.value("n", 3),
        surface.value("phi0", 1.0), surface.value("dphi0", 0.0),
        surface.value("sign_branch", 1));
    nlab::write_profile_csv(prof.xs, prof.values, prof.slopes, base + "_profile.csv");
    std::printf("profile written to %s_profile.csv\n", base.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical verification lab for nullity-carrying immersions"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "run a verification scenario from a JSON config");
  std::string config_path, grid_spec, out_path;
  std::vector<std::string> tol_overrides;
  long long seed = -1;
  verify->add_option("--config", config_path, "scenario config (JSON)")->required();
  verify->add_option("--tol", tol_overrides, "tolerance override key=value (repeatable)");
  verify->add_option("--grid", grid_spec, "grid counts override, e.g. 9x9x16");
  verify->add_option("--seed", seed, "sampling seed override");
  verify->add_option("--out", out_path, "report output path");

  std::string surface_kind;
  double phi = M_PI / 6.0, theta = 0.0;
  std::vector<std::string> surface_params;
  std::string be_grid, be_out;

  auto* build = app.add_subcommand("build", "sample a surface into an OBJ mesh and CSV table");
  build->add_option("--surface", surface_kind, "surface kind")->required();
  build->add_option("--phi", phi, "orthogonal-sum mixing angle");
  build->add_option("--theta", theta, "associated family angle");
  build->add_option("--param", surface_params, "extra surface parameter key=value");
  build->add_option("--grid", be_grid, "grid counts, e.g. 21x21");
  build->add_option("--out", be_out, "output base path");

  auto* exp = app.add_subcommand("export", "sample a surface into a CSV table");
  exp->add_option("--surface", surface_kind, "surface kind")->required();
  exp->add_option("--phi", phi, "orthogonal-sum mixing angle");
  exp->add_option("--theta", theta, "associated family angle");
  exp->add_option("--param", surface_params, "extra surface parameter key=value");
  exp->add_option("--grid", be_grid, "grid counts, e.g. 9x9x16");
  exp->add_option("--out", be_out, "output base path");

  auto* list = app.add_subcommand("list-scenarios", "list bundled scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed())
      return cmd_verify(config_path, tol_overrides, grid_spec, seed, out_path);
    if (build->parsed())
      return cmd_build_export(true, surface_kind, phi, theta, surface_params, be_grid, be_out);
    if (exp->parsed())
      return cmd_build_export(false, surface_kind, phi, theta, surface_params, be_grid, be_out);
    if (list->parsed()) {
      for (const auto& [name, desc] : nlab::list_scenarios())
        std::printf("%-18s %s\n", name.c_str(), desc.c_str());
      return 0;
    }
  } catch (const nlab::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nlab::hypothesis_violation& e) {
    std::cerr << "hypothesis violation: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
