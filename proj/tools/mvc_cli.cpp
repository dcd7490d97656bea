// mvc: mean value coordinates, derivatives, deformation, validation, solve.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mvc.hpp"

namespace {

using mvc::io::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;

struct RunConfig {
  double eps_plane = mvc::Tolerances{}.eps_plane;
  double eps_theta = mvc::Tolerances{}.eps_theta;
  double eps_switch = mvc::Tolerances{}.eps_switch;
  double fd_h = mvc::validation::Thresholds{}.gradient_step;
  std::string threads = "1";
  std::uint64_t seed = 42;
  std::string out;

  mvc::Tolerances tolerances() const {
    mvc::Tolerances t;
    t.eps_plane = eps_plane;
    t.eps_theta = eps_theta;
    t.eps_switch = eps_switch;
    return t;
  }

  unsigned thread_count() const {
    if (threads == "auto") return 0;
    try {
      std::size_t used = 0;
      const long v = std::stol(threads, &used);
      if (used == threads.size() && v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw mvc::Error(mvc::ErrorCode::InvalidInput, "--threads expects a positive count or 'auto'");
  }
};

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw mvc::Error(mvc::ErrorCode::InvalidInput, std::string(name) + " must be positive");
  }
}

/// Writes to --out when given, otherwise to stdout.
void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw mvc::Error(mvc::ErrorCode::InvalidInput, "cannot write " + cfg.out);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

mvc::CageMesh read_cage(const std::string& path, const mvc::Tolerances& tol) {
  return mvc::load_cage(mvc::io::read_obj(path), tol);
}

std::vector<mvc::Vec3> query_points(const std::string& file, const std::vector<std::string>& inline_points) {
  std::vector<mvc::Vec3> pts;
  if (!file.empty()) pts = mvc::io::read_points(file);
  for (const auto& s : inline_points) {
    std::istringstream in(s);
    const auto p = mvc::io::parse_points(in, "--point");
    pts.insert(pts.end(), p.begin(), p.end());
  }
  if (pts.empty()) throw mvc::Error(mvc::ErrorCode::InvalidInput, "no query points (give a points file or --point)");
  return pts;
}

int cmd_weights(const RunConfig& cfg, const std::string& cage_path, const std::string& points_path,
                const std::vector<std::string>& inline_points) {
  const auto tol = cfg.tolerances();
  const auto cage = read_cage(cage_path, tol);
  const auto pts = query_points(points_path, inline_points);
  std::vector<json> entries(pts.size());
  mvc::parallel_for(pts.size(), cfg.thread_count(), [&](std::size_t k) {
    try {
      entries[k] = mvc::io::weights_entry(pts[k], mvc::mvc_coordinates(cage, pts[k], tol));
    } catch (const mvc::Error& e) {
      entries[k] = mvc::io::failed_entry(pts[k], mvc::io::status_of(e), e.what());
    }
  });
  json doc;
  doc["points"] = entries;
  emit(cfg, dump(doc));
  return kExitOk;
}

int cmd_derivs(const RunConfig& cfg, const std::string& cage_path, const std::string& points_path,
               const std::vector<std::string>& inline_points, int order) {
  const auto tol = cfg.tolerances();
  const auto cage = read_cage(cage_path, tol);
  const auto pts = query_points(points_path, inline_points);
  std::vector<json> entries(pts.size());
  mvc::parallel_for(pts.size(), cfg.thread_count(), [&](std::size_t k) {
    try {
      mvc::DerivativeSet ds = mvc::derivative_set(cage, pts[k], tol, order);
      if (order < 2) ds.hess_lambda.clear();
      entries[k] = mvc::io::derivatives_entry(pts[k], ds);
    } catch (const mvc::Error& e) {
      json entry = mvc::io::failed_entry(pts[k], mvc::io::status_of(e), e.what());
      if (e.code() == mvc::ErrorCode::OnSurface) {
        // Coordinates still exist on the surface; derivatives do not.
        const auto wv = mvc::mvc_coordinates(cage, pts[k], tol);
        entry["lambda"] = wv.lambda;
        entry["w"] = wv.w;
      }
      entries[k] = std::move(entry);
    }
  });
  json doc;
  doc["order"] = order;
  doc["points"] = entries;
  emit(cfg, dump(doc));
  return kExitOk;
}

int cmd_deform(const RunConfig& cfg, const std::string& cage_path, const std::string& deformed_path,
               const std::string& mesh_path) {
  const auto tol = cfg.tolerances();
  const auto cage = read_cage(cage_path, tol);
  const auto deformed_soup = mvc::io::read_obj(deformed_path);
  const mvc::DeformedCage deformed{deformed_soup.vertices};
  mvc::check_deformed(cage, deformed);
  const auto mesh = mvc::io::read_obj(mesh_path);
  std::ostringstream out;
  mvc::io::write_obj(out, mvc::deform_mesh(cage, deformed, mesh, tol, cfg.thread_count()));
  emit(cfg, out.str());
  return kExitOk;
}

int cmd_validate(const RunConfig& cfg, const std::string& cage_path, std::size_t samples) {
  mvc::validation::ValidationConfig vc;
  vc.tol = cfg.tolerances();
  vc.samples = samples;
  vc.seed = cfg.seed;
  vc.threads = cfg.thread_count();
  vc.th.gradient_step = cfg.fd_h;
  vc.th.hessian_step = 10.0 * cfg.fd_h;
  const auto cage = read_cage(cage_path, vc.tol);
  const auto rep = mvc::validation::run_validation(cage, vc);
  emit(cfg, dump(mvc::validation::report_json(cage, vc, rep)));
  return rep.pass() ? kExitOk : kExitValidation;
}

int cmd_solve(const RunConfig& cfg, const std::string& cage_path, const std::string& constraints_path,
              const std::string& report_path) {
  const auto tol = cfg.tolerances();
  const auto cage = read_cage(cage_path, tol);
  const auto doc = mvc::io::read_constraints(constraints_path, cage);
  const auto sys = mvc::assemble_system(cage, doc.constraints, doc.rigidity, tol, cfg.thread_count());
  const auto sol = mvc::solve(sys);

  std::ostringstream obj;
  mvc::io::write_obj(obj, mvc::TriangleSoup{sol.cage.positions, cage.triangles()});
  emit(cfg, obj.str());

  json rep;
  rep["rows"] = sys.A.rows();
  rep["unknowns"] = sys.A.cols();
  rep["rank"] = sol.rank;
  rep["nullity"] = sol.nullity;
  rep["residual"] = sol.residual;
  rep["relative_residual"] = sol.relative_residual;
  rep["rank_deficient_unconstrained"] = sol.rank_deficient_unconstrained;
  rep["gauge_row"] = sys.gauge_row;
  rep["rigidity_samples"] = doc.rigidity.sample_points.size();
  if (report_path.empty()) {
    std::cerr << dump(rep);
  } else {
    std::ofstream f(report_path, std::ios::binary);
    if (!f) throw mvc::Error(mvc::ErrorCode::InvalidInput, "cannot write " + report_path);
    f << dump(rep);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean value coordinates: weights, derivatives, deformation, validation and solve"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--eps-plane", cfg.eps_plane, "support-plane tolerance (relative to mean edge)")
        ->envname("MVC_EPS_PLANE");
    sub->add_option("--eps-theta", cfg.eps_theta, "kernel series/closed-form seam (radians)")
        ->envname("MVC_EPS_THETA");
    sub->add_option("--eps-switch", cfg.eps_switch, "planar-expansion band (relative to edge length)")
        ->envname("MVC_EPS_SWITCH");
    sub->add_option("--fd-h", cfg.fd_h, "gradient FD step in bbox diagonals; Hessian step is 10x")
        ->envname("MVC_FD_H");
    sub->add_option("--threads", cfg.threads, "worker threads, or 'auto'")->envname("MVC_THREADS");
    sub->add_option("--seed", cfg.seed, "sampling seed")->envname("MVC_SEED");
    sub->add_option("--out", cfg.out, "output file (default stdout)")->envname("MVC_OUT");
  };

  std::string cage, points, deformed, mesh, constraints, report;
  std::vector<std::string> inline_points;
  int order = 2;
  std::size_t samples = 1000;

  auto* weights = app.add_subcommand("weights", "mean value coordinates at query points");
  weights->add_option("cage", cage, "cage OBJ")->required();
  weights->add_option("points", points, "points file (x y z per line)");
  weights->add_option("--point", inline_points, "query point \"x y z\" (repeatable)");
  add_common(weights);

  auto* derivs = app.add_subcommand("derivs", "coordinates with gradients and Hessians");
  derivs->add_option("cage", cage, "cage OBJ")->required();
  derivs->add_option("points", points, "points file (x y z per line)");
  derivs->add_option("--point", inline_points, "query point \"x y z\" (repeatable)");
  derivs->add_option("--order", order, "1: gradients, 2: gradients and Hessians")
      ->check(CLI::IsMember({1, 2}));
  add_common(derivs);

  auto* deform = app.add_subcommand("deform", "move an embedded mesh with the cage");
  deform->add_option("cage", cage, "reference cage OBJ")->required();
  deform->add_option("deformed", deformed, "deformed cage OBJ")->required();
  deform->add_option("mesh", mesh, "embedded mesh OBJ")->required();
  add_common(deform);

  auto* validate = app.add_subcommand("validate", "run the oracle suites and write a JSON report");
  validate->add_option("cage", cage, "cage OBJ")->required();
  validate->add_option("--samples", samples, "random points per weight suite")->check(CLI::PositiveNumber);
  add_common(validate);

  auto* solve = app.add_subcommand("solve", "solve for a deformed cage from constraints");
  solve->add_option("cage", cage, "cage OBJ")->required();
  solve->add_option("constraints", constraints, "constraints JSON")->required();
  solve->add_option("--report", report, "residual report JSON (default stderr)")->envname("MVC_REPORT");
  add_common(solve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    check_positive(cfg.eps_plane, "--eps-plane");
    check_positive(cfg.eps_theta, "--eps-theta");
    check_positive(cfg.eps_switch, "--eps-switch");
    check_positive(cfg.fd_h, "--fd-h");
    if (*weights) return cmd_weights(cfg, cage, points, inline_points);
    if (*derivs) return cmd_derivs(cfg, cage, points, inline_points, order);
    if (*deform) return cmd_deform(cfg, cage, deformed, mesh);
    if (*validate) return cmd_validate(cfg, cage, samples);
    if (*solve) return cmd_solve(cfg, cage, constraints, report);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
