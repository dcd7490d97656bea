// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is 0 only when every criterion passes.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "mvc.hpp"

namespace {

using namespace mvc;
using validation::ValidationConfig;
using validation::ValidationReport;

struct KernelRow {
  double theta;
  std::array<double, 11> v;  // eq1..eq9, d eq1, d eq2
};

const KernelRow kKernelOracle[] = {
#include "data/kernel_oracle.inc"
};

struct NamedCage {
  std::string name;
  CageMesh cage;
};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (detail.tellp() > 0) detail << "; ";
    detail << (ok ? "" : "FAILED ") << what;
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string metric_text(const validation::SuiteReport& s, const std::string& metric) {
  const auto& m = s.metric(metric);
  return metric + "=" + fmt(m.value) + (m.gated ? " (<= " + fmt(m.tolerance) + ")" : "");
}

/// Requires every gated metric of the suite and reports the named ones.
void require_suite(Outcome& o, const std::string& cage, const validation::SuiteReport& s,
                   const std::vector<std::string>& shown) {
  std::string text = cage + ":";
  for (const auto& n : shown) text += " " + metric_text(s, n);
  o.require(s.pass(), text);
}

void print(int id, const std::string& title, const Outcome& o) {
  std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.str().c_str());
  std::fflush(stdout);
}

Outcome kernel_criterion(const ValidationReport& cube_report) {
  Outcome o;
  const Tolerances tol;
  constexpr std::array<KernelId, 9> ids = kAllKernels;
  double above = 0.0, below = 0.0;
  for (const auto& row : kKernelOracle) {
    if (row.theta >= std::numbers::pi - tol.eps_pi) continue;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const double ref = row.v[k];
      const double got = eval_kernel(ids[k], row.theta, tol);
      const double rel = std::abs(got - ref) / std::max(std::abs(ref), 1e-300);
      double& worst = row.theta >= tol.eps_theta ? above : below;
      worst = std::max(worst, rel);
    }
  }
  o.require(above <= 1e-12, "theta>=eps_theta max rel " + fmt(above) + " (<= 1e-12)");
  o.require(below <= 1e-9, "theta<eps_theta max rel " + fmt(below) + " (<= 1e-9)");
  const auto& k = cube_report.suite("kernels");
  o.require(k.pass(), metric_text(k, "max_seam_jump") + " " + metric_text(k, "max_identity_defect"));
  return o;
}

Outcome determinism_criterion(const CageMesh& cube) {
  Outcome o;
  ValidationConfig cfg;
  cfg.samples = 1000;
  cfg.seed = 42;
  cfg.threads = 1;
  const auto t0 = std::chrono::steady_clock::now();
  const auto first = validation::run_validation(cube, cfg);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string a = validation::report_json(cube, cfg, first).dump(2);
  const std::string b = validation::report_json(cube, cfg, validation::run_validation(cube, cfg)).dump(2);
  cfg.threads = 4;
  const std::string c = validation::report_json(cube, cfg, validation::run_validation(cube, cfg)).dump(2);
  o.require(first.pass(), "cube report status " + std::string(first.pass() ? "pass" : "fail"));
  o.require(seconds <= 60.0, "single-threaded run " + fmt(seconds) + " s (<= 60 s)");
  o.require(a == b, "repeat run byte-identical");
  o.require(a == c, "threads 1 vs 4 byte-identical");
  return o;
}

}  // namespace

int main() {
  std::vector<NamedCage> cages;
  cages.push_back({"cube", load_cage(shapes::cube())});
  cages.push_back({"icosphere(2)", load_cage(shapes::icosphere(2))});
  cages.push_back({"L-cage", load_cage(shapes::l_cage())});

  std::vector<ValidationReport> reports;
  ValidationConfig cfg;
  for (const auto& c : cages) reports.push_back(validation::run_validation(c.cage, cfg));

  auto per_cage = [&](const std::string& suite, const std::vector<std::string>& shown, double max_seconds) {
    Outcome o;
    for (std::size_t i = 0; i < cages.size(); ++i) {
      const auto& s = reports[i].suite(suite);
      require_suite(o, cages[i].name, s, shown);
      if (max_seconds > 0.0) {
        o.require(s.seconds <= max_seconds, cages[i].name + " runtime " + fmt(s.seconds) + " s (<= " +
                                                fmt(max_seconds) + " s)");
      }
    }
    return o;
  };

  std::vector<bool> results;
  auto record = [&](int id, const std::string& title, const Outcome& o) {
    print(id, title, o);
    results.push_back(o.pass);
  };

  record(1, "partition of unity and linear precision",
         per_cage("partition_of_unity", {"max_partition_defect", "max_linear_precision_defect_over_diag"}, 10.0));
  record(2, "dual-formula weight equivalence",
         per_cage("dual_formula", {"max_spherical_excess_gap", "max_quadrature_gap"}, 60.0));
  record(3, "gradient vs finite differences", per_cage("gradient_fd", {"max_relative_error"}, 0.0));
  record(4, "Hessian vs finite differences",
         per_cage("hessian_fd", {"max_relative_error", "max_symmetry_defect"}, 0.0));
  record(5, "identity sums", per_cage("identity_sums", {"max_gradient_sum", "max_hessian_sum"}, 0.0));
  record(6, "affine reproduction",
         per_cage("affine_reproduction",
                  {"max_value_error_over_diag", "max_jacobian_error", "max_hessian_norm_times_diag"}, 0.0));
  record(7, "planar special cases",
         per_cage("planar_cases",
                  {"max_limit_gap", "max_normal_fd_gap", "max_normal_normal_hessian_gap", "max_full_hessian_gap",
                   "max_full_hessian_gap_rank_one_form"},
                  0.0));
  record(8, "kernel functions", kernel_criterion(reports[0]));
  record(9, "variational solver",
         per_cage("solver", {"max_affine_recovery_error_over_diag", "max_exact_case_error"}, 0.0));
  record(10, "determinism and throughput", determinism_criterion(cages[0].cage));

  std::size_t passed = 0;
  for (bool r : results) passed += r ? 1 : 0;
  std::printf("%zu/%zu criteria passed\n", passed, results.size());
  return passed == results.size() ? 0 : 1;
}
