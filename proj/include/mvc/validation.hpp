#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "mvc/deformation.hpp"
#include "mvc/derivatives.hpp"
#include "mvc/kernels.hpp"
#include "mvc/oracles.hpp"
#include "mvc/parallel.hpp"
#include "mvc/solver.hpp"
#include "mvc/weights.hpp"

namespace mvc::validation {

using json = nlohmann::ordered_json;

/// Platform-independent uniform sampling on top of mt19937_64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  Vec3 in_box(const Vec3& lo, const Vec3& hi) {
    const double x = uniform(lo.x(), hi.x());
    const double y = uniform(lo.y(), hi.y());
    const double z = uniform(lo.z(), hi.z());
    return {x, y, z};
  }
  Vec3 unit_vector() {
    for (;;) {
      const Vec3 v = in_box(Vec3::Constant(-1.0), Vec3::Constant(1.0));
      const double n = v.norm();
      if (n > 1e-3 && n <= 1.0) return v / n;
    }
  }

 private:
  std::mt19937_64 gen_;
};

/// Points in the cage bounding box grown by `margin` * extent on every side,
/// at least `band` * diagonal away from the surface.
inline std::vector<Vec3> sample_points(const CageMesh& cage, std::size_t count, Rng& rng, double band,
                                       double margin = 0.25) {
  const Vec3 ext = cage.bbox_max() - cage.bbox_min();
  const Vec3 lo = cage.bbox_min() - margin * ext, hi = cage.bbox_max() + margin * ext;
  const double cut = band * cage.bbox_diagonal();
  std::vector<Vec3> out;
  out.reserve(count);
  while (out.size() < count) {
    const Vec3 p = rng.in_box(lo, hi);
    if (distance_to_surface(cage, p) >= cut) out.push_back(p);
  }
  return out;
}

/// A query point in the support plane of triangle t, outside t.
struct PlanarConfiguration {
  std::size_t triangle = 0;
  Vec3 point = Vec3::Zero();
};

/// Walks outwards from a triangle edge inside the triangle's plane until the
/// point is at least `clearance` * diagonal from the cage.
inline std::vector<PlanarConfiguration> planar_configurations(const CageMesh& cage, std::size_t count, Rng& rng,
                                                              double clearance = 0.05) {
  std::vector<PlanarConfiguration> out;
  const double cut = clearance * cage.bbox_diagonal();
  for (std::size_t attempt = 0; out.size() < count && attempt < 100 * count + 1000; ++attempt) {
    const std::size_t t = static_cast<std::size_t>(rng.uniform() * static_cast<double>(cage.triangle_count())) %
                          cage.triangle_count();
    const int e = static_cast<int>(rng.uniform() * 3.0) % 3;
    const Vec3 c = (cage.corner(t, 0) + cage.corner(t, 1) + cage.corner(t, 2)) / 3.0;
    const double s = rng.uniform(0.0, 1.0);
    const Vec3 a = cage.corner(t, (e + 1) % 3), b = cage.corner(t, (e + 2) % 3);
    const Vec3 on_edge = a + s * (b - a);
    const Vec3 dir = on_edge - c;
    const double reach = rng.uniform(0.3, 1.5) * cage.bbox_diagonal() / std::max(dir.norm(), 1e-300);
    const Vec3 q = on_edge + reach * dir;
    if (distance_to_surface(cage, q) < cut) continue;
    out.push_back({t, q});
  }
  return out;
}

struct Metric {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool gated = true;

  bool pass() const { return !gated || value <= tolerance; }
};

struct SuiteReport {
  std::string name;
  std::size_t samples = 0;
  std::vector<Metric> metrics;
  double seconds = 0.0;  // wall time; kept out of the JSON so reports stay reproducible

  bool pass() const {
    return std::all_of(metrics.begin(), metrics.end(), [](const Metric& m) { return m.pass(); });
  }
  const Metric& metric(const std::string& n) const {
    for (const auto& m : metrics)
      if (m.name == n) return m;
    throw Error(ErrorCode::InvalidInput, "no metric " + n);
  }
  json to_json() const {
    json j;
    j["name"] = name;
    j["status"] = pass() ? "pass" : "fail";
    j["samples"] = samples;
    json ms = json::array();
    for (const auto& m : metrics) {
      json e;
      e["name"] = m.name;
      e["value"] = m.value;
      if (m.gated) {
        e["tolerance"] = m.tolerance;
        e["status"] = m.pass() ? "pass" : "fail";
      } else {
        e["status"] = "reported";
      }
      ms.push_back(std::move(e));
    }
    j["metrics"] = std::move(ms);
    return j;
  }
};

namespace detail {

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Per-point maxima written in index order so the reduction is deterministic.
template <class F>
std::vector<double> per_point(std::size_t n, unsigned threads, F&& f) {
  std::vector<double> out(n, 0.0);
  parallel_for(n, threads, [&](std::size_t k) { out[k] = f(k); });
  return out;
}

inline double maximum(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

inline double frob(const Mat3& m) { return m.norm(); }

}  // namespace detail

/// Tolerances of every suite.
struct Thresholds {
  double partition = 1e-10;
  double linear_precision = 1e-8;  // relative to the bbox diagonal
  double dual_formula = 1e-10;
  double quadrature = 1e-5;
  double quadrature_tolerance = 1e-6;
  double gradient_fd = 1e-5;
  double hessian_fd = 1e-4;
  double symmetry = 1e-8;
  double identity = 1e-10;
  double affine_value = 1e-8;    // relative to the bbox diagonal
  double affine_jacobian = 1e-8;
  double affine_hessian = 1e-6;  // times the bbox diagonal
  double planar_limit = 1e-4;
  double planar_normal_fd = 1e-5;
  double planar_normal_hessian = 1e-4;
  double planar_full_hessian = 1e-3;
  double kernel_seam = 1e-9;
  double kernel_identity = 1e-12;
  double solver_affine = 1e-7;   // relative to the bbox diagonal
  double solver_exact = 1e-8;
  double gradient_step = 1e-5;   // FD steps in units of the bbox diagonal
  double hessian_step = 1e-4;
  double normal_step = 1e-3;     // 1-D differences across a support plane, with Richardson
};

struct Context {
  const CageMesh& cage;
  Tolerances tol;
  Thresholds th;
  unsigned threads = 1;
};

inline SuiteReport partition_of_unity(const Context& ctx, const std::vector<Vec3>& pts) {
  const double diag = ctx.cage.bbox_diagonal();
  std::vector<double> pu(pts.size()), lp(pts.size()), bad(pts.size());
  parallel_for(pts.size(), ctx.threads, [&](std::size_t k) {
    try {
      const WeightVector wv = mvc_coordinates(ctx.cage, pts[k], ctx.tol);
      double s = 0.0;
      Vec3 r = -pts[k];
      for (std::size_t i = 0; i < wv.lambda.size(); ++i) {
        s += wv.lambda[i];
        r += wv.lambda[i] * ctx.cage.vertices()[i];
      }
      pu[k] = std::abs(s - 1.0);
      lp[k] = r.norm() / diag;
    } catch (const Error&) {
      bad[k] = 1.0;
    }
  });
  double nbad = 0.0;
  for (double b : bad) nbad += b;
  return {"partition_of_unity",
          pts.size(),
          {{"max_partition_defect", detail::maximum(pu), ctx.th.partition},
           {"max_linear_precision_defect_over_diag", detail::maximum(lp), ctx.th.linear_precision},
           {"evaluation_failures", nbad, 0.0}}};
}

inline double relative_lambda_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
  return gap / std::max(detail::max_abs(a), 1e-300);
}

inline SuiteReport dual_formula(const Context& ctx, const std::vector<Vec3>& pts, std::size_t quadrature_points) {
  const auto ju = detail::per_point(pts.size(), ctx.threads, [&](std::size_t k) {
    return relative_lambda_gap(mvc_coordinates(ctx.cage, pts[k], ctx.tol).lambda,
                               ju_robust_weights(ctx.cage, pts[k]).lambda);
  });
  const std::size_t nq = std::min(quadrature_points, pts.size());
  std::vector<double> unconverged(nq, 0.0);
  const QuadratureSpec qs{2, ctx.th.quadrature_tolerance, 16};
  const auto quad = detail::per_point(nq, ctx.threads, [&](std::size_t k) {
    const QuadratureWeights q = quadrature_weights(ctx.cage, pts[k], qs);
    unconverged[k] = q.converged ? 0.0 : 1.0;
    return relative_lambda_gap(mvc_coordinates(ctx.cage, pts[k], ctx.tol).lambda, q.lambda);
  });
  double nun = 0.0;
  for (double u : unconverged) nun += u;
  return {"dual_formula",
          pts.size(),
          {{"max_spherical_excess_gap", detail::maximum(ju), ctx.th.dual_formula},
           {"max_quadrature_gap", detail::maximum(quad), ctx.th.quadrature},
           {"quadrature_points", static_cast<double>(nq), 0.0, false},
           {"quadrature_unconverged", nun, 0.0, false}}};
}

inline SuiteReport gradient_fd(const Context& ctx, const std::vector<Vec3>& pts) {
  const FDSpec spec{ctx.th.gradient_step, ctx.cage.bbox_diagonal(), false};
  std::vector<double> indicator(pts.size());
  const auto err = detail::per_point(pts.size(), ctx.threads, [&](std::size_t k) {
    const DerivativeSet ds = derivative_set(ctx.cage, pts[k], ctx.tol, 1);
    auto lam = [&](const Vec3& p) -> Eigen::VectorXd {
      const auto l = mvc_coordinates(ctx.cage, p, ctx.tol).lambda;
      return Eigen::Map<const Eigen::VectorXd>(l.data(), static_cast<Eigen::Index>(l.size()));
    };
    const auto fd = fd_jacobian(lam, pts[k], spec);
    double gap = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < ds.grad_lambda.size(); ++i) {
      const Eigen::Index r = static_cast<Eigen::Index>(i);
      gap = std::max(gap, (fd.estimate.row(r).transpose() - ds.grad_lambda[i]).norm());
      scale = std::max(scale, ds.grad_lambda[i].norm());
    }
    indicator[k] = fd.error_indicator.maxCoeff() / scale;
    return gap / scale;
  });
  return {"gradient_fd",
          pts.size(),
          {{"max_relative_error", detail::maximum(err), ctx.th.gradient_fd},
           {"max_step_halving_indicator", detail::maximum(indicator), 0.0, false}}};
}

inline SuiteReport hessian_fd(const Context& ctx, const std::vector<Vec3>& pts) {
  const FDSpec spec{ctx.th.hessian_step, ctx.cage.bbox_diagonal(), false};
  const std::size_t nv = ctx.cage.vertex_count();
  std::vector<double> sym(pts.size());
  const auto err = detail::per_point(pts.size(), ctx.threads, [&](std::size_t k) {
    const DerivativeSet ds = derivative_set(ctx.cage, pts[k], ctx.tol, 2);
    auto grads = [&](const Vec3& p) -> Eigen::VectorXd {
      const DerivativeSet d = derivative_set(ctx.cage, p, ctx.tol, 1);
      Eigen::VectorXd g(3 * static_cast<Eigen::Index>(nv));
      for (std::size_t i = 0; i < nv; ++i) g.segment<3>(3 * static_cast<Eigen::Index>(i)) = d.grad_lambda[i];
      return g;
    };
    const auto fd = fd_jacobian(grads, pts[k], spec);
    double gap = 0.0, scale = 0.0, asym = 0.0;
    for (std::size_t i = 0; i < nv; ++i) {
      const Mat3 H = fd.estimate.middleRows<3>(3 * static_cast<Eigen::Index>(i));
      gap = std::max(gap, (H - ds.hess_lambda[i]).norm());
      scale = std::max(scale, ds.hess_lambda[i].norm());
      asym = std::max(asym, (ds.hess_lambda[i] - ds.hess_lambda[i].transpose()).norm());
    }
    sym[k] = asym / scale;
    return gap / scale;
  });
  return {"hessian_fd",
          pts.size(),
          {{"max_relative_error", detail::maximum(err), ctx.th.hessian_fd},
           {"max_symmetry_defect", detail::maximum(sym), ctx.th.symmetry}}};
}

inline SuiteReport identity_sums(const Context& ctx, const std::vector<Vec3>& pts) {
  std::vector<double> hs(pts.size());
  const auto gs = detail::per_point(pts.size(), ctx.threads, [&](std::size_t k) {
    const DerivativeSet ds = derivative_set(ctx.cage, pts[k], ctx.tol, 2);
    Vec3 g = Vec3::Zero();
    Mat3 h = Mat3::Zero();
    double gmax = 0.0, hmax = 0.0;
    for (std::size_t i = 0; i < ds.lambda.size(); ++i) {
      g += ds.grad_lambda[i];
      h += ds.hess_lambda[i];
      gmax = std::max(gmax, ds.grad_lambda[i].norm());
      hmax = std::max(hmax, ds.hess_lambda[i].norm());
    }
    hs[k] = h.norm() / hmax;
    return g.norm() / gmax;
  });
  return {"identity_sums",
          pts.size(),
          {{"max_gradient_sum", detail::maximum(gs), ctx.th.identity},
           {"max_hessian_sum", detail::maximum(hs), ctx.th.identity}}};
}

inline SuiteReport affine_reproduction(const Context& ctx, const std::vector<Vec3>& pts, Rng& rng) {
  const double diag = ctx.cage.bbox_diagonal();
  Mat3 A;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) A(r, c) = (r == c ? 1.0 : 0.0) + rng.uniform(-0.5, 0.5);
  const Vec3 b = rng.in_box(Vec3::Constant(-diag), Vec3::Constant(diag));
  DeformedCage def;
  for (const Vec3& p : ctx.cage.vertices()) def.positions.push_back(A * p + b);
  std::vector<double> jac(pts.size()), hes(pts.size());
  const auto val = detail::per_point(pts.size(), ctx.threads, [&](std::size_t k) {
    const DeformationSample s = deformation_sample(ctx.cage, def, pts[k], ctx.tol);
    jac[k] = (s.jacobian - A).norm();
    hes[k] = std::max({s.hess[0].norm(), s.hess[1].norm(), s.hess[2].norm()}) * diag;
    return (s.value - (A * pts[k] + b)).norm() / diag;
  });
  return {"affine_reproduction",
          pts.size(),
          {{"max_value_error_over_diag", detail::maximum(val), ctx.th.affine_value},
           {"max_jacobian_error", detail::maximum(jac), ctx.th.affine_jacobian},
           {"max_hessian_norm_times_diag", detail::maximum(hes), ctx.th.affine_hessian}}};
}

/// Planar-route derivatives at a coplanar point, but with the rank-one
/// grad(dw) n^T Hessian for every triangle in whose plane the point lies.
inline DerivativeSet derivative_set_rank_one(const CageMesh& cage, const Vec3& eta, const Tolerances& tol) {
  DerivativeSet ds = derivative_set(cage, eta, tol, 2);
  for (std::size_t t = 0; t < cage.triangle_count(); ++t) {
    const TriangleFrame f = build_triangle_frame(cage, t, eta, tol);
    if (f.classification != FrameClass::OnSupportPlaneOutsideT) continue;
    const auto full = triangle_hessians_planar_full(f, tol);
    const auto r1 = triangle_hessians_planar(f, tol);
    for (int j = 0; j < 3; ++j) ds.hess_w[cage.triangles()[t][static_cast<std::size_t>(j)]] += r1[j] - full[j];
  }
  apply_quotient_rule(ds);
  return ds;
}

inline SuiteReport planar_cases(const Context& ctx, const std::vector<PlanarConfiguration>& configs) {
  const double diag = ctx.cage.bbox_diagonal();
  const std::size_t nv = ctx.cage.vertex_count();
  const std::size_t n = configs.size();
  std::vector<double> limit(n), normal_fd(n), nn_fd(n), full(n), rank_one(n), order(n);
  parallel_for(n, ctx.threads, [&](std::size_t k) {
    const auto& cfg = configs[k];
    const Vec3 eta = cfg.point;
    const TriangleFrame f = build_triangle_frame(ctx.cage, cfg.triangle, eta, ctx.tol);
    const Vec3 nT = ctx.cage.normal(cfg.triangle);

    // Triangle level: planar gradients against the general formula at
    // eta +- delta n_T; the symmetric mean is even in delta, so one
    // Richardson step removes the delta^2 term.
    const auto gp = triangle_gradients_planar(f, ctx.tol);
    const double L = f.mean_edge;
    auto mean_at = [&](double delta) {
      std::array<Vec3, 3> g;
      for (int s : {1, -1}) {
        const TriangleFrame fs = build_triangle_frame(ctx.cage, cfg.triangle, eta + s * delta * nT, ctx.tol);
        const auto gs = triangle_gradients(fs, triangle_weights(fs), ctx.tol);
        for (int j = 0; j < 3; ++j) g[j] = (s == 1 ? Vec3::Zero() : g[j]) + 0.5 * gs[j];
      }
      return g;
    };
    const auto g1 = mean_at(1e-2 * L), g2 = mean_at(5e-3 * L);
    double gap = 0.0, gap1 = 0.0, gap2 = 0.0, scale = 0.0;
    for (int j = 0; j < 3; ++j) {
      const Vec3 extrap = (4.0 * g2[j] - g1[j]) / 3.0;
      gap = std::max(gap, (extrap - gp[j]).norm());
      gap1 = std::max(gap1, (g1[j] - gp[j]).norm());
      gap2 = std::max(gap2, (g2[j] - gp[j]).norm());
      scale = std::max(scale, gp[j].norm());
    }
    limit[k] = gap / scale;
    order[k] = std::log2(gap1 / std::max(gap2, 1e-300));

    // Aggregated coordinates: normal derivatives against 1-D differences.
    const DerivativeSet ds = derivative_set(ctx.cage, eta, ctx.tol, 2);
    double gmax = 0.0, hmax = 0.0;
    for (std::size_t i = 0; i < nv; ++i) {
      gmax = std::max(gmax, ds.grad_lambda[i].norm());
      hmax = std::max(hmax, ds.hess_lambda[i].norm());
    }
    // The stencil points sit off the plane where the general quotient loses
    // about eps d^2 / (|T| h); a wider Richardson stencil keeps that below
    // the truncation error.
    const FDSpec nspec{ctx.th.normal_step, diag, true};
    const FDSpec hspec{ctx.th.hessian_step, diag, false};
    double e1 = 0.0, e2 = 0.0;
    for (std::size_t i = 0; i < nv; ++i) {
      auto li = [&](const Vec3& p) { return mvc_coordinates(ctx.cage, p, ctx.tol).lambda[i]; };
      const Eigen::Vector2d d = fd_directional(li, eta, nT, nspec).estimate;
      const double d1 = d[0], d2 = d[1];
      e1 = std::max(e1, std::abs(d1 - ds.grad_lambda[i].dot(nT)));
      e2 = std::max(e2, std::abs(d2 - nT.dot(ds.hess_lambda[i] * nT)));
    }
    normal_fd[k] = e1 / gmax;
    nn_fd[k] = e2 / hmax;

    // Full Hessians against differences of the analytic gradient.
    auto grads = [&](const Vec3& p) -> Eigen::VectorXd {
      const DerivativeSet d = derivative_set(ctx.cage, p, ctx.tol, 1);
      Eigen::VectorXd g(3 * static_cast<Eigen::Index>(nv));
      for (std::size_t i = 0; i < nv; ++i) g.segment<3>(3 * static_cast<Eigen::Index>(i)) = d.grad_lambda[i];
      return g;
    };
    const auto fd = fd_jacobian(grads, eta, hspec);
    const DerivativeSet r1 = derivative_set_rank_one(ctx.cage, eta, ctx.tol);
    double ef = 0.0, er = 0.0;
    for (std::size_t i = 0; i < nv; ++i) {
      const Mat3 H = fd.estimate.middleRows<3>(3 * static_cast<Eigen::Index>(i));
      ef = std::max(ef, (H - ds.hess_lambda[i]).norm());
      er = std::max(er, (H - r1.hess_lambda[i]).norm());
    }
    full[k] = ef / hmax;
    rank_one[k] = er / hmax;
  });
  double min_order = n ? order[0] : 0.0;
  for (double o : order) min_order = std::min(min_order, o);
  return {"planar_cases",
          n,
          {{"max_limit_gap", detail::maximum(limit), ctx.th.planar_limit},
           {"min_observed_order", min_order, 0.0, false},
           {"max_normal_fd_gap", detail::maximum(normal_fd), ctx.th.planar_normal_fd},
           {"max_normal_normal_hessian_gap", detail::maximum(nn_fd), ctx.th.planar_normal_hessian},
           {"max_full_hessian_gap", detail::maximum(full), ctx.th.planar_full_hessian},
           {"max_full_hessian_gap_rank_one_form", detail::maximum(rank_one), 0.0, false}}};
}

inline SuiteReport kernel_consistency(const Context& ctx) {
  // Both branches evaluated at the same arguments around the seam.
  const double seam = ctx.tol.eps_theta;
  Tolerances closed = ctx.tol, series = ctx.tol;
  closed.eps_theta = 0.0;
  series.eps_theta = 4.0;
  double jump = 0.0;
  for (KernelId id : kAllKernels) {
    for (double th : {seam * (1.0 - 1e-6), seam, seam * (1.0 + 1e-6)}) {
      const double a = eval_kernel(id, th, closed), b = eval_kernel(id, th, series);
      jump = std::max(jump, std::abs(a - b) / std::max(1.0, std::abs(a)));
    }
  }
  double ident = 0.0;
  for (int k = 0; k <= 400; ++k) {
    const double th = 1e-8 * std::pow(10.0, 8.0 * k / 400.0);
    if (th >= 3.1) break;
    const double s = std::sin(th), c = std::cos(th);
    const double e6 = eval_kernel(KernelId::eq6, th, ctx.tol), e7 = eval_kernel(KernelId::eq7, th, ctx.tol);
    const double e8 = eval_kernel(KernelId::eq8, th, ctx.tol), e9 = eval_kernel(KernelId::eq9, th, ctx.tol);
    ident = std::max(ident, std::abs(e7 * c - e6 * s * s) / std::max(std::abs(e7), 1e-300));
    ident = std::max(ident, std::abs(e9 * c - e8 * s * s) / std::max(std::abs(e9), 1e-300));
  }
  return {"kernels",
          kAllKernels.size(),
          {{"max_seam_jump", jump, ctx.th.kernel_seam}, {"max_identity_defect", ident, ctx.th.kernel_identity}}};
}

inline SuiteReport solver_recovery(const Context& ctx, Rng& rng) {
  const CageMesh& cage = ctx.cage;
  const double diag = cage.bbox_diagonal();
  // Each sample contributes six independent Hessian rows per coordinate;
  // refine until the rigidity rows can pin every non-affine mode.
  std::vector<Vec3> interior;
  for (int n = 4; n <= 16 && interior.size() < std::max<std::size_t>(8, cage.vertex_count() / 2); ++n) {
    interior = rigidity_grid(cage, n);
  }
  const std::vector<Vec3> anchors = sample_points(cage, 8, rng, 0.05, 0.0);
  const std::vector<Vec3> held_out = sample_points(cage, 50, rng, 0.05, 0.0);

  auto rotation = [&] {
    const Vec3 axis = rng.unit_vector();
    return Eigen::AngleAxisd(rng.uniform(0.2, 1.2), axis).toRotationMatrix();
  };
  auto value_constraints = [&](const std::vector<Vec3>& at, const auto& field) {
    std::vector<Constraint> cs;
    for (const Vec3& p : at) cs.push_back({p, field(p), std::nullopt, 1.0});
    return cs;
  };

  // Affine recovery, measured on held-out points.
  Mat3 A;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) A(r, c) = (r == c ? 1.0 : 0.0) + rng.uniform(-0.3, 0.3);
  const Vec3 b = rng.in_box(Vec3::Constant(-0.2 * diag), Vec3::Constant(0.2 * diag));
  auto affine = [&](const Vec3& p) -> Vec3 { return A * p + b; };
  const auto sys = assemble_system(cage, value_constraints(anchors, affine), {interior, 1.0}, ctx.tol, ctx.threads);
  const SolveResult sol = solve(sys);
  double held = 0.0;
  for (const Vec3& p : held_out) held = std::max(held, (deform_point(cage, sol.cage, p, ctx.tol) - affine(p)).norm());

  // Exact cases: identity, translation, rotation. The normwise backward
  // error of the system and the distance to the expected cage over the
  // diagonal are both held to the exact tolerance.
  const Vec3 centre = 0.5 * (cage.bbox_min() + cage.bbox_max());
  const Vec3 eta0 = anchors.front();
  const Vec3 v = rng.in_box(Vec3::Constant(-0.3 * diag), Vec3::Constant(0.3 * diag));
  const Mat3 R = rotation();
  double exact = 0.0, absolute = 0.0;
  auto expect = [&](const LinearSystem& s, const auto& field) {
    const SolveResult r = solve(s);
    exact = std::max(exact, r.relative_residual);
    absolute = std::max(absolute, r.residual);
    for (std::size_t i = 0; i < cage.vertex_count(); ++i) {
      exact = std::max(exact, (r.cage.positions[i] - field(cage.vertices()[i])).norm() / diag);
    }
  };
  auto ident = [](const Vec3& p) -> Vec3 { return p; };
  auto shift = [&](const Vec3& p) -> Vec3 { return p + v; };
  auto rot = [&](const Vec3& p) -> Vec3 { return R * (p - centre) + centre; };
  expect(assemble_system(cage, value_constraints({eta0}, ident), {interior, 1.0}, ctx.tol, ctx.threads), ident);
  expect(assemble_system(cage, value_constraints({eta0}, shift), {interior, 1.0}, ctx.tol, ctx.threads), shift);
  expect(assemble_system(cage, value_constraints({anchors.begin(), anchors.begin() + 4}, rot), {interior, 1.0},
                         ctx.tol, ctx.threads),
         rot);

  return {"solver",
          anchors.size() + held_out.size(),
          {{"max_affine_recovery_error_over_diag", held / diag, ctx.th.solver_affine},
           {"max_exact_case_error", exact, ctx.th.solver_exact},
           {"max_exact_case_absolute_residual", absolute, 0.0, false},
           {"affine_system_rank", static_cast<double>(sol.rank), 0.0, false}}};
}

struct ValidationConfig {
  std::size_t samples = 1000;
  std::uint64_t seed = 42;
  std::size_t fd_samples = 200;
  std::size_t quadrature_samples = 50;
  std::size_t planar_samples = 20;
  double band = 0.02;     // surface exclusion for weight suites
  double fd_band = 0.05;  // surface exclusion for derivative suites
  unsigned threads = 1;
  Tolerances tol;
  Thresholds th;
};

struct ValidationReport {
  std::vector<SuiteReport> suites;

  const SuiteReport& suite(const std::string& n) const {
    for (const auto& r : suites)
      if (r.name == n) return r;
    throw Error(ErrorCode::InvalidInput, "no suite " + n);
  }

  bool pass() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteReport& s) { return s.pass(); });
  }
};

/// Runs every suite on one cage. Each suite draws from its own seeded stream
/// so results do not depend on which suites run or in which order.
inline ValidationReport run_validation(const CageMesh& cage, const ValidationConfig& cfg) {
  const Context ctx{cage, cfg.tol, cfg.th, cfg.threads};
  auto stream = [&](std::uint64_t k) { return Rng(cfg.seed * 0x9E3779B97F4A7C15ull + k); };
  ValidationReport rep;
  Rng r1 = stream(1), r2 = stream(2), r3 = stream(3), r4 = stream(4), r5 = stream(5);
  const auto pts = sample_points(cage, cfg.samples, r1, cfg.band);
  const auto fd_pts = sample_points(cage, std::min(cfg.samples, cfg.fd_samples), r2, cfg.fd_band);
  const auto planar = planar_configurations(cage, cfg.planar_samples, r3);
  auto timed = [&](auto&& run) {
    const auto t0 = std::chrono::steady_clock::now();
    SuiteReport r = run();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.suites.push_back(std::move(r));
  };
  timed([&] { return kernel_consistency(ctx); });
  timed([&] { return partition_of_unity(ctx, pts); });
  timed([&] { return dual_formula(ctx, pts, cfg.quadrature_samples); });
  timed([&] { return gradient_fd(ctx, fd_pts); });
  timed([&] { return hessian_fd(ctx, fd_pts); });
  timed([&] { return identity_sums(ctx, fd_pts); });
  timed([&] { return affine_reproduction(ctx, fd_pts, r4); });
  timed([&] { return planar_cases(ctx, planar); });
  timed([&] { return solver_recovery(ctx, r5); });
  return rep;
}

inline json report_json(const CageMesh& cage, const ValidationConfig& cfg, const ValidationReport& rep) {
  json j;
  j["status"] = rep.pass() ? "pass" : "fail";
  json c;
  c["vertices"] = cage.vertex_count();
  c["triangles"] = cage.triangle_count();
  c["bbox_diagonal"] = cage.bbox_diagonal();
  c["orientation_flipped"] = cage.orientation_flipped();
  j["cage"] = std::move(c);
  json k;
  k["samples"] = cfg.samples;
  k["seed"] = cfg.seed;
  k["eps_plane"] = cfg.tol.eps_plane;
  k["eps_theta"] = cfg.tol.eps_theta;
  k["eps_switch"] = cfg.tol.eps_switch;
  k["eps_offset"] = cfg.tol.eps_offset;
  k["fd_h_gradient"] = cfg.th.gradient_step;
  k["fd_h_hessian"] = cfg.th.hessian_step;
  k["fd_h_normal"] = cfg.th.normal_step;
  j["config"] = std::move(k);
  json s = json::array();
  for (const auto& suite : rep.suites) s.push_back(suite.to_json());
  j["suites"] = std::move(s);
  return j;
}

}  // namespace mvc::validation
