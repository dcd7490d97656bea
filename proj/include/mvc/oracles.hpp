#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "mvc/cage_mesh.hpp"
#include "mvc/weights.hpp"

namespace mvc {

// Independent references for the closed-form code: direct quadrature of the
// per-triangle weight integral, the spherical-excess formulation of mean value
// weights, and central finite differences.

// ---------------------------------------------------------------------------
// Quadrature

struct QuadratureSpec {
  int depth = 1;            // initial uniform refinement level
  double tolerance = 1e-6;  // target relative accuracy
  int max_depth = 14;
};

struct QuadratureResult {
  std::array<double, 3> value{};  // one integral per corner of T
  double error = 0.0;             // estimated absolute error of the sum
  bool converged = true;
};

namespace detail {

struct QuadTri {
  Vec3 a, b, c;     // sub-triangle corners in space
  Vec3 ba, bb, bc;  // and their barycentric coordinates in T
};

/// Centroid rule on one sub-triangle for phi_i (p - eta).n / |p - eta|^4.
inline Vec3 centroid_rule(const QuadTri& s, const Vec3& eta, const Vec3& n) {
  const Vec3 p = (s.a + s.b + s.c) / 3.0;
  const Vec3 phi = (s.ba + s.bb + s.bc) / 3.0;
  const Vec3 r = p - eta;
  const double r2 = r.squaredNorm();
  const double area = 0.5 * (s.b - s.a).cross(s.c - s.a).norm();
  return phi * (area * r.dot(n) / (r2 * r2));
}

inline std::array<QuadTri, 4> split(const QuadTri& s) {
  const Vec3 ab = 0.5 * (s.a + s.b), bc = 0.5 * (s.b + s.c), ca = 0.5 * (s.c + s.a);
  const Vec3 bab = 0.5 * (s.ba + s.bb), bbc = 0.5 * (s.bb + s.bc), bca = 0.5 * (s.bc + s.ba);
  return {QuadTri{s.a, ab, ca, s.ba, bab, bca}, QuadTri{ab, s.b, bc, bab, s.bb, bbc},
          QuadTri{ca, bc, s.c, bca, bbc, s.bc}, QuadTri{ab, bc, ca, bab, bbc, bca}};
}

inline void uniform_tris(const QuadTri& s, int level, std::vector<QuadTri>& out) {
  if (level == 0) {
    out.push_back(s);
    return;
  }
  for (const auto& c : split(s)) uniform_tris(c, level - 1, out);
}

struct AdaptiveState {
  Vec3 eta, n;
  double abs_tol;  // per unit area
  int max_depth;
  double error = 0.0;
  bool converged = true;
};

/// Richardson-corrected centroid rule on one node: the four children's
/// centroid sum extrapolated against the node's own centroid value.
inline Vec3 corrected(const QuadTri& s, const Vec3& coarse, const Vec3& eta, const Vec3& n,
                      std::array<Vec3, 4>* kid_values = nullptr) {
  const auto kids = split(s);
  Vec3 fine = Vec3::Zero();
  for (int k = 0; k < 4; ++k) {
    const Vec3 v = centroid_rule(kids[k], eta, n);
    if (kid_values) (*kid_values)[k] = v;
    fine += v;
  }
  return fine + (fine - coarse) / 3.0;
}

/// Accepts a node when the corrected values on the node and on its four
/// children agree; the gap over 15 estimates the error of the children's
/// value (fourth-order remainder).
inline Vec3 adapt(const QuadTri& s, const Vec3& coarse, double area, int depth, AdaptiveState& st) {
  std::array<Vec3, 4> kc;
  const Vec3 parent = corrected(s, coarse, st.eta, st.n, &kc);
  const auto kids = split(s);
  Vec3 child_sum = Vec3::Zero();
  for (int k = 0; k < 4; ++k) child_sum += corrected(kids[k], kc[k], st.eta, st.n);
  const double est = (child_sum - parent).cwiseAbs().sum() / 15.0;
  if (est <= st.abs_tol * area || depth >= st.max_depth) {
    st.error += est;
    if (est > st.abs_tol * area) st.converged = false;
    return child_sum;
  }
  Vec3 sum = Vec3::Zero();
  for (int k = 0; k < 4; ++k) sum += adapt(kids[k], kc[k], 0.25 * area, depth + 1, st);
  return sum;
}

}  // namespace detail

/// Centroid rule on the level-`level` uniform refinement of (a, b, c); the
/// three entries integrate phi_0, phi_1, phi_2.
inline Vec3 triangle_quadrature_uniform(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& eta,
                                        int level) {
  const Vec3 n = (b - a).cross(c - a).normalized();
  std::vector<detail::QuadTri> tris;
  detail::uniform_tris({a, b, c, Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()}, level, tris);
  Vec3 sum = Vec3::Zero();
  for (const auto& s : tris) sum += detail::centroid_rule(s, eta, n);
  return sum;
}

/// Adaptive integration of phi_i (p - eta).n_T / |p - eta|^4 over T, i.e. the
/// per-triangle mean value weights of the three corners.
inline QuadratureResult triangle_quadrature(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& eta,
                                            const QuadratureSpec& spec = {}) {
  if (spec.depth < 1 || !(spec.tolerance > 0.0) || spec.max_depth < spec.depth) {
    throw Error(ErrorCode::InvalidInput, "invalid quadrature spec");
  }
  const Vec3 n = (b - a).cross(c - a).normalized();
  if (std::abs((eta - a).dot(n)) <= 1e-12 * (b - a).norm()) {
    throw Error(ErrorCode::InvalidInput, "quadrature point lies on the support plane");
  }
  std::vector<detail::QuadTri> tris;
  detail::uniform_tris({a, b, c, Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()}, spec.depth - 1, tris);
  std::vector<Vec3> coarse(tris.size());
  Vec3 guess = Vec3::Zero();
  for (std::size_t k = 0; k < tris.size(); ++k) {
    coarse[k] = detail::centroid_rule(tris[k], eta, n);
    guess += coarse[k];
  }
  // The integrand has one sign on T, so the coarse sum sets the scale.
  const double total_area = 0.5 * (b - a).cross(c - a).norm();
  detail::AdaptiveState st{eta, n, spec.tolerance * guess.cwiseAbs().sum() / total_area, spec.max_depth};
  const double sub_area = total_area / static_cast<double>(tris.size());
  Vec3 sum = Vec3::Zero();
  for (std::size_t k = 0; k < tris.size(); ++k) sum += detail::adapt(tris[k], coarse[k], sub_area, spec.depth, st);
  QuadratureResult out;
  out.value = {sum[0], sum[1], sum[2]};
  out.error = st.error;
  out.converged = st.converged;
  return out;
}

/// Quadrature of the weight of corner i (0..2) of triangle t.
inline QuadratureResult quadrature_weight(const CageMesh& cage, std::size_t t, const Vec3& eta,
                                          const QuadratureSpec& spec = {}) {
  return triangle_quadrature(cage.corner(t, 0), cage.corner(t, 1), cage.corner(t, 2), eta, spec);
}

/// Per-vertex weights by quadrature over every triangle; `converged` is the
/// conjunction over triangles.
struct QuadratureWeights {
  std::vector<double> w;
  std::vector<double> lambda;
  double error = 0.0;
  bool converged = true;
};

inline QuadratureWeights quadrature_weights(const CageMesh& cage, const Vec3& eta,
                                            const QuadratureSpec& spec = {}) {
  QuadratureWeights out;
  out.w.assign(cage.vertex_count(), 0.0);
  for (std::size_t t = 0; t < cage.triangle_count(); ++t) {
    const QuadratureResult r = quadrature_weight(cage, t, eta, spec);
    for (int j = 0; j < 3; ++j) out.w[cage.triangles()[t][static_cast<std::size_t>(j)]] += r.value[j];
    out.error += r.error;
    out.converged = out.converged && r.converged;
  }
  double sum = 0.0;
  for (double v : out.w) sum += v;
  out.lambda.resize(out.w.size());
  for (std::size_t i = 0; i < out.w.size(); ++i) out.lambda[i] = out.w[i] / sum;
  return out;
}

// ---------------------------------------------------------------------------
// Spherical-excess formulation (unit vectors, half perimeter, per-corner
// trigonometric weights). Weights differ from mvc_coordinates by a global
// factor; compare lambda. Near a support plane the per-corner numerator
// cancels to O(s^2), so the oracle runs in extended precision.

inline WeightVector ju_robust_weights(const CageMesh& cage, const Vec3& eta, double eps = 1e-10) {
  using R = long double;
  using V = Eigen::Matrix<R, 3, 1>;
  if (!eta.allFinite()) throw Error(ErrorCode::InvalidInput, "non-finite query point");
  const std::size_t nv = cage.vertex_count();
  std::vector<R> d(nv);
  std::vector<V> u(nv);
  const R floor = eps * cage.bbox_diagonal();
  for (std::size_t i = 0; i < nv; ++i) {
    const V r = cage.vertices()[i].cast<R>() - eta.cast<R>();
    d[i] = r.norm();
    if (d[i] < floor) return detail::vertex_indicator(cage, i);
    u[i] = r / d[i];
  }

  std::vector<R> w(nv, 0.0L);
  for (std::size_t t = 0; t < cage.triangle_count(); ++t) {
    const auto& tri = cage.triangles()[t];
    std::array<R, 3> th{}, c{}, s{};
    R h = 0.0L;
    for (int k = 0; k < 3; ++k) {
      const R l = (u[tri[(k + 1) % 3]] - u[tri[(k + 2) % 3]]).norm();
      th[k] = 2.0L * std::asin(std::min(R(1), l / 2.0L));
      h += th[k] / 2.0L;
    }
    if (std::numbers::pi_v<R> - h < eps) {
      // eta lies on t: planar barycentric coordinates
      WeightVector sw;
      sw.lambda.assign(nv, 0.0);
      Vec3 b;
      for (int k = 0; k < 3; ++k)
        b[k] = static_cast<double>(std::sin(th[k]) * d[tri[(k + 1) % 3]] * d[tri[(k + 2) % 3]]);
      b /= b.sum();
      for (int k = 0; k < 3; ++k) sw.lambda[tri[static_cast<std::size_t>(k)]] += b[k];
      sw.sum_w = 1.0;
      sw.on_surface = true;
      sw.surface_location = SurfaceLocation{t, b};
      return sw;
    }
    // Signed sine of the dihedral angle from the spherical law of sines.
    const R vol = u[tri[0]].dot(u[tri[1]].cross(u[tri[2]]));
    bool coplanar = false;
    for (int k = 0; k < 3; ++k) {
      const R sp = std::sin(th[(k + 1) % 3]), sm = std::sin(th[(k + 2) % 3]);
      c[k] = 2.0L * std::sin(h) * std::sin(h - th[k]) / (sp * sm) - 1.0L;
      s[k] = vol / (sp * sm);
      if (std::abs(s[k]) <= eps) coplanar = true;
    }
    if (coplanar) continue;  // eta on the support plane outside t
    for (int k = 0; k < 3; ++k) {
      const int kp = (k + 1) % 3, km = (k + 2) % 3;
      w[tri[static_cast<std::size_t>(k)]] += (th[k] - c[kp] * th[km] - c[km] * th[kp]) /
                                             (d[tri[static_cast<std::size_t>(k)]] * std::sin(th[kp]) * s[km]);
    }
  }
  R sum = 0.0L;
  for (R v : w) sum += v;
  WeightVector out;
  out.w.resize(nv);
  out.lambda.resize(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    out.w[i] = static_cast<double>(w[i]);
    out.lambda[i] = static_cast<double>(w[i] / sum);
  }
  out.sum_w = static_cast<double>(sum);
  return out;
}

// ---------------------------------------------------------------------------
// Finite differences

struct FDSpec {
  double h = 1e-5;      // step, in units of `scale`
  double scale = 1.0;   // length unit, typically the cage bbox diagonal
  bool richardson = false;

  double step() const { return h * scale; }
};

template <class T>
struct FDResult {
  T estimate;
  T error_indicator;  // |D(h) - D(h/2)| entrywise
};

namespace detail {

inline void check_fd(const FDSpec& spec) {
  if (!(spec.h > 0.0) || !(spec.h < 1e-2) || !(spec.scale > 0.0)) {
    throw Error(ErrorCode::InvalidInput, "finite-difference step must satisfy 0 < h < 1e-2");
  }
}

template <class F>
auto guarded(F&& f, const Vec3& x, std::size_t stencil_index) {
  try {
    return f(x);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::EvaluatorFailed,
                "evaluator failed at stencil point " + std::to_string(stencil_index) + ": " + e.what(),
                stencil_index);
  }
}

/// Central-difference Jacobian with step h; columns are partials.
inline Eigen::MatrixXd central_jacobian(const std::function<Eigen::VectorXd(const Vec3&)>& f, const Vec3& x,
                                        double h) {
  Eigen::MatrixXd J;
  for (int c = 0; c < 3; ++c) {
    const Vec3 e = h * Vec3::Unit(c);
    const Eigen::VectorXd fp = guarded(f, x + e, static_cast<std::size_t>(2 * c));
    const Eigen::VectorXd fm = guarded(f, x - e, static_cast<std::size_t>(2 * c + 1));
    if (c == 0) J.resize(fp.size(), 3);
    J.col(c) = (fp - fm) / (2.0 * h);
  }
  return J;
}

inline Mat3 central_hessian(const std::function<double(const Vec3&)>& f, const Vec3& x, double h) {
  // 6 axial points for the diagonal, 12 diagonal-direction points for the
  // mixed partials, plus the centre.
  const double f0 = guarded(f, x, 18);
  Mat3 H;
  std::size_t k = 0;
  for (int a = 0; a < 3; ++a) {
    const Vec3 ea = h * Vec3::Unit(a);
    const double fp = guarded(f, x + ea, k++);
    const double fm = guarded(f, x - ea, k++);
    H(a, a) = (fp - 2.0 * f0 + fm) / (h * h);
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      const Vec3 ea = h * Vec3::Unit(a), eb = h * Vec3::Unit(b);
      const double fpp = guarded(f, x + ea + eb, k++);
      const double fpm = guarded(f, x + ea - eb, k++);
      const double fmp = guarded(f, x - ea + eb, k++);
      const double fmm = guarded(f, x - ea - eb, k++);
      H(a, b) = H(b, a) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
    }
  }
  return H;
}

template <class T, class D>
FDResult<T> with_halving(D&& diff, double h, bool richardson) {
  const T coarse = diff(h);
  const T fine = diff(0.5 * h);
  FDResult<T> r{fine, (fine - coarse).cwiseAbs()};
  if (richardson) r.estimate = (4.0 * fine - coarse) / 3.0;
  return r;
}

}  // namespace detail

/// Gradient of a scalar field; 6 stencil points per step.
inline FDResult<Vec3> fd_gradient(const std::function<double(const Vec3&)>& f, const Vec3& x,
                                  const FDSpec& spec = {}) {
  detail::check_fd(spec);
  auto wrap = [&](const Vec3& p) { return Eigen::VectorXd::Constant(1, f(p)); };
  return detail::with_halving<Vec3>(
      [&](double h) -> Vec3 { return detail::central_jacobian(wrap, x, h).row(0).transpose(); },
      spec.step(), spec.richardson);
}

/// Jacobian (rows = field components, columns = partials) of a vector field.
inline FDResult<Eigen::MatrixXd> fd_jacobian(const std::function<Eigen::VectorXd(const Vec3&)>& f,
                                             const Vec3& x, const FDSpec& spec = {}) {
  detail::check_fd(spec);
  return detail::with_halving<Eigen::MatrixXd>(
      [&](double h) { return detail::central_jacobian(f, x, h); }, spec.step(), spec.richardson);
}

/// Hessian of a scalar field from 18 stencil points and the centre.
inline FDResult<Mat3> fd_hessian(const std::function<double(const Vec3&)>& f, const Vec3& x,
                                 const FDSpec& spec = {}) {
  detail::check_fd(spec);
  return detail::with_halving<Mat3>([&](double h) { return detail::central_hessian(f, x, h); },
                                    spec.step(), spec.richardson);
}

/// Hessian as the central-difference Jacobian of an analytic gradient.
inline FDResult<Mat3> fd_hessian_from_gradient(const std::function<Vec3(const Vec3&)>& grad, const Vec3& x,
                                               const FDSpec& spec = {}) {
  detail::check_fd(spec);
  auto wrap = [&](const Vec3& p) -> Eigen::VectorXd { return grad(p); };
  return detail::with_halving<Mat3>(
      [&](double h) -> Mat3 { return detail::central_jacobian(wrap, x, h); }, spec.step(), spec.richardson);
}

/// One-dimensional central differences along a unit direction.
inline FDResult<Eigen::Vector2d> fd_directional(const std::function<double(const Vec3&)>& f, const Vec3& x,
                                                const Vec3& dir, const FDSpec& spec = {}) {
  detail::check_fd(spec);
  auto diff = [&](double h) -> Eigen::Vector2d {
    const double f0 = detail::guarded(f, x, 0);
    const double fp = detail::guarded(f, x + h * dir, 1);
    const double fm = detail::guarded(f, x - h * dir, 2);
    return {(fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)};
  };
  return detail::with_halving<Eigen::Vector2d>(diff, spec.step(), spec.richardson);
}

}  // namespace mvc
