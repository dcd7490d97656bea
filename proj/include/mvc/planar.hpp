#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "mvc/cage_mesh.hpp"
#include "mvc/kernels.hpp"

namespace mvc {

// Closed forms for a query point lying in the support plane of T but outside
// T. There w^T vanishes identically, its gradient is parallel to the
// triangle normal, and its Hessian is g n^T + n g^T with g the in-plane
// gradient of the normal derivative. Notation per triangle: E_j = p_{j+2} -
// p_{j+1}, D_j = d_{j+1} d_{j+2}, q_j = u_{j+1} + u_{j+2} = -(2 eta - p_{j+1}
// - p_{j+2}).

/// d w_i^T / d n_T for i = 0..2, from
///   -2|T| dw_i = sum_j eq2 (E_i.E_j) / 2D + eq1 |E_j|^2 (N_i.N_j) / 4D^3
///                      - (N_i.N_j) / 2D^2
inline std::array<double, 3> planar_normal_derivatives(const TriangleFrame& f,
                                                       const Tolerances& tol = {}) {
  std::array<double, 3> D{};
  std::array<KernelSet, 3> k;
  for (int j = 0; j < 3; ++j) {
    D[j] = f.d[(j + 1) % 3] * f.d[(j + 2) % 3];
    k[j] = eval_kernel_set(f.theta[j], tol);
  }
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    double s = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double ee = f.edge(i).dot(f.edge(j));
      const double l2 = f.edge(j).squaredNorm();
      const double nn = f.N[i].dot(f.N[j]);
      s += k[j].eq2 * ee / (2.0 * D[j]);
      s += k[j].eq1 * l2 * nn / (4.0 * D[j] * D[j] * D[j]);
      s -= nn / (2.0 * D[j] * D[j]);
    }
    out[i] = -s / (2.0 * f.area);
  }
  return out;
}

/// In-plane gradient of planar_normal_derivatives(), i.e. the vector g_i with
/// H(w_i^T) = g_i n_T^T + n_T g_i^T on the support plane.
inline std::array<Vec3, 3> planar_normal_derivative_gradients(const TriangleFrame& f,
                                                              const Tolerances& tol = {}) {
  std::array<double, 3> D{};
  std::array<KernelSet, 3> k;
  std::array<Vec3, 3> JtN, q;
  for (int j = 0; j < 3; ++j) {
    D[j] = f.d[(j + 1) % 3] * f.d[(j + 2) % 3];
    k[j] = eval_kernel_set(f.theta[j], tol);
    JtN[j] = f.JN[j].transpose() * f.N[j];
    q[j] = f.u[(j + 1) % 3] + f.u[(j + 2) % 3];
  }
  std::array<Vec3, 3> out;
  for (int i = 0; i < 3; ++i) {
    Vec3 g = Vec3::Zero();
    for (int j = 0; j < 3; ++j) {
      const double Dj = D[j], D2 = Dj * Dj, D3 = D2 * Dj, D4 = D3 * Dj, D5 = D4 * Dj;
      const double c = std::cos(f.theta[j]);
      const double ee = f.edge(i).dot(f.edge(j));
      const double l2 = f.edge(j).squaredNorm();
      const double nn = f.N[i].dot(f.N[j]);
      const Vec3 gnn = f.JN[i].transpose() * f.N[j] + f.JN[j].transpose() * f.N[i];
      const auto& kj = k[j];
      // eq2 (E_i.E_j) / 2D
      g += 0.5 * ee *
           ((kj.eq8 - kj.eq2) * JtN[j] / D3 + (kj.eq9 + kj.eq2 * c) * q[j] / D2);
      // eq1 |E_j|^2 (N_i.N_j) / 4D^3
      g += 0.25 * l2 *
           ((kj.eq6 - 3.0 * kj.eq1) * nn * JtN[j] / D5 +
            (kj.eq7 + 3.0 * kj.eq1 * c) * nn * q[j] / D4 + kj.eq1 * gnn / D3);
      // -(N_i.N_j) / 2D^2
      g += -gnn / (2.0 * D2) + nn * JtN[j] / D4 - c * nn * q[j] / D3;
    }
    out[i] = -g / (2.0 * f.area);
  }
  return out;
}

/// Value, gradient and Hessian of the three w^T near the support plane,
/// obtained from the planar closed forms at the projected point plus the
/// first-order term in the signed distance.
struct PlanarExpansion {
  double signed_distance = 0.0;
  Vec3 normal = Vec3::Zero();
  std::array<double, 3> normal_derivative{};
  std::array<Vec3, 3> normal_derivative_gradient;

  double weight(int i) const { return signed_distance * normal_derivative[i]; }
  Vec3 gradient(int i) const {
    return normal_derivative[i] * normal + signed_distance * normal_derivative_gradient[i];
  }
  Mat3 hessian(int i) const {
    const Vec3& g = normal_derivative_gradient[i];
    return g * normal.transpose() + normal * g.transpose();
  }
};

inline PlanarExpansion expand_about_plane(const CageMesh& cage, std::size_t t, const Vec3& eta,
                                          const Tolerances& tol = {}) {
  const Vec3 normal = cage.normal(t);
  const double sd = (eta - cage.corner(t, 0)).dot(normal);
  const TriangleFrame f = build_triangle_frame(cage, t, eta - sd * normal, tol);
  PlanarExpansion e;
  e.signed_distance = sd;
  e.normal = normal;
  e.normal_derivative = planar_normal_derivatives(f, tol);
  e.normal_derivative_gradient = planar_normal_derivative_gradients(f, tol);
  return e;
}

// Near the support plane (and outside T) the general quotient loses about
// eps (R/L)^3 / s^2 relative digits, with R the distance from the projected
// point to T, L the mean edge and s = sd / R. Two replacements are used:
//  - |sd| < eps_switch min(L, R): first-order expansion about the plane
//    (PlanarExpansion above);
//  - |sd| < kappa R: the per-triangle weight is odd in sd, so along the
//    normal it is interpolated by an odd quintic through general evaluations
//    at the offsets s0, 2 s0, 3 s0 (s0 = kappa R, same side as eta). The
//    interpolant is exact up to O((s0 / R)^6).

enum class EvaluationRoute { General, Planar, PlanarExpansion, OffsetFit };

inline const char* to_string(EvaluationRoute r) {
  switch (r) {
    case EvaluationRoute::General: return "general";
    case EvaluationRoute::Planar: return "planar";
    case EvaluationRoute::PlanarExpansion: return "planar_expansion";
    case EvaluationRoute::OffsetFit: return "offset_fit";
  }
  return "?";
}

inline constexpr int kOffsetNodes = 3;

struct RouteChoice {
  EvaluationRoute route = EvaluationRoute::General;
  Vec3 foot = Vec3::Zero();  // projection of eta onto the support plane
  double offset = 0.0;       // signed s0 for OffsetFit
};

/// Relative width kappa of the offset-fit band; balances the interpolation
/// error kappa^6 against the quotient error eps (R/L)^3 / kappa^2.
inline double offset_kappa(double R, double L, const Tolerances& tol) {
  const double k = tol.eps_offset * std::pow(R / L, 0.375);
  return std::clamp(k, 0.25 * tol.eps_offset, 4.0 * tol.eps_offset);
}

/// Route for a frame that is not on the surface of T.
inline RouteChoice choose_route(const CageMesh& cage, std::size_t t, const Vec3& eta, const TriangleFrame& f,
                                const Tolerances& tol) {
  RouteChoice rc;
  if (f.classification == FrameClass::OnSupportPlaneOutsideT) {
    rc.route = EvaluationRoute::Planar;
    return rc;
  }
  if (f.classification != FrameClass::Generic || !f.projects_outside(tol.eps_plane)) return rc;
  const double sd = f.signed_distance, L = f.mean_edge;
  rc.foot = eta - sd * f.normal;
  const double R = (closest_point_on_triangle(rc.foot, cage.corner(t, 0), cage.corner(t, 1), cage.corner(t, 2)) -
                    rc.foot)
                       .norm();
  if (std::abs(sd) < tol.eps_switch * std::min(L, R)) {
    rc.route = EvaluationRoute::PlanarExpansion;
    return rc;
  }
  const double s0 = offset_kappa(R, L, tol) * R;
  if (std::abs(sd) < s0 && s0 > 10.0 * tol.eps_plane * L) {
    rc.route = EvaluationRoute::OffsetFit;
    rc.offset = std::copysign(s0, sd);
  }
  return rc;
}

/// Odd interpolant through x = 1..kOffsetNodes as functions of x = sd / s0:
/// value = sum_k c[k] F(k s0); dc and ddc are the derivatives in x.
struct OffsetFitCoefficients {
  std::array<double, kOffsetNodes> c{}, dc{}, ddc{};
};

inline OffsetFitCoefficients offset_fit_coefficients(double x) {
  // l_k(x) = (x / k) prod_{j != k} (x^2 - j^2) / (k^2 - j^2), expanded in x.
  OffsetFitCoefficients out;
  for (int k = 1; k <= kOffsetNodes; ++k) {
    std::array<double, 2 * kOffsetNodes> poly{};  // coefficients of x^0..x^(2M-1)
    poly[1] = 1.0 / k;
    int deg = 1;
    for (int j = 1; j <= kOffsetNodes; ++j) {
      if (j == k) continue;
      const double den = double(k * k - j * j);
      for (int e = deg + 2; e >= 0; --e) {
        const double hi = e >= 2 ? poly[static_cast<std::size_t>(e - 2)] : 0.0;
        const double lo = e <= deg ? poly[static_cast<std::size_t>(e)] : 0.0;
        poly[static_cast<std::size_t>(e)] = (hi - double(j * j) * lo) / den;
      }
      deg += 2;
    }
    double v = 0.0, d = 0.0, dd = 0.0;
    for (int e = deg; e >= 0; --e) {
      const double a = poly[static_cast<std::size_t>(e)];
      dd = dd * x + 2.0 * d;
      d = d * x + v;
      v = v * x + a;
    }
    const auto i = static_cast<std::size_t>(k - 1);
    out.c[i] = v;
    out.dc[i] = d;
    out.ddc[i] = dd;
  }
  return out;
}

}  // namespace mvc
