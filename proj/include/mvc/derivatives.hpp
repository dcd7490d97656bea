#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "mvc/cage_mesh.hpp"
#include "mvc/kernels.hpp"
#include "mvc/planar.hpp"
#include "mvc/weights.hpp"

namespace mvc {

// Exact first and second derivatives of mean value coordinates.
//
// Per triangle T and query point eta, with u_j = p_j - eta, the weights are
// w_i^T = N_i . m / det(A) and
//
//   grad w_i^T = B^T N_i / det(A),     B = J(m) + (sum_j w_j^T) I
//   H w_i^T    = [N_i^T d_c J(m)]_{c=x,y,z} / det(A)
//                + (N_i G^T + G N_i^T) / det(A),     G = sum_j grad w_j^T
//
// where J(m) and its partials d_c J(m) are sums over the three edges of the
// spherical triangle. Near the support plane (and outside T) the quotient is
// ill-conditioned; those triangles are evaluated from the planar closed forms
// at the projected point (see planar.hpp).

enum class DerivativeSource { GeneralFormula, PlanarFormula };

struct TriangleDerivatives {
  std::array<Vec3, 3> grad;
  std::array<Mat3, 3> hess;
  DerivativeSource source = DerivativeSource::GeneralFormula;
};

/// Quantities attached to edge j of the spherical triangle, i.e. to the
/// corner pair (j+1, j+2).
struct EdgeQuantities {
  double d1 = 0.0;  // |p_{j+1} - eta|
  double d2 = 0.0;  // |p_{j+2} - eta|
  double D = 0.0;   // d1 d2
  Vec3 N = Vec3::Zero();
  Mat3 JN = Mat3::Zero();
  Vec3 JtN = Vec3::Zero();  // JN^T N = gradient of |N|^2 / 2
  Vec3 mid = Vec3::Zero();  // 2 eta - p_{j+1} - p_{j+2}
  Vec3 r1 = Vec3::Zero();   // eta - p_{j+1}
  Vec3 r2 = Vec3::Zero();   // eta - p_{j+2}
  KernelSet k;
};

inline std::array<EdgeQuantities, 3> edge_quantities(const TriangleFrame& f,
                                                     const Tolerances& tol = {}) {
  std::array<EdgeQuantities, 3> e;
  for (int j = 0; j < 3; ++j) {
    const int a = (j + 1) % 3, b = (j + 2) % 3;
    auto& q = e[j];
    q.d1 = f.d[a];
    q.d2 = f.d[b];
    q.D = q.d1 * q.d2;
    q.N = f.N[j];
    q.JN = f.JN[j];
    q.JtN = f.JN[j].transpose() * f.N[j];
    q.r1 = -f.u[a];
    q.r2 = -f.u[b];
    q.mid = q.r1 + q.r2;
    q.k = eval_kernel_set(f.theta[j], tol);
  }
  return e;
}

/// Jacobian of m^T with respect to eta.
inline Mat3 mean_vector_jacobian(const std::array<EdgeQuantities, 3>& edges) {
  Mat3 J = Mat3::Zero();
  for (const auto& e : edges) {
    const double D = e.D;
    J += e.k.eq1 * e.N * e.JtN.transpose() / (2.0 * D * D * D);
    J -= e.N * e.mid.transpose() / (2.0 * D * D);
    J += e.k.eq2 * e.JN / (2.0 * D);
  }
  return J;
}

/// The fourteen edge sums whose total is d_c J(m^T).
enum class HessianTerm {
  Eq6Normal,             // eq6 (JN^T N)_c N N^T JN / 2D^5
  Eq7Midpoint,           // -eq7 mid_c N N^T JN / 2D^4
  Eq1NormalPartialLeft,  // eq1 d_cN N^T JN / 2D^3
  Eq1NormalPartialRight, // eq1 N d_cN^T JN / 2D^3
  Eq1FirstDistance,      // -3 eq1 r1_c N N^T JN / 2 d2^3 d1^5
  Eq1SecondDistance,     // -3 eq1 r2_c N N^T JN / 2 d2^5 d1^3
  NormalPartialMidpoint, // -d_cN mid^T / 2D^2
  FirstDistanceMidpoint, // r1_c N mid^T / d2^2 d1^4
  SecondDistanceMidpoint,// r2_c N mid^T / d2^4 d1^2
  Eq8Skew,               // eq8 (JN^T N)_c JN / 2D^3
  Eq9Skew,               // -eq9 mid_c JN / 2D^2
  Eq2FirstDistance,      // -r1_c eq2 JN / 2 d2 d1^3
  Eq2SecondDistance,     // -r2_c eq2 JN / 2 d2^3 d1
  NormalDelta,           // -N delta_c^T / d2^2 d1^2
};

inline constexpr std::array<HessianTerm, 14> kAllHessianTerms = {
    HessianTerm::Eq6Normal,           HessianTerm::Eq7Midpoint,
    HessianTerm::Eq1NormalPartialLeft, HessianTerm::Eq1NormalPartialRight,
    HessianTerm::Eq1FirstDistance,    HessianTerm::Eq1SecondDistance,
    HessianTerm::NormalPartialMidpoint, HessianTerm::FirstDistanceMidpoint,
    HessianTerm::SecondDistanceMidpoint, HessianTerm::Eq8Skew,
    HessianTerm::Eq9Skew,             HessianTerm::Eq2FirstDistance,
    HessianTerm::Eq2SecondDistance,   HessianTerm::NormalDelta};

inline Mat3 hessian_term(HessianTerm term, const EdgeQuantities& e, int c) {
  const double D = e.D, D2 = D * D, D3 = D2 * D;
  const double d1 = e.d1, d2 = e.d2;
  const Vec3 dN = e.JN.col(c);  // d N / d eta_c
  // N N^T JN = N (JN^T N)^T
  const Mat3 NNJ = e.N * e.JtN.transpose();
  switch (term) {
    case HessianTerm::Eq6Normal:
      return e.k.eq6 * e.JtN[c] * NNJ / (2.0 * D3 * D2);
    case HessianTerm::Eq7Midpoint:
      return -e.k.eq7 * e.mid[c] * NNJ / (2.0 * D2 * D2);
    case HessianTerm::Eq1NormalPartialLeft:
      return e.k.eq1 * dN * e.JtN.transpose() / (2.0 * D3);
    case HessianTerm::Eq1NormalPartialRight:
      return e.k.eq1 * e.N * (e.JN.transpose() * dN).transpose() / (2.0 * D3);
    case HessianTerm::Eq1FirstDistance:
      return -3.0 * e.k.eq1 * e.r1[c] * NNJ / (2.0 * std::pow(d2, 3) * std::pow(d1, 5));
    case HessianTerm::Eq1SecondDistance:
      return -3.0 * e.k.eq1 * e.r2[c] * NNJ / (2.0 * std::pow(d2, 5) * std::pow(d1, 3));
    case HessianTerm::NormalPartialMidpoint:
      return -dN * e.mid.transpose() / (2.0 * D2);
    case HessianTerm::FirstDistanceMidpoint:
      return e.r1[c] * e.N * e.mid.transpose() / (d2 * d2 * std::pow(d1, 4));
    case HessianTerm::SecondDistanceMidpoint:
      return e.r2[c] * e.N * e.mid.transpose() / (std::pow(d2, 4) * d1 * d1);
    case HessianTerm::Eq8Skew:
      return e.k.eq8 * e.JtN[c] * e.JN / (2.0 * D3);
    case HessianTerm::Eq9Skew:
      return -e.k.eq9 * e.mid[c] * e.JN / (2.0 * D2);
    case HessianTerm::Eq2FirstDistance:
      return -e.r1[c] * e.k.eq2 * e.JN / (2.0 * d2 * d1 * d1 * d1);
    case HessianTerm::Eq2SecondDistance:
      return -e.r2[c] * e.k.eq2 * e.JN / (2.0 * d2 * d2 * d2 * d1);
    case HessianTerm::NormalDelta:
      return -e.N * Vec3::Unit(c).transpose() / (D2);
  }
  return Mat3::Zero();
}

/// d J(m^T) / d eta_c.
inline Mat3 mean_vector_jacobian_partial(const std::array<EdgeQuantities, 3>& edges, int c) {
  Mat3 out = Mat3::Zero();
  for (const auto& e : edges) {
    for (auto term : kAllHessianTerms) out += hessian_term(term, e, c);
  }
  return out;
}

namespace detail {

inline void require_generic(const TriangleFrame& f) {
  if (f.classification != FrameClass::Generic) {
    throw Error(ErrorCode::WrongClassification,
                std::string("general derivative formula needs a Generic frame, got ") +
                    to_string(f.classification));
  }
}

inline void require_planar(const TriangleFrame& f) {
  if (f.classification != FrameClass::OnSupportPlaneOutsideT) {
    throw Error(ErrorCode::WrongClassification,
                std::string("planar derivative formula needs an OnSupportPlaneOutsideT frame, got ") +
                    to_string(f.classification));
  }
}

inline std::array<Vec3, 3> gradients_from_edges(const TriangleFrame& f,
                                                const std::array<EdgeQuantities, 3>& edges,
                                                const TriangleWeights& weights) {
  const double wsum = weights.w[0] + weights.w[1] + weights.w[2];
  const Mat3 B = mean_vector_jacobian(edges) + wsum * Mat3::Identity();
  std::array<Vec3, 3> g;
  for (int i = 0; i < 3; ++i) g[i] = B.transpose() * f.N[i] / f.detA;
  return g;
}

inline std::array<Mat3, 3> hessians_from_edges(const TriangleFrame& f,
                                               const std::array<EdgeQuantities, 3>& edges,
                                               const std::array<Vec3, 3>& grads) {
  std::array<Mat3, 3> dJm;
  for (int c = 0; c < 3; ++c) dJm[c] = mean_vector_jacobian_partial(edges, c);
  const Vec3 G = grads[0] + grads[1] + grads[2];
  std::array<Mat3, 3> H;
  for (int i = 0; i < 3; ++i) {
    Mat3 h;
    for (int c = 0; c < 3; ++c) h.row(c) = f.N[i].transpose() * dJm[c];
    h += f.N[i] * G.transpose() + G * f.N[i].transpose();
    H[i] = h / f.detA;
  }
  return H;
}

}  // namespace detail

/// grad w_{t_j}^T = B^T N_j / det(A); frame must be Generic.
inline std::array<Vec3, 3> triangle_gradients(const TriangleFrame& f, const TriangleWeights& weights,
                                              const Tolerances& tol = {}) {
  detail::require_generic(f);
  return detail::gradients_from_edges(f, edge_quantities(f, tol), weights);
}

/// Gradients in the support plane outside T; each is a multiple of n_T.
inline std::array<Vec3, 3> triangle_gradients_planar(const TriangleFrame& f,
                                                     const Tolerances& tol = {}) {
  detail::require_planar(f);
  if (f.area <= 0.0) throw Error(ErrorCode::DegenerateTriangle, "zero-area triangle");
  const auto dn = planar_normal_derivatives(f, tol);
  std::array<Vec3, 3> g;
  for (int i = 0; i < 3; ++i) g[i] = dn[i] * f.normal;
  return g;
}

/// Hessians of the three w^T; frame must be Generic. `grads` are the
/// matching triangle_gradients().
inline std::array<Mat3, 3> triangle_hessians(const TriangleFrame& f, const std::array<Vec3, 3>& grads,
                                             const Tolerances& tol = {}) {
  detail::require_generic(f);
  return detail::hessians_from_edges(f, edge_quantities(f, tol), grads);
}

/// Rank-one planar form grad(dw_i) n_T^T. This is only the half of the
/// Hessian that differentiates the normal derivative along the plane; the
/// full (symmetric) Hessian is triangle_hessians_planar_full().
inline std::array<Mat3, 3> triangle_hessians_planar(const TriangleFrame& f,
                                                    const Tolerances& tol = {}) {
  detail::require_planar(f);
  const auto g = planar_normal_derivative_gradients(f, tol);
  std::array<Mat3, 3> H;
  for (int i = 0; i < 3; ++i) H[i] = g[i] * f.normal.transpose();
  return H;
}

inline std::array<Mat3, 3> triangle_hessians_planar_full(const TriangleFrame& f,
                                                         const Tolerances& tol = {}) {
  auto H = triangle_hessians_planar(f, tol);
  for (auto& h : H) h += h.transpose().eval();
  return H;
}

namespace detail {

inline TriangleDerivatives general_derivatives(const TriangleFrame& f, const TriangleWeights& weights, int order,
                                               const Tolerances& tol) {
  TriangleDerivatives out;
  const auto edges = edge_quantities(f, tol);
  out.grad = gradients_from_edges(f, edges, weights);
  if (order >= 2) {
    out.hess = hessians_from_edges(f, edges, out.grad);
  } else {
    out.hess.fill(Mat3::Zero());
  }
  return out;
}

}  // namespace detail

/// Gradients (and Hessians when order == 2) of the three w^T of triangle t,
/// following choose_route(). `weights` must come from
/// dispatch_triangle_weights() for the same frame.
inline TriangleDerivatives triangle_derivatives(const CageMesh& cage, std::size_t t, const Vec3& eta,
                                                const TriangleFrame& f, const TriangleWeights& weights,
                                                int order, const Tolerances& tol = {}) {
  const RouteChoice rc = choose_route(cage, t, eta, f, tol);
  TriangleDerivatives out;
  switch (rc.route) {
    case EvaluationRoute::Planar:
    case EvaluationRoute::PlanarExpansion: {
      const PlanarExpansion e = expand_about_plane(cage, t, eta, tol);
      out.source = DerivativeSource::PlanarFormula;
      for (int i = 0; i < 3; ++i) {
        out.grad[i] = e.gradient(i);
        out.hess[i] = order >= 2 ? e.hessian(i) : Mat3::Zero();
      }
      return out;
    }
    case EvaluationRoute::OffsetFit: {
      const Vec3& n = f.normal;
      const Mat3 P = Mat3::Identity() - n * n.transpose();
      const double s0 = rc.offset;
      const auto c = offset_fit_coefficients(f.signed_distance / s0);
      for (int i = 0; i < 3; ++i) {
        out.grad[i].setZero();
        out.hess[i].setZero();
      }
      for (int k = 0; k < kOffsetNodes; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        const TriangleFrame fk = build_triangle_frame(cage, t, rc.foot + (k + 1) * s0 * n, tol);
        const TriangleWeights wk = triangle_weights(fk);
        const TriangleDerivatives dk = detail::general_derivatives(fk, wk, order, tol);
        for (int i = 0; i < 3; ++i) {
          const Vec3 g = P * dk.grad[i];
          out.grad[i] += c.c[kk] * g + n * (c.dc[kk] * wk.w[i] / s0);
          if (order >= 2) {
            const Vec3 gm = c.dc[kk] * g / s0;
            out.hess[i] += c.c[kk] * P * dk.hess[i] * P + n * gm.transpose() + gm * n.transpose() +
                           n * n.transpose() * (c.ddc[kk] * wk.w[i] / (s0 * s0));
          }
        }
      }
      return out;
    }
    case EvaluationRoute::General:
      break;
  }
  detail::require_generic(f);
  return detail::general_derivatives(f, weights, order, tol);
}

/// Weights, coordinates and their first/second derivatives at one point.
struct DerivativeSet {
  std::vector<double> w;
  std::vector<double> lambda;
  double sum_w = 0.0;
  std::vector<Vec3> grad_w;
  std::vector<Mat3> hess_w;
  std::vector<Vec3> grad_lambda;
  std::vector<Mat3> hess_lambda;  // empty when order == 1
};

/// Fills lambda, sum_w, grad_lambda and (when hess_w is present) hess_lambda
/// from the per-vertex w, grad_w, hess_w of `ds`.
inline void apply_quotient_rule(DerivativeSet& ds) {
  const std::size_t nv = ds.w.size();
  WeightVector wv;
  wv.w = ds.w;
  detail::normalise(wv);
  ds.lambda = std::move(wv.lambda);
  ds.sum_w = wv.sum_w;

  const bool second = !ds.hess_w.empty();
  const double W = ds.sum_w, W2 = W * W, W3 = W2 * W;
  Vec3 G = Vec3::Zero();
  Mat3 HS = Mat3::Zero();
  for (std::size_t i = 0; i < nv; ++i) {
    G += ds.grad_w[i];
    if (second) HS += ds.hess_w[i];
  }
  ds.grad_lambda.resize(nv);
  ds.hess_lambda.resize(second ? nv : 0);
  for (std::size_t i = 0; i < nv; ++i) {
    const double wi = ds.w[i];
    const Vec3& gi = ds.grad_w[i];
    ds.grad_lambda[i] = gi / W - wi * G / W2;
    if (second) {
      ds.hess_lambda[i] = ds.hess_w[i] / W - wi * HS / W2 -
                          (gi * G.transpose() + G * gi.transpose()) / W2 +
                          2.0 * wi * G * G.transpose() / W3;
    }
  }
}

/// Aggregates triangle contributions and applies the quotient rule for
/// lambda_i = w_i / sum_j w_j. Refuses points on the cage surface, where the
/// coordinates are only continuous.
inline DerivativeSet derivative_set(const CageMesh& cage, const Vec3& eta, const Tolerances& tol = {},
                                    int order = 2) {
  if (!eta.allFinite()) throw Error(ErrorCode::InvalidInput, "non-finite query point");
  if (auto v = detail::coincident_vertex(cage, eta, tol)) {
    throw Error(ErrorCode::OnSurface, "derivatives are undefined at a cage vertex", *v);
  }
  const std::size_t nv = cage.vertex_count();
  DerivativeSet ds;
  ds.w.assign(nv, 0.0);
  ds.grad_w.assign(nv, Vec3::Zero());
  if (order >= 2) ds.hess_w.assign(nv, Mat3::Zero());

  for (std::size_t t = 0; t < cage.triangle_count(); ++t) {
    const TriangleFrame f = build_triangle_frame(cage, t, eta, tol);
    if (f.classification == FrameClass::InsideT || f.classification == FrameClass::OnEdgeOrVertex) {
      throw Error(ErrorCode::OnSurface, "derivatives are undefined on the cage surface", t);
    }
    const TriangleWeights tw = dispatch_triangle_weights(cage, t, eta, f, tol);
    const TriangleDerivatives td = triangle_derivatives(cage, t, eta, f, tw, order, tol);
    for (int j = 0; j < 3; ++j) {
      const std::size_t v = cage.triangles()[t][static_cast<std::size_t>(j)];
      ds.w[v] += tw.w[j];
      ds.grad_w[v] += td.grad[j];
      if (order >= 2) ds.hess_w[v] += td.hess[j];
    }
  }

  apply_quotient_rule(ds);
  return ds;
}

}  // namespace mvc
