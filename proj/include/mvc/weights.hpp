#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "mvc/cage_mesh.hpp"
#include "mvc/planar.hpp"

namespace mvc {

enum class WeightSource { GeneralFormula, PlanarFormula, SurfaceFallback };

struct TriangleWeights {
  std::array<double, 3> w{};
  WeightSource source = WeightSource::GeneralFormula;
};

struct SurfaceLocation {
  std::size_t triangle = 0;
  Vec3 barycentric = Vec3::Zero();
};

/// Per-vertex mean value weights at one query point. When the point lies on
/// the cage, `lambda` holds the barycentric interpolation weights on the
/// supporting triangle and `w` is empty (the unnormalised weights diverge).
struct WeightVector {
  std::vector<double> w;
  std::vector<double> lambda;
  double sum_w = 0.0;
  bool on_surface = false;
  std::optional<SurfaceLocation> surface_location;
};

/// w_j = (N_j . m) / det(A) for a frame off the support plane.
inline TriangleWeights triangle_weights(const TriangleFrame& f) {
  if (f.classification != FrameClass::Generic) {
    throw Error(ErrorCode::WrongClassification,
                std::string("general weight formula needs a Generic frame, got ") +
                    to_string(f.classification));
  }
  TriangleWeights out;
  for (int j = 0; j < 3; ++j) out.w[j] = f.N[j].dot(f.m) / f.detA;
  return out;
}

/// In the support plane and outside T the solid-angle element vanishes, so
/// every w^T is zero; this is the det(A) -> 0 limit of the general formula.
inline TriangleWeights triangle_weights_planar(const TriangleFrame& f) {
  if (f.classification != FrameClass::OnSupportPlaneOutsideT) {
    throw Error(ErrorCode::WrongClassification,
                std::string("planar weight formula needs an OnSupportPlaneOutsideT frame, got ") +
                    to_string(f.classification));
  }
  TriangleWeights out;
  out.source = WeightSource::PlanarFormula;
  return out;
}

/// Weights of triangle t for a frame off the surface of T, following
/// choose_route().
inline TriangleWeights dispatch_triangle_weights(const CageMesh& cage, std::size_t t, const Vec3& eta,
                                                 const TriangleFrame& f, const Tolerances& tol = {}) {
  const RouteChoice rc = choose_route(cage, t, eta, f, tol);
  TriangleWeights out;
  switch (rc.route) {
    case EvaluationRoute::Planar:
      return triangle_weights_planar(f);
    case EvaluationRoute::PlanarExpansion: {
      const PlanarExpansion e = expand_about_plane(cage, t, eta, tol);
      out.source = WeightSource::PlanarFormula;
      for (int j = 0; j < 3; ++j) out.w[j] = e.weight(j);
      return out;
    }
    case EvaluationRoute::OffsetFit: {
      const auto c = offset_fit_coefficients(f.signed_distance / rc.offset);
      for (int k = 0; k < kOffsetNodes; ++k) {
        const Vec3 p = rc.foot + (k + 1) * rc.offset * f.normal;
        const auto wk = triangle_weights(build_triangle_frame(cage, t, p, tol));
        for (int j = 0; j < 3; ++j) out.w[j] += c.c[static_cast<std::size_t>(k)] * wk.w[j];
      }
      return out;
    }
    case EvaluationRoute::General:
      break;
  }
  return triangle_weights(f);
}

/// Linear interpolation on triangle t; the point is projected onto its
/// plane and clamped into the triangle.
inline WeightVector surface_weights(const CageMesh& cage, std::size_t t, const Vec3& eta) {
  const Vec3& n = cage.normal(t);
  const Vec3 q = eta - (eta - cage.corner(t, 0)).dot(n) * n;
  Vec3 b;
  for (int j = 0; j < 3; ++j) {
    const Vec3& a = cage.corner(t, (j + 1) % 3);
    const Vec3& c = cage.corner(t, (j + 2) % 3);
    b[j] = (c - a).cross(q - a).dot(n) / (2.0 * cage.area(t));
  }
  b = b.cwiseMax(0.0);
  b /= b.sum();

  WeightVector out;
  out.lambda.assign(cage.vertex_count(), 0.0);
  for (int j = 0; j < 3; ++j) out.lambda[cage.triangles()[t][static_cast<std::size_t>(j)]] += b[j];
  out.sum_w = 1.0;
  out.on_surface = true;
  out.surface_location = SurfaceLocation{t, b};
  return out;
}

namespace detail {

inline WeightVector vertex_indicator(const CageMesh& cage, std::size_t vertex) {
  WeightVector out;
  out.lambda.assign(cage.vertex_count(), 0.0);
  out.lambda[vertex] = 1.0;
  out.sum_w = 1.0;
  out.on_surface = true;
  const std::size_t t = cage.incident_triangles(vertex).front();
  Vec3 b = Vec3::Zero();
  for (int j = 0; j < 3; ++j) {
    if (cage.triangles()[t][static_cast<std::size_t>(j)] == vertex) b[j] = 1.0;
  }
  out.surface_location = SurfaceLocation{t, b};
  return out;
}

/// Index of a cage vertex within eps_vertex of eta, if any.
inline std::optional<std::size_t> coincident_vertex(const CageMesh& cage, const Vec3& eta,
                                                    const Tolerances& tol) {
  const double floor = tol.eps_vertex * cage.bbox_diagonal();
  for (std::size_t i = 0; i < cage.vertex_count(); ++i) {
    if ((cage.vertices()[i] - eta).norm() <= floor) return i;
  }
  return std::nullopt;
}

inline void normalise(WeightVector& out) {
  double sum = 0.0, largest = 0.0;
  for (double v : out.w) {
    sum += v;
    largest = std::max(largest, std::abs(v));
  }
  if (!(std::abs(sum) >= 1e-14 * largest) || largest == 0.0) {
    throw Error(ErrorCode::NormalizationSingular, "sum of weights vanishes");
  }
  out.sum_w = sum;
  out.lambda.resize(out.w.size());
  for (std::size_t i = 0; i < out.w.size(); ++i) out.lambda[i] = out.w[i] / sum;
}

}  // namespace detail

/// Mean value coordinates of eta with respect to the cage. Valid inside and
/// outside the cage (coordinates are signed); on the surface the result is
/// linear interpolation on the touched triangle.
inline WeightVector mvc_coordinates(const CageMesh& cage, const Vec3& eta,
                                    const Tolerances& tol = {}) {
  if (!eta.allFinite()) throw Error(ErrorCode::InvalidInput, "non-finite query point");
  if (auto v = detail::coincident_vertex(cage, eta, tol)) return detail::vertex_indicator(cage, *v);

  WeightVector out;
  out.w.assign(cage.vertex_count(), 0.0);
  for (std::size_t t = 0; t < cage.triangle_count(); ++t) {
    const TriangleFrame f = build_triangle_frame(cage, t, eta, tol);
    if (f.classification == FrameClass::InsideT || f.classification == FrameClass::OnEdgeOrVertex) {
      return surface_weights(cage, t, eta);
    }
    const TriangleWeights tw = dispatch_triangle_weights(cage, t, eta, f, tol);
    for (int j = 0; j < 3; ++j) out.w[cage.triangles()[t][static_cast<std::size_t>(j)]] += tw.w[j];
  }
  detail::normalise(out);
  return out;
}

}  // namespace mvc
