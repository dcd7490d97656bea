#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Geometry>

#include "mvc/types.hpp"

namespace mvc {

using Triangle = std::array<std::size_t, 3>;

/// Indexed triangle soup as read from disk; no invariants.
struct TriangleSoup {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
};

/// Closed, consistently oriented triangle cage with outward normals.
/// Immutable once built by load_cage().
class CageMesh {
 public:
  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t triangle_count() const { return triangles_.size(); }

  /// N1(i): triangles incident to vertex i.
  std::span<const std::size_t> incident_triangles(std::size_t vertex) const {
    return adjacency_[vertex];
  }

  const Vec3& corner(std::size_t t, int j) const {
    return vertices_[triangles_[t][static_cast<std::size_t>(j)]];
  }
  const Vec3& normal(std::size_t t) const { return normals_[t]; }
  double area(std::size_t t) const { return areas_[t]; }
  double mean_edge(std::size_t t) const { return mean_edges_[t]; }

  double bbox_diagonal() const { return diagonal_; }
  const Vec3& bbox_min() const { return bbox_min_; }
  const Vec3& bbox_max() const { return bbox_max_; }
  double signed_volume() const { return volume_; }

  /// True when the input winding was inward and every triangle was reversed.
  bool orientation_flipped() const { return flipped_; }

  TriangleSoup to_soup() const { return {vertices_, triangles_}; }

  friend CageMesh load_cage(const TriangleSoup& soup, const Tolerances& tol);

 private:
  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<Vec3> normals_;
  std::vector<double> areas_;
  std::vector<double> mean_edges_;
  Vec3 bbox_min_ = Vec3::Zero();
  Vec3 bbox_max_ = Vec3::Zero();
  double diagonal_ = 0.0;
  double volume_ = 0.0;
  bool flipped_ = false;
};

inline CageMesh load_cage(const TriangleSoup& soup, const Tolerances& tol = {}) {
  if (soup.vertices.empty() || soup.triangles.empty()) {
    throw Error(ErrorCode::InvalidInput, "cage has no vertices or no triangles");
  }
  for (std::size_t i = 0; i < soup.vertices.size(); ++i) {
    if (!soup.vertices[i].allFinite()) {
      throw Error(ErrorCode::InvalidInput, "non-finite vertex position", i);
    }
  }
  const std::size_t nv = soup.vertices.size();
  for (std::size_t t = 0; t < soup.triangles.size(); ++t) {
    const auto& tri = soup.triangles[t];
    for (auto v : tri) {
      if (v >= nv) throw Error(ErrorCode::InvalidInput, "triangle index out of range", t);
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw Error(ErrorCode::DegenerateTriangle, "triangle repeats a vertex", t);
    }
  }

  CageMesh cage;
  cage.vertices_ = soup.vertices;
  cage.triangles_ = soup.triangles;

  cage.bbox_min_ = cage.vertices_.front();
  cage.bbox_max_ = cage.vertices_.front();
  for (const auto& p : cage.vertices_) {
    cage.bbox_min_ = cage.bbox_min_.cwiseMin(p);
    cage.bbox_max_ = cage.bbox_max_.cwiseMax(p);
  }
  cage.diagonal_ = (cage.bbox_max_ - cage.bbox_min_).norm();

  // Directed half-edges keyed by undirected edge. Each closed-manifold edge
  // must appear exactly twice, once in each direction.
  struct EdgeUse {
    std::size_t count = 0;
    std::size_t forward = 0;  // uses as (min -> max)
    std::size_t first_triangle = 0;
  };
  std::unordered_map<std::uint64_t, EdgeUse> edges;
  edges.reserve(cage.triangles_.size() * 3);
  for (std::size_t t = 0; t < cage.triangles_.size(); ++t) {
    const auto& tri = cage.triangles_[t];
    for (int j = 0; j < 3; ++j) {
      const std::size_t a = tri[static_cast<std::size_t>(j)];
      const std::size_t b = tri[static_cast<std::size_t>((j + 1) % 3)];
      const std::uint64_t key =
          static_cast<std::uint64_t>(std::min(a, b)) * nv + std::max(a, b);
      auto& use = edges[key];
      if (use.count == 0) use.first_triangle = t;
      ++use.count;
      if (a < b) ++use.forward;
    }
  }
  bool mixed = false;
  for (const auto& [key, use] : edges) {
    if (use.count == 1) {
      throw Error(ErrorCode::NotClosed, "boundary edge found", use.first_triangle);
    }
    if (use.count > 2) {
      throw Error(ErrorCode::NonManifoldEdge, "edge shared by more than two triangles",
                  use.first_triangle);
    }
    if (use.forward != 1) mixed = true;
  }
  if (mixed) {
    throw Error(ErrorCode::InconsistentOrientation,
                "neighbouring triangles have opposite winding");
  }

  const double area_floor = tol.eps_area * cage.diagonal_ * cage.diagonal_;
  double volume = 0.0;
  for (std::size_t t = 0; t < cage.triangles_.size(); ++t) {
    const Vec3& p0 = cage.corner(t, 0);
    const Vec3& p1 = cage.corner(t, 1);
    const Vec3& p2 = cage.corner(t, 2);
    const Vec3 cross = (p1 - p0).cross(p2 - p0);
    const double area = 0.5 * cross.norm();
    if (!(area > area_floor)) {
      throw Error(ErrorCode::DegenerateTriangle, "triangle area below threshold", t);
    }
    volume += p0.dot(p1.cross(p2)) / 6.0;
  }
  if (volume == 0.0) {
    throw Error(ErrorCode::InconsistentOrientation, "cage encloses zero volume");
  }
  if (volume < 0.0) {
    for (auto& tri : cage.triangles_) std::swap(tri[1], tri[2]);
    cage.flipped_ = true;
    volume = -volume;
  }
  cage.volume_ = volume;

  cage.adjacency_.assign(nv, {});
  cage.normals_.resize(cage.triangles_.size());
  cage.areas_.resize(cage.triangles_.size());
  cage.mean_edges_.resize(cage.triangles_.size());
  for (std::size_t t = 0; t < cage.triangles_.size(); ++t) {
    for (auto v : cage.triangles_[t]) cage.adjacency_[v].push_back(t);
    const Vec3& p0 = cage.corner(t, 0);
    const Vec3& p1 = cage.corner(t, 1);
    const Vec3& p2 = cage.corner(t, 2);
    const Vec3 cross = (p1 - p0).cross(p2 - p0);
    cage.areas_[t] = 0.5 * cross.norm();
    cage.normals_[t] = cross.normalized();
    cage.mean_edges_[t] = ((p1 - p0).norm() + (p2 - p1).norm() + (p0 - p2).norm()) / 3.0;
  }
  return cage;
}

enum class FrameClass {
  Generic,
  OnSupportPlaneOutsideT,
  InsideT,
  OnEdgeOrVertex,
};

inline const char* to_string(FrameClass c) {
  switch (c) {
    case FrameClass::Generic: return "Generic";
    case FrameClass::OnSupportPlaneOutsideT: return "OnSupportPlaneOutsideT";
    case FrameClass::InsideT: return "InsideT";
    case FrameClass::OnEdgeOrVertex: return "OnEdgeOrVertex";
  }
  return "?";
}

/// Everything the weight and derivative formulas need about one triangle
/// seen from one query point. Index j is cyclic: N[j] pairs corners j+1, j+2.
struct TriangleFrame {
  std::array<Vec3, 3> p;      // corner positions
  std::array<Vec3, 3> u;      // p[j] - eta
  std::array<double, 3> d{};  // |u[j]|
  std::array<Vec3, 3> N;      // u[j+1] x u[j+2]
  std::array<double, 3> N_norm{};
  std::array<Vec3, 3> n;      // N / |N|, zero when |N| == 0
  std::array<double, 3> theta{};
  std::array<Mat3, 3> JN;     // skew(p[j+2] - p[j+1]) = d N[j] / d eta
  double detA = 0.0;
  Vec3 m = Vec3::Zero();      // integral of the unit normal over the spherical triangle
  Vec3 normal = Vec3::Zero(); // unit triangle normal
  double area = 0.0;
  double mean_edge = 0.0;
  double signed_distance = 0.0;      // (eta - p[0]) . normal
  Vec3 barycentric = Vec3::Zero();   // of eta projected onto the support plane
  FrameClass classification = FrameClass::Generic;

  Vec3 edge(int j) const { return p[(j + 2) % 3] - p[(j + 1) % 3]; }
  /// Projection of the query point onto the support plane lies outside T.
  bool projects_outside(double eps) const { return barycentric.minCoeff() < -eps; }
};

inline TriangleFrame build_triangle_frame(const CageMesh& cage, std::size_t t, const Vec3& eta,
                                          const Tolerances& tol = {}) {
  TriangleFrame f;
  const double vertex_floor = tol.eps_vertex * cage.bbox_diagonal();
  for (int j = 0; j < 3; ++j) {
    f.p[j] = cage.corner(t, j);
    f.u[j] = f.p[j] - eta;
    f.d[j] = f.u[j].norm();
    if (f.d[j] <= vertex_floor) {
      throw Error(ErrorCode::VertexCoincidence, "query point coincides with a cage vertex",
                  cage.triangles()[t][static_cast<std::size_t>(j)]);
    }
  }
  for (int j = 0; j < 3; ++j) {
    const Vec3& a = f.u[(j + 1) % 3];
    const Vec3& b = f.u[(j + 2) % 3];
    f.N[j] = a.cross(b);
    f.N_norm[j] = f.N[j].norm();
    f.n[j] = f.N_norm[j] > 0.0 ? Vec3(f.N[j] / f.N_norm[j]) : Vec3::Zero();
    f.theta[j] = std::atan2(f.N_norm[j], a.dot(b));
    f.JN[j] = skew(f.edge(j));
    f.m += 0.5 * f.theta[j] * f.n[j];
  }
  f.normal = cage.normal(t);
  f.area = cage.area(t);
  f.mean_edge = cage.mean_edge(t);
  f.signed_distance = (eta - f.p[0]).dot(f.normal);
  // det(u0, u1, u2) = u0 . ((p1 - p0) x (p2 - p0)); no cancellation near the plane
  f.detA = -2.0 * f.area * f.signed_distance;

  const Vec3 q = eta - f.signed_distance * f.normal;
  for (int j = 0; j < 3; ++j) {
    const Vec3& a = f.p[(j + 1) % 3];
    const Vec3& b = f.p[(j + 2) % 3];
    f.barycentric[j] = (b - a).cross(q - a).dot(f.normal) / (2.0 * f.area);
  }

  if (std::abs(f.signed_distance) <= tol.eps_plane * f.mean_edge) {
    const double lo = f.barycentric.minCoeff();
    if (lo < -tol.eps_plane) {
      f.classification = FrameClass::OnSupportPlaneOutsideT;
    } else if (lo > tol.eps_plane) {
      f.classification = FrameClass::InsideT;
    } else {
      f.classification = FrameClass::OnEdgeOrVertex;
    }
  }
  return f;
}

/// Closest point on triangle (a, b, c) to p.
inline Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

/// Unsigned distance from p to the cage surface (brute force over triangles).
inline double distance_to_surface(const CageMesh& cage, const Vec3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < cage.triangle_count(); ++t) {
    const Vec3 c = closest_point_on_triangle(p, cage.corner(t, 0), cage.corner(t, 1), cage.corner(t, 2));
    best = std::min(best, (c - p).norm());
  }
  return best;
}

}  // namespace mvc
