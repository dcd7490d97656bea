#pragma once

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <tuple>
#include <utility>

#include "mvc/cage_mesh.hpp"

namespace mvc::shapes {

/// Axis-aligned cube [-h, h]^3, 8 vertices, 12 outward triangles.
inline TriangleSoup cube(double h = 1.0) {
  TriangleSoup s;
  for (int i = 0; i < 8; ++i) {
    s.vertices.emplace_back((i & 1) ? h : -h, (i & 2) ? h : -h, (i & 4) ? h : -h);
  }
  constexpr std::array<std::array<std::size_t, 4>, 6> quads = {{
      {0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}}};
  for (const auto& q : quads) {
    s.triangles.push_back({q[0], q[1], q[2]});
    s.triangles.push_back({q[0], q[2], q[3]});
  }
  return s;
}

/// Regular tetrahedron inscribed in the cube [-1, 1]^3; centroid at 0.
inline TriangleSoup tetrahedron() {
  TriangleSoup s;
  s.vertices = {Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1), Vec3(-1, -1, 1)};
  s.triangles = {{{0, 1, 2}}, {{0, 3, 1}}, {{0, 2, 3}}, {{1, 3, 2}}};
  return s;
}

/// Unit icosphere after `level` 1:4 subdivisions (level 2: 162 vertices).
inline TriangleSoup icosphere(int level) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  TriangleSoup s;
  s.vertices = {Vec3(-1, t, 0), Vec3(1, t, 0), Vec3(-1, -t, 0), Vec3(1, -t, 0),
                Vec3(0, -1, t), Vec3(0, 1, t), Vec3(0, -1, -t), Vec3(0, 1, -t),
                Vec3(t, 0, -1), Vec3(t, 0, 1), Vec3(-t, 0, -1), Vec3(-t, 0, 1)};
  for (auto& v : s.vertices) v.normalize();
  s.triangles = {{{0, 11, 5}}, {{0, 5, 1}},  {{0, 1, 7}},   {{0, 7, 10}}, {{0, 10, 11}},
                 {{1, 5, 9}},  {{5, 11, 4}}, {{11, 10, 2}}, {{10, 7, 6}}, {{7, 1, 8}},
                 {{3, 9, 4}},  {{3, 4, 2}},  {{3, 2, 6}},   {{3, 6, 8}},  {{3, 8, 9}},
                 {{4, 9, 5}},  {{2, 4, 11}}, {{6, 2, 10}},  {{8, 6, 7}},  {{9, 8, 1}}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> mid;
    auto midpoint = [&](std::size_t a, std::size_t b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      s.vertices.push_back((s.vertices[a] + s.vertices[b]).normalized());
      mid.emplace(key, s.vertices.size() - 1);
      return s.vertices.size() - 1;
    };
    std::vector<Triangle> next;
    next.reserve(s.triangles.size() * 4);
    for (const auto& f : s.triangles) {
      const std::size_t a = midpoint(f[0], f[1]), b = midpoint(f[1], f[2]), c = midpoint(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    s.triangles = std::move(next);
  }
  return s;
}

/// Boundary of a union of unit voxels, two triangles per exposed face.
inline TriangleSoup voxel_union(const std::set<std::array<int, 3>>& cells) {
  TriangleSoup s;
  std::map<std::array<int, 3>, std::size_t> index;
  auto vertex = [&](const std::array<int, 3>& p) {
    auto it = index.find(p);
    if (it != index.end()) return it->second;
    s.vertices.emplace_back(p[0], p[1], p[2]);
    index.emplace(p, s.vertices.size() - 1);
    return s.vertices.size() - 1;
  };
  for (const auto& c : cells) {
    for (int axis = 0; axis < 3; ++axis) {
      for (int side = 0; side < 2; ++side) {
        std::array<int, 3> nb = c;
        nb[axis] += side ? 1 : -1;
        if (cells.count(nb)) continue;
        const int u = (axis + 1) % 3, v = (axis + 2) % 3;
        std::array<std::array<int, 3>, 4> q;
        for (int k = 0; k < 4; ++k) {
          q[k] = c;
          q[k][axis] += side;
          q[k][u] += (k == 1 || k == 2) ? 1 : 0;
          q[k][v] += (k >= 2) ? 1 : 0;
        }
        // (u, v, axis) is right-handed, so q winds counter-clockwise about +axis.
        std::array<std::size_t, 4> id;
        for (int k = 0; k < 4; ++k) id[k] = vertex(q[k]);
        if (side) {
          s.triangles.push_back({id[0], id[1], id[2]});
          s.triangles.push_back({id[0], id[2], id[3]});
        } else {
          s.triangles.push_back({id[0], id[2], id[1]});
          s.triangles.push_back({id[0], id[3], id[2]});
        }
      }
    }
  }
  return s;
}

/// Non-convex L-shaped cage made of three unit cubes in the z = [0, 1] slab.
inline TriangleSoup l_cage() { return voxel_union({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}); }

/// UV sphere of the given radius (closed, poles shared).
inline TriangleSoup uv_sphere(const Vec3& center, double radius, int rings, int segments) {
  TriangleSoup s;
  s.vertices.push_back(center + Vec3(0, 0, radius));
  for (int r = 1; r < rings; ++r) {
    const double phi = std::numbers::pi * r / rings;
    for (int k = 0; k < segments; ++k) {
      const double th = 2.0 * std::numbers::pi * k / segments;
      s.vertices.push_back(center + radius * Vec3(std::sin(phi) * std::cos(th), std::sin(phi) * std::sin(th),
                                                  std::cos(phi)));
    }
  }
  s.vertices.push_back(center + Vec3(0, 0, -radius));
  const std::size_t south = s.vertices.size() - 1;
  auto ring = [&](int r, int k) { return 1 + static_cast<std::size_t>((r - 1) * segments + (k % segments)); };
  for (int k = 0; k < segments; ++k) s.triangles.push_back({0, ring(1, k), ring(1, k + 1)});
  for (int r = 1; r + 1 < rings; ++r) {
    for (int k = 0; k < segments; ++k) {
      s.triangles.push_back({ring(r, k), ring(r + 1, k), ring(r + 1, k + 1)});
      s.triangles.push_back({ring(r, k), ring(r + 1, k + 1), ring(r, k + 1)});
    }
  }
  for (int k = 0; k < segments; ++k) s.triangles.push_back({south, ring(rings - 1, k + 1), ring(rings - 1, k)});
  return s;
}

/// Open cylinder around the z axis, z in [z0, z1].
inline TriangleSoup cylinder(double radius, double z0, double z1, int stacks, int segments) {
  TriangleSoup s;
  for (int i = 0; i <= stacks; ++i) {
    const double z = z0 + (z1 - z0) * i / stacks;
    for (int k = 0; k < segments; ++k) {
      const double th = 2.0 * std::numbers::pi * k / segments;
      s.vertices.emplace_back(radius * std::cos(th), radius * std::sin(th), z);
    }
  }
  auto id = [&](int i, int k) { return static_cast<std::size_t>(i * segments + (k % segments)); };
  for (int i = 0; i < stacks; ++i) {
    for (int k = 0; k < segments; ++k) {
      s.triangles.push_back({id(i, k), id(i, k + 1), id(i + 1, k + 1)});
      s.triangles.push_back({id(i, k), id(i + 1, k + 1), id(i + 1, k)});
    }
  }
  return s;
}

}  // namespace mvc::shapes
