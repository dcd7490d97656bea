#include <algorithm>
#include <map>

#include "test_support.hpp"

namespace mvc {
namespace {

using namespace mvc::testing;
using std::numbers::pi;

double lambda_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double g = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) g = std::max(g, std::abs(a[i] - b[i]));
  return g;
}

TEST(TriangleWeights, OctantExample) {
  const CageMesh cage = octant_cage();
  const TriangleWeights w = triangle_weights(build_triangle_frame(cage, 0, Vec3::Zero()));
  EXPECT_EQ(w.source, WeightSource::GeneralFormula);
  for (double v : w.w) EXPECT_NEAR(v, pi / 4, 1e-15);
}

TEST(TriangleWeights, GeneralFormulaRefusesPlanarFrames) {
  const CageMesh cage = octant_cage();
  const TriangleFrame f = build_triangle_frame(cage, 0, Vec3(-1, -1, 3));
  expect_error(ErrorCode::WrongClassification, [&] { triangle_weights(f); });
  const TriangleFrame g = build_triangle_frame(cage, 0, Vec3(0.1, 0.1, 0.1));
  expect_error(ErrorCode::WrongClassification, [&] { triangle_weights_planar(g); });
}

TEST(TriangleWeights, PlanarFramesGiveZero) {
  const CageMesh cage = octant_cage();
  const TriangleFrame f = build_triangle_frame(cage, 0, Vec3(-1, -1, 3));
  EXPECT_LT(f.m.norm(), 1e-15);
  const TriangleWeights w = dispatch_triangle_weights(cage, 0, Vec3(-1, -1, 3), f);
  EXPECT_EQ(w.source, WeightSource::PlanarFormula);
  for (double v : w.w) EXPECT_EQ(v, 0.0);
}

TEST(TriangleWeights, VanishLinearlyTowardsThePlane) {
  const CageMesh cage = octant_cage();
  const Vec3 foot(-1, -1, 3);
  const Vec3 n = cage.normal(0);
  const auto dn = planar_normal_derivatives(build_triangle_frame(cage, 0, foot));
  for (double s : {1e-3, 1e-6, 1e-8, -1e-8, -1e-6}) {
    for (int i = 0; i < 3; ++i) {
      const double w = triangle_weight(cage, 0, foot + s * n, i);
      EXPECT_LE(std::abs(w / s - dn[i]), 1e-4 * std::abs(dn[i]) + 1e-12) << "s=" << s << " i=" << i;
    }
  }
}

TEST(Coordinates, RegularTetrahedronCentroid) {
  const CageMesh cage = load_cage(shapes::tetrahedron());
  const WeightVector wv = mvc_coordinates(cage, Vec3::Zero());
  ASSERT_EQ(wv.lambda.size(), 4u);
  for (double l : wv.lambda) EXPECT_NEAR(l, 0.25, 1e-14);
  EXPECT_FALSE(wv.on_surface);
}

TEST(Coordinates, CubeCentreFollowsTriangulationSymmetry) {
  // The face diagonals break the octahedral symmetry: every diagonal runs
  // through one of two opposite corners, so the coordinates at the centre
  // depend only on how many triangles meet at a vertex.
  const CageMesh cage = cube_cage();
  const WeightVector wv = mvc_coordinates(cage, Vec3::Zero());
  std::map<std::size_t, std::vector<double>> by_degree;
  for (std::size_t i = 0; i < 8; ++i) by_degree[cage.incident_triangles(i).size()].push_back(wv.lambda[i]);
  ASSERT_EQ(by_degree.size(), 2u);
  for (const auto& [degree, values] : by_degree) {
    for (double v : values) EXPECT_NEAR(v, values.front(), 1e-15) << "degree " << degree;
  }
  EXPECT_GT(by_degree[6].front(), by_degree[4].front());
  double s = 0.0;
  Vec3 f = Vec3::Zero();
  for (std::size_t i = 0; i < 8; ++i) {
    s += wv.lambda[i];
    f += wv.lambda[i] * cage.vertices()[i];
  }
  EXPECT_NEAR(s, 1.0, 1e-15);
  EXPECT_LT(f.norm(), 1e-15);
  EXPECT_LT(lambda_gap(wv.lambda, ju_robust_weights(cage, Vec3::Zero()).lambda), 1e-12);
  QuadratureSpec spec;
  spec.tolerance = 1e-8;
  EXPECT_LT(lambda_gap(wv.lambda, quadrature_weights(cage, Vec3::Zero(), spec).lambda), 1e-6);
}

TEST(Coordinates, AgreeWithIndependentOracles) {
  const CageMesh cage = cube_cage();
  const Vec3 eta(0.3, -0.2, 0.5);
  const WeightVector wv = mvc_coordinates(cage, eta);
  EXPECT_LT(lambda_gap(wv.lambda, ju_robust_weights(cage, eta).lambda), 1e-10);
  QuadratureSpec spec;
  spec.tolerance = 1e-8;
  const QuadratureWeights q = quadrature_weights(cage, eta, spec);
  EXPECT_TRUE(q.converged);
  EXPECT_LT(lambda_gap(wv.lambda, q.lambda), 1e-5);
  for (std::size_t i = 0; i < wv.w.size(); ++i) EXPECT_LE(rel(wv.w[i], q.w[i]), 1e-6);
}

TEST(Coordinates, PartitionOfUnityAndLinearPrecision) {
  for (const TriangleSoup& soup : {shapes::icosphere(1), shapes::l_cage(), shapes::cube()}) {
    const CageMesh cage = load_cage(soup);
    for (const Vec3& eta : sample(cage, 60, 5, 0.02)) {
      const WeightVector wv = mvc_coordinates(cage, eta);
      double s = 0.0;
      Vec3 f = Vec3::Zero();
      for (std::size_t i = 0; i < wv.lambda.size(); ++i) {
        s += wv.lambda[i];
        f += wv.lambda[i] * cage.vertices()[i];
      }
      EXPECT_NEAR(s, 1.0, 1e-10);
      EXPECT_LE((f - eta).norm(), 1e-8 * cage.bbox_diagonal()) << eta.transpose();
    }
  }
}

TEST(Coordinates, PositiveInsideConvexCage) {
  const CageMesh cage = load_cage(shapes::icosphere(1));
  for (const Vec3& eta : sample(cage, 40, 9, 0.02, -0.2)) {
    if (eta.norm() > 0.9) continue;
    for (double l : mvc_coordinates(cage, eta).lambda) EXPECT_GT(l, 0.0);
  }
}

TEST(Coordinates, SurfaceFallback) {
  const CageMesh cage = cube_cage();
  // Vertex.
  const WeightVector v = mvc_coordinates(cage, cage.vertices()[5]);
  EXPECT_TRUE(v.on_surface);
  EXPECT_TRUE(v.w.empty());
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(v.lambda[i], i == 5 ? 1.0 : 0.0);
  // Edge midpoint between vertices 0 and 1.
  const WeightVector e = mvc_coordinates(cage, 0.5 * (cage.vertices()[0] + cage.vertices()[1]));
  EXPECT_TRUE(e.on_surface);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(e.lambda[i], i <= 1 ? 0.5 : 0.0, 1e-15);
  // Triangle centroid.
  const auto& t = cage.triangles()[4];
  const Vec3 c = (cage.vertices()[t[0]] + cage.vertices()[t[1]] + cage.vertices()[t[2]]) / 3.0;
  const WeightVector g = mvc_coordinates(cage, c);
  EXPECT_TRUE(g.on_surface);
  ASSERT_TRUE(g.surface_location.has_value());
  for (std::size_t i = 0; i < 8; ++i) {
    const bool corner = i == t[0] || i == t[1] || i == t[2];
    EXPECT_NEAR(g.lambda[i], corner ? 1.0 / 3.0 : 0.0, 1e-15);
  }
}

TEST(Coordinates, InterpolateAtVertices) {
  const CageMesh cage = load_cage(shapes::l_cage());
  const Vec3 centre = 0.5 * (cage.bbox_min() + cage.bbox_max());
  for (std::size_t i = 0; i < cage.vertex_count(); ++i) {
    const Vec3& p = cage.vertices()[i];
    // Approach along the average inward normal of the incident triangles.
    Vec3 n = Vec3::Zero();
    for (std::size_t t : cage.incident_triangles(i)) n += cage.normal(t);
    const Vec3 dir = n.norm() > 1e-12 ? Vec3(-n.normalized()) : Vec3((centre - p).normalized());
    for (double s : {1e-4, 1e-7}) {
      const WeightVector wv = mvc_coordinates(cage, p + s * dir);
      EXPECT_NEAR(wv.lambda[i], 1.0, 100.0 * s) << "vertex " << i << " s=" << s;
    }
  }
}

TEST(Coordinates, ContinuousAcrossSupportPlanes) {
  // Points in the plane of a face but outside the cage.
  const CageMesh cage = cube_cage();
  const Vec3 foot(3.0, 0.2, -1.0);
  const WeightVector at = mvc_coordinates(cage, foot);
  EXPECT_FALSE(at.on_surface);
  for (double s : {1e-12, 1e-9, 1e-6}) {
    EXPECT_LT(lambda_gap(at.lambda, mvc_coordinates(cage, foot + Vec3(0, 0, s)).lambda), 10.0 * s + 1e-13);
    EXPECT_LT(lambda_gap(at.lambda, mvc_coordinates(cage, foot - Vec3(0, 0, s)).lambda), 10.0 * s + 1e-13);
  }
  EXPECT_LT(lambda_gap(at.lambda, ju_robust_weights(cage, foot).lambda), 1e-10);
}

TEST(Coordinates, RouteBoundariesAreSeamless) {
  const CageMesh cage = cube_cage();
  const std::size_t t = 0;  // in the plane z = -1
  const Vec3 foot(3.0, 0.2, -1.0);
  const Tolerances tol;
  const Vec3 n = cage.normal(t);
  const TriangleFrame f0 = build_triangle_frame(cage, t, foot + 0.5 * n);
  const double R = (closest_point_on_triangle(foot, cage.corner(t, 0), cage.corner(t, 1), cage.corner(t, 2)) - foot)
                       .norm();
  const double s0 = offset_kappa(R, f0.mean_edge, tol) * R;
  const double s_switch = tol.eps_switch * std::min(R, f0.mean_edge);
  struct Case {
    double s;
    EvaluationRoute below, above;
  };
  for (const Case& c : {Case{s0, EvaluationRoute::OffsetFit, EvaluationRoute::General},
                        Case{s_switch, EvaluationRoute::PlanarExpansion, EvaluationRoute::OffsetFit}}) {
    for (double sign : {1.0, -1.0}) {
      const Vec3 lo = foot + sign * c.s * (1.0 - 1e-9) * n;
      const Vec3 hi = foot + sign * c.s * (1.0 + 1e-9) * n;
      EXPECT_EQ(choose_route(cage, t, lo, build_triangle_frame(cage, t, lo), tol).route, c.below);
      EXPECT_EQ(choose_route(cage, t, hi, build_triangle_frame(cage, t, hi), tol).route, c.above);
      for (int i = 0; i < 3; ++i) {
        const double a = triangle_weight(cage, t, lo, i), b = triangle_weight(cage, t, hi, i);
        EXPECT_LE(std::abs(a - b), 1e-8 * std::abs(b)) << "s=" << c.s << " corner " << i;
      }
    }
  }
}

TEST(Coordinates, RigidAndScaleInvariance) {
  const TriangleSoup soup = shapes::l_cage();
  const CageMesh cage = load_cage(soup);
  const Mat3 Rm = rotation(0.7, Vec3(1, 2, -0.5));
  const Vec3 shift(-4.0, 1.5, 2.0);
  const CageMesh moved = load_cage(transformed(soup, 3.0 * Rm, shift));
  for (const Vec3& eta : sample(cage, 30, 21)) {
    const auto a = mvc_coordinates(cage, eta).lambda;
    const auto b = mvc_coordinates(moved, 3.0 * Rm * eta + shift).lambda;
    EXPECT_LT(lambda_gap(a, b), 1e-11) << eta.transpose();
  }
}

TEST(Coordinates, WeightsScaleWithCage) {
  // Per-vertex weights have units 1 / length.
  const CageMesh cage = cube_cage();
  const CageMesh big = load_cage(shapes::cube(2.0));
  const Vec3 eta(0.3, -0.2, 0.5);
  const auto a = mvc_coordinates(cage, eta).w;
  const auto b = mvc_coordinates(big, 2.0 * eta).w;
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b[i], 0.5 * a[i], 1e-14);
}

TEST(Coordinates, Errors) {
  const CageMesh cage = cube_cage();
  expect_error(ErrorCode::InvalidInput, [&] { mvc_coordinates(cage, Vec3(std::nan(""), 0, 0)); });
  WeightVector wv;
  wv.w = {1.0, -1.0};
  expect_error(ErrorCode::NormalizationSingular, [&] { detail::normalise(wv); });
  wv.w = {0.0, 0.0};
  expect_error(ErrorCode::NormalizationSingular, [&] { detail::normalise(wv); });
}

}  // namespace
}  // namespace mvc
