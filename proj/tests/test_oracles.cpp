#include "test_support.hpp"

namespace mvc {
namespace {

using namespace mvc::testing;
using std::numbers::pi;

const Vec3 ex = Vec3::UnitX(), ey = Vec3::UnitY(), ez = Vec3::UnitZ();

TEST(Quadrature, OctantTriangle) {
  QuadratureSpec spec;
  spec.tolerance = 1e-9;
  const QuadratureResult r = triangle_quadrature(ex, ey, ez, Vec3::Zero(), spec);
  EXPECT_TRUE(r.converged);
  for (double v : r.value) EXPECT_LE(rel(v, pi / 4), 1e-8);
  EXPECT_LT(r.error, 1e-7);
}

TEST(Quadrature, UniformRuleConvergesAtSecondOrder) {
  const Vec3 eta(0.3, -0.2, -0.4);
  const double ref = triangle_quadrature(ex, ey, ez, eta, {1, 1e-12, 16}).value[0];
  double previous = 0.0;
  for (int level = 2; level <= 5; ++level) {
    const double err = std::abs(triangle_quadrature_uniform(ex, ey, ez, eta, level)[0] - ref);
    if (level > 2) {
      EXPECT_GT(previous / err, 3.5) << "level " << level;
    }
    previous = err;
  }
}

TEST(Quadrature, FarFieldAsymptotics) {
  // Far away the three weights sum to -area / d^3 on the side the normal
  // points to.
  const Vec3 c = (ex + ey + ez) / 3.0;
  const Vec3 n = Vec3::Ones().normalized();
  const double area = std::sqrt(3.0) / 2.0;
  for (double d : {50.0, 200.0}) {
    const QuadratureResult r = triangle_quadrature(ex, ey, ez, c + d * n);
    const double sum = r.value[0] + r.value[1] + r.value[2];
    EXPECT_LE(rel(sum, -area / (d * d * d)), 1e-3) << d;
    EXPECT_LE(rel(r.value[0], r.value[1]), 1e-3);
  }
}

TEST(Quadrature, MatchesClosedFormPerTriangle) {
  const CageMesh cage = load_cage(shapes::icosphere(1));
  QuadratureSpec spec;
  spec.tolerance = 1e-8;
  for (const Vec3& eta : sample(cage, 4, 81, 0.05)) {
    for (std::size_t t = 0; t < cage.triangle_count(); t += 7) {
      const TriangleFrame f = build_triangle_frame(cage, t, eta);
      const TriangleWeights w = dispatch_triangle_weights(cage, t, eta, f);
      const QuadratureResult q = quadrature_weight(cage, t, eta, spec);
      for (int i = 0; i < 3; ++i) EXPECT_LE(std::abs(q.value[i] - w.w[i]), 1e-6 * std::abs(w.w[i]) + 1e-12);
    }
  }
}

TEST(Quadrature, Errors) {
  expect_error(ErrorCode::InvalidInput, [] { triangle_quadrature(ex, ey, ez, Vec3(-1, -1, 3)); });
  expect_error(ErrorCode::InvalidInput, [] { triangle_quadrature(ex, ey, ez, Vec3::Zero(), {0, 1e-6, 14}); });
  expect_error(ErrorCode::InvalidInput, [] { triangle_quadrature(ex, ey, ez, Vec3::Zero(), {1, 0.0, 14}); });
}

TEST(SphericalExcess, CubeCentre) {
  const CageMesh cage = cube_cage();
  const WeightVector ju = ju_robust_weights(cage, Vec3::Zero());
  const WeightVector mv = mvc_coordinates(cage, Vec3::Zero());
  double s = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_NEAR(ju.lambda[i], mv.lambda[i], 1e-12);
    s += ju.lambda[i];
  }
  EXPECT_NEAR(s, 1.0, 1e-14);
}

TEST(SphericalExcess, TetrahedronCentroid) {
  const WeightVector ju = ju_robust_weights(load_cage(shapes::tetrahedron()), Vec3::Zero());
  for (double l : ju.lambda) EXPECT_NEAR(l, 0.25, 1e-14);
}

TEST(SphericalExcess, SurfacePoints) {
  const CageMesh cage = cube_cage();
  const WeightVector face = ju_robust_weights(cage, Vec3(0.2, -0.3, 1.0));
  EXPECT_TRUE(face.on_surface);
  const WeightVector direct = mvc_coordinates(cage, Vec3(0.2, -0.3, 1.0));
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(face.lambda[i], direct.lambda[i], 1e-9);
  const WeightVector vert = ju_robust_weights(cage, cage.vertices()[6]);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(vert.lambda[i], i == 6 ? 1.0 : 0.0);
}

TEST(SphericalExcess, AgreesAcrossCages) {
  for (const TriangleSoup& soup : {shapes::l_cage(), shapes::icosphere(2)}) {
    const CageMesh cage = load_cage(soup);
    for (const Vec3& eta : sample(cage, 10, 83, 0.02)) {
      const auto a = ju_robust_weights(cage, eta).lambda;
      const auto b = mvc_coordinates(cage, eta).lambda;
      for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-10);
    }
  }
}

TEST(FiniteDifferences, ExactForLowDegree) {
  const Vec3 a(1.0, -2.0, 0.5);
  auto linear = [&](const Vec3& p) { return a.dot(p) + 3.0; };
  const Vec3 x(0.3, 0.7, -0.2);
  const auto g = fd_gradient(linear, x);
  EXPECT_LT((g.estimate - a).norm(), 1e-10);
  EXPECT_LT(g.error_indicator.maxCoeff(), 1e-9);

  Mat3 Q;
  Q << 2, 1, 0, 1, 3, -1, 0, -1, 4;
  auto quad = [&](const Vec3& p) { return 0.5 * p.dot(Q * p) + a.dot(p); };
  FDSpec hs;
  hs.h = 1e-3;
  EXPECT_LT((fd_hessian(quad, x, hs).estimate - Q).norm(), 1e-6);
  EXPECT_LT((fd_gradient(quad, x).estimate - (Q * x + a)).norm(), 1e-9);
  auto grad = [&](const Vec3& p) -> Vec3 { return Q * p + a; };
  EXPECT_LT((fd_hessian_from_gradient(grad, x).estimate - Q).norm(), 1e-9);
  auto field = [&](const Vec3& p) -> Eigen::VectorXd { return Q * p; };
  EXPECT_LT((fd_jacobian(field, x).estimate - Eigen::MatrixXd(Q)).norm(), 1e-9);
}

TEST(FiniteDifferences, HalvingIndicatorTracksError) {
  auto f = [](const Vec3& p) { return std::sin(p.x()) * std::exp(p.y()) + p.z() * p.z() * p.z(); };
  const Vec3 x(0.4, 0.1, 0.7);
  const Vec3 exact(std::cos(0.4) * std::exp(0.1), std::sin(0.4) * std::exp(0.1), 3.0 * 0.49);
  FDSpec spec;
  spec.h = 1e-3;
  const auto r = fd_gradient(f, x, spec);
  const double err = (r.estimate - exact).cwiseAbs().maxCoeff();
  const double ind = r.error_indicator.maxCoeff();
  // Second-order error: D(h) - D(h/2) is three times the error of D(h/2).
  EXPECT_NEAR(ind / err, 3.0, 0.1);
  spec.richardson = true;
  EXPECT_LT((fd_gradient(f, x, spec).estimate - exact).norm(), 1e-11);
  const auto d = fd_directional(f, x, Vec3::UnitZ(), spec);
  EXPECT_NEAR(d.estimate[0], 3.0 * 0.49, 1e-10);
  EXPECT_NEAR(d.estimate[1], 6.0 * 0.7, 1e-6);
}

TEST(FiniteDifferences, Errors) {
  auto throws_far = [](const Vec3& p) -> double {
    if (p.x() > 1.0) throw Error(ErrorCode::OnSurface, "boom");
    return p.x();
  };
  FDSpec spec;
  spec.h = 1e-3;
  try {
    fd_gradient(throws_far, Vec3(1.0, 0, 0), spec);
    ADD_FAILURE() << "expected EvaluatorFailed";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EvaluatorFailed);
    ASSERT_TRUE(e.index().has_value());
    EXPECT_EQ(*e.index(), 0u);
  }
  auto ok = [](const Vec3& p) { return p.x(); };
  FDSpec big;
  big.h = 1e-2;
  expect_error(ErrorCode::InvalidInput, [&] { fd_gradient(ok, Vec3::Zero(), big); });
  FDSpec zero;
  zero.h = 0.0;
  expect_error(ErrorCode::InvalidInput, [&] { fd_hessian(ok, Vec3::Zero(), zero); });
}

}  // namespace
}  // namespace mvc
