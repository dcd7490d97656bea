#include "test_support.hpp"

namespace mvc {
namespace {

using namespace mvc::testing;

FDSpec step(double h, bool richardson = true) {
  FDSpec s;
  s.h = h;
  s.richardson = richardson;
  return s;
}

TEST(TriangleDerivatives, OctantMatchesFiniteDifferences) {
  const CageMesh cage = octant_cage();
  for (const Vec3& eta : {Vec3(0, 0, 0), Vec3(0.1, -0.2, 0.05), Vec3(0.4, 0.3, 0.2), Vec3(2.0, 1.0, 1.5)}) {
    const TriangleDerivatives d = triangle_derivs(cage, 0, eta);
    for (int i = 0; i < 3; ++i) {
      auto w = [&](const Vec3& p) { return triangle_weight(cage, 0, p, i); };
      const auto g = fd_gradient(w, eta, step(1e-6));
      EXPECT_LT(rel_norm(d.grad[i], g.estimate), 1e-8) << eta.transpose() << " corner " << i;
      const auto h = fd_hessian(w, eta, step(1e-4));
      EXPECT_LT(rel_norm(d.hess[i], h.estimate), 1e-5) << eta.transpose() << " corner " << i;
      EXPECT_LT((d.hess[i] - d.hess[i].transpose()).norm(), 1e-12 * d.hess[i].norm());
    }
  }
}

TEST(TriangleDerivatives, OctantCyclicSymmetry) {
  const CageMesh cage = octant_cage();
  Mat3 Q;  // e_x -> e_y -> e_z -> e_x
  Q << 0, 0, 1, 1, 0, 0, 0, 1, 0;
  const TriangleDerivatives d = triangle_derivs(cage, 0, Vec3::Zero());
  for (int i = 0; i < 3; ++i) {
    const int k = (i + 1) % 3;
    EXPECT_LT((d.grad[k] - Q * d.grad[i]).norm(), 1e-14);
    EXPECT_LT((d.hess[k] - Q * d.hess[i] * Q.transpose()).norm(), 1e-13);
  }
}

TEST(TriangleDerivatives, EachHessianTermContributes) {
  // The partials of the Jacobian of m must match differences of that
  // Jacobian, and dropping any single term must break the agreement.
  const CageMesh cage = octant_cage();
  const Tolerances tol;
  const Vec3 eta(0.15, -0.1, 0.2);
  auto jm = [&](const Vec3& p) {
    return mean_vector_jacobian(edge_quantities(build_triangle_frame(cage, 0, p), tol));
  };
  const auto edges = edge_quantities(build_triangle_frame(cage, 0, eta), tol);
  const double h = 1e-5;
  for (int c = 0; c < 3; ++c) {
    const Vec3 e = h * Vec3::Unit(c);
    const Mat3 fd = (jm(eta + e) - jm(eta - e)) / (2 * h);
    Mat3 sum = Mat3::Zero();
    for (auto term : kAllHessianTerms) {
      for (const auto& eq : edges) {
        const Mat3 v = hessian_term(term, eq, c);
        EXPECT_TRUE(v.allFinite());
        sum += v;
      }
    }
    EXPECT_LT((sum - mean_vector_jacobian_partial(edges, c)).norm(), 1e-13 * sum.norm());
    EXPECT_LT(rel_norm(sum, fd), 1e-8) << "partial " << c;
    for (auto term : kAllHessianTerms) {
      Mat3 part = Mat3::Zero();
      for (const auto& eq : edges) part += hessian_term(term, eq, c);
      if (part.norm() < 1e-6 * fd.norm()) continue;
      EXPECT_GT(rel_norm(Mat3(sum - part), fd), 1e-6) << "term " << static_cast<int>(term) << " partial " << c;
    }
  }
}

TEST(DerivativeSet, MatchesFiniteDifferences) {
  for (const TriangleSoup& soup : {shapes::cube(), shapes::l_cage(), shapes::icosphere(1)}) {
    const CageMesh cage = load_cage(soup);
    const double diag = cage.bbox_diagonal();
    for (const Vec3& eta : sample(cage, 12, 31)) {
      const DerivativeSet ds = derivative_set(cage, eta);
      for (std::size_t i = 0; i < cage.vertex_count(); i += 3) {
        auto lam = [&](const Vec3& p) { return mvc_coordinates(cage, p).lambda[i]; };
        FDSpec g = step(1e-5, false), h = step(1e-4, false);
        g.scale = h.scale = diag;
        const double gscale = std::max(ds.grad_lambda[i].norm(), 1.0 / diag);
        const double hscale = std::max(ds.hess_lambda[i].norm(), 1.0 / (diag * diag));
        EXPECT_LT((ds.grad_lambda[i] - fd_gradient(lam, eta, g).estimate).norm() / gscale, 1e-6);
        EXPECT_LT((ds.hess_lambda[i] - fd_hessian(lam, eta, h).estimate).norm() / hscale, 1e-4);
        EXPECT_LT((ds.hess_lambda[i] - ds.hess_lambda[i].transpose()).norm(), 1e-8 * hscale);
      }
    }
  }
}

TEST(DerivativeSet, IdentitySums) {
  const CageMesh cage = load_cage(shapes::l_cage());
  for (const Vec3& eta : sample(cage, 20, 41)) {
    const DerivativeSet ds = derivative_set(cage, eta);
    Vec3 g = Vec3::Zero();
    Mat3 h = Mat3::Zero(), J = Mat3::Zero();
    std::array<Mat3, 3> hp{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
    double gs = 0.0, hs = 0.0;
    for (std::size_t i = 0; i < cage.vertex_count(); ++i) {
      const Vec3& p = cage.vertices()[i];
      g += ds.grad_lambda[i];
      h += ds.hess_lambda[i];
      J += p * ds.grad_lambda[i].transpose();
      for (int c = 0; c < 3; ++c) hp[c] += p[c] * ds.hess_lambda[i];
      gs = std::max(gs, ds.grad_lambda[i].norm());
      hs = std::max(hs, ds.hess_lambda[i].norm());
    }
    EXPECT_LT(g.norm(), 1e-10 * gs);
    EXPECT_LT(h.norm(), 1e-10 * hs);
    EXPECT_LT((J - Mat3::Identity()).norm(), 1e-9);
    for (int c = 0; c < 3; ++c) EXPECT_LT(hp[c].norm(), 1e-8 * hs * cage.bbox_diagonal());
  }
}

TEST(DerivativeSet, FirstOrderOmitsHessians) {
  const CageMesh cage = cube_cage();
  const DerivativeSet a = derivative_set(cage, Vec3(0.2, 0.1, -0.3), {}, 1);
  const DerivativeSet b = derivative_set(cage, Vec3(0.2, 0.1, -0.3), {}, 2);
  EXPECT_TRUE(a.hess_lambda.empty());
  ASSERT_EQ(a.grad_lambda.size(), b.grad_lambda.size());
  for (std::size_t i = 0; i < a.grad_lambda.size(); ++i) EXPECT_EQ(a.grad_lambda[i], b.grad_lambda[i]);
}

TEST(DerivativeSet, RefusesSurfacePoints) {
  const CageMesh cage = cube_cage();
  expect_error(ErrorCode::OnSurface, [&] { derivative_set(cage, Vec3(0.2, 0.1, 1.0)); });
  expect_error(ErrorCode::OnSurface, [&] { derivative_set(cage, cage.vertices()[3]); });
  expect_error(ErrorCode::OnSurface, [&] { derivative_set(cage, Vec3(0.0, 1.0, 1.0)); });
}

TEST(DerivativeSet, RotationAndScaleCovariance) {
  const TriangleSoup soup = shapes::l_cage();
  const CageMesh cage = load_cage(soup);
  const Mat3 R = rotation(1.1, Vec3(0.3, -1, 0.4));
  const double s = 0.4;
  const Vec3 shift(1, 2, 3);
  const CageMesh moved = load_cage(transformed(soup, s * R, shift));
  for (const Vec3& eta : sample(cage, 8, 51)) {
    const DerivativeSet a = derivative_set(cage, eta);
    const DerivativeSet b = derivative_set(moved, s * R * eta + shift);
    for (std::size_t i = 0; i < cage.vertex_count(); ++i) {
      const Vec3 g = R * a.grad_lambda[i] / s;
      const Mat3 H = R * a.hess_lambda[i] * R.transpose() / (s * s);
      EXPECT_LT((b.grad_lambda[i] - g).norm(), 1e-10 * (1.0 + g.norm()));
      EXPECT_LT((b.hess_lambda[i] - H).norm(), 1e-8 * (1.0 + H.norm()));
    }
  }
}

// Planar configuration: a point in the plane of cube triangle 0 (z = -1),
// outside the triangle and outside the cage.
struct PlanarFixture : ::testing::Test {
  CageMesh cage = cube_cage();
  std::size_t t = 0;
  Vec3 foot{3.0, 0.2, -1.0};
  Vec3 n = cage.normal(0);
  TriangleFrame f = build_triangle_frame(cage, 0, foot);

  /// Normal derivative of w_i from symmetric differences across the plane.
  double normal_fd(int i) const {
    auto w = [&](const Vec3& p) { return triangle_weight(cage, t, p, i); };
    return fd_directional(w, foot, n, step(1e-3)).estimate[0];
  }
};

TEST_F(PlanarFixture, GradientIsNormalAndMatchesDifferences) {
  ASSERT_EQ(f.classification, FrameClass::OnSupportPlaneOutsideT);
  const auto g = triangle_gradients_planar(f);
  const TriangleDerivatives d = triangle_derivs(cage, t, foot);
  EXPECT_EQ(d.source, DerivativeSource::PlanarFormula);
  for (int i = 0; i < 3; ++i) {
    EXPECT_LT((g[i] - g[i].dot(n) * n).norm(), 1e-15 * g[i].norm());
    EXPECT_LE(rel(g[i].dot(n), normal_fd(i)), 1e-7) << "corner " << i;
    EXPECT_EQ(d.grad[i], g[i]);
    // Limit of the general formula approaching the plane.
    const Vec3 off = foot + 1e-4 * n;
    const TriangleFrame fo = build_triangle_frame(cage, t, off);
    const auto go = triangle_gradients(fo, triangle_weights(fo));
    EXPECT_LT(rel_norm(go[i], g[i]), 1e-3);
  }
}

TEST_F(PlanarFixture, PublishedThirdTermFailsDifferences) {
  // The alternative form replaces -(N_i.N_j) / 2D^2 with
  // cos(theta) eq3(theta) (N_i.N_j) / 2D^2.
  const auto dn = planar_normal_derivatives(f);
  for (int i = 0; i < 3; ++i) {
    double extra = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double D = f.d[(j + 1) % 3] * f.d[(j + 2) % 3];
      const double nn = f.N[i].dot(f.N[j]);
      const double c = std::cos(f.theta[j]);
      extra += (c * eval_kernel(KernelId::eq3, f.theta[j]) + 1.0) * nn / (2.0 * D * D);
    }
    const double published = dn[i] - extra / (2.0 * f.area);
    const double ref = normal_fd(i);
    EXPECT_LE(rel(dn[i], ref), 1e-7);
    EXPECT_GT(rel(published, ref), 1e-3) << "corner " << i;
  }
}

TEST_F(PlanarFixture, FullHessianMatchesDifferencesRankOneDoesNot) {
  const auto full = triangle_hessians_planar_full(f);
  const auto one = triangle_hessians_planar(f);
  const double L = f.mean_edge;
  for (int i = 0; i < 3; ++i) {
    auto grad = [&](const Vec3& p) { return triangle_derivs(cage, t, p, 1).grad[i]; };
    FDSpec s = step(1e-4);
    s.scale = L;
    const Mat3 fd = fd_hessian_from_gradient(grad, foot, s).estimate;
    EXPECT_LT(rel_norm(full[i], fd), 1e-5) << "corner " << i;
    EXPECT_GT(rel_norm(one[i], fd), 0.1) << "corner " << i;
    EXPECT_LT((full[i] - full[i].transpose()).norm(), 1e-15 * full[i].norm());
    // n^T H n is the second normal derivative, which vanishes on the plane.
    EXPECT_LT(std::abs(n.dot(full[i] * n)), 1e-12 * full[i].norm());
  }
}

TEST_F(PlanarFixture, NearPlaneRoutesAgreeWithDifferences) {
  for (double s : {1e-9, 1e-5, 1e-3, 5e-3, 1.5e-2, 3e-2}) {
    const Vec3 eta = foot + s * n;
    const TriangleDerivatives d = triangle_derivs(cage, t, eta);
    for (int i = 0; i < 3; ++i) {
      auto w = [&](const Vec3& p) { return triangle_weight(cage, t, p, i); };
      auto grad = [&](const Vec3& p) { return triangle_derivs(cage, t, p, 1).grad[i]; };
      FDSpec gs = step(1e-6), hs = step(1e-5);
      gs.scale = hs.scale = f.mean_edge;
      const Vec3 gfd = fd_gradient(w, eta, gs).estimate;
      const Mat3 hfd = fd_hessian_from_gradient(grad, eta, hs).estimate;
      EXPECT_LT(rel_norm(d.grad[i], gfd), 1e-6) << "s=" << s << " corner " << i;
      EXPECT_LT(rel_norm(d.hess[i], hfd), 1e-5) << "s=" << s << " corner " << i;
    }
  }
}

TEST_F(PlanarFixture, DerivativesContinuousAcrossRouteBoundaries) {
  const Tolerances tol;
  const double R = (closest_point_on_triangle(foot, cage.corner(t, 0), cage.corner(t, 1), cage.corner(t, 2)) - foot)
                       .norm();
  const double s0 = offset_kappa(R, f.mean_edge, tol) * R;
  const double sw = tol.eps_switch * std::min(R, f.mean_edge);
  for (double s : {s0, sw, -s0, -sw}) {
    const TriangleDerivatives a = triangle_derivs(cage, t, foot + s * (1 - 1e-9) * n);
    const TriangleDerivatives b = triangle_derivs(cage, t, foot + s * (1 + 1e-9) * n);
    for (int i = 0; i < 3; ++i) {
      EXPECT_LT(rel_norm(a.grad[i], b.grad[i]), 1e-7) << "s=" << s;
      EXPECT_LT(rel_norm(a.hess[i], b.hess[i]), 1e-5) << "s=" << s;
    }
  }
}

}  // namespace
}  // namespace mvc
