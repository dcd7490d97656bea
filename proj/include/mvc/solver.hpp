#pragma once

#include <Eigen/SVD>
#include <optional>
#include <string>
#include <vector>

#include "mvc/deformation.hpp"
#include "mvc/derivatives.hpp"
#include "mvc/parallel.hpp"

namespace mvc {

// Linear least squares over the deformed cage positions. With unknown
// displacements x_i = pbar_i - p_i (one column per coordinate),
//   value target     sqrt(w) sum_i lambda_i(eta) x_i         = sqrt(w) (v - f_ref(eta))
//   Jacobian target  sqrt(w) sum_i d_k lambda_i(eta) x_i     = sqrt(w) (J - Jf_ref)[:, k]
//   rigidity         sqrt(w) sum_i H_ab lambda_i(eta) x_i    = -sqrt(w) H_ab f_ref
// where f_ref is the deformation induced by the reference cage itself. By
// linear precision f_ref is the identity, so f_ref = eta, Jf_ref = I and
// H f_ref = 0 are used exactly rather than summed in floating point.

struct Constraint {
  Vec3 point = Vec3::Zero();
  std::optional<Vec3> target_value;
  std::optional<Mat3> target_jacobian;
  double weight = 1.0;
};

struct RigidityTerm {
  std::vector<Vec3> sample_points;
  double weight = 0.0;
};

struct LinearSystem {
  Eigen::MatrixXd A;    // rows x cage vertices
  Eigen::MatrixXd rhs;  // rows x 3
  std::vector<std::string> row_labels;
  std::vector<Vec3> reference;
  bool gauge_row = false;
};

struct SolveResult {
  DeformedCage cage;
  double residual = 0.0;           // Frobenius norm of A x - rhs
  double relative_residual = 0.0;  // residual / (|A| |x| + |rhs|), Frobenius norms
  Eigen::Index rank = 0;
  Eigen::Index nullity = 0;
  bool rank_deficient_unconstrained = false;
};

namespace detail {

inline void check_weight(double w, const std::string& what) {
  if (!std::isfinite(w) || w < 0.0) throw Error(ErrorCode::InvalidInput, what + " weight must be finite and >= 0");
}

}  // namespace detail

/// Builds the stacked system. Without any value target the centroid of the
/// displacements is pinned to zero to remove the translational gauge.
inline LinearSystem assemble_system(const CageMesh& cage, const std::vector<Constraint>& constraints,
                                    const RigidityTerm& rigidity, const Tolerances& tol = {},
                                    unsigned threads = 1) {
  const std::size_t n = cage.vertex_count();
  bool any_value = false;
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    const Constraint& c = constraints[k];
    if (!c.target_value && !c.target_jacobian) {
      throw Error(ErrorCode::InvalidInput, "constraint " + std::to_string(k) + " has no target", k);
    }
    if (!c.point.allFinite()) throw Error(ErrorCode::InvalidInput, "non-finite constraint point", k);
    detail::check_weight(c.weight, "constraint");
    any_value = any_value || c.target_value.has_value();
  }
  detail::check_weight(rigidity.weight, "rigidity");
  if (constraints.empty() && rigidity.sample_points.empty()) {
    throw Error(ErrorCode::EmptySystem, "no constraints and no rigidity samples");
  }

  // Coordinates and derivatives per point, evaluated independently.
  struct PointData {
    std::vector<double> lambda;
    std::optional<DerivativeSet> ds;
  };
  std::vector<PointData> cdata(constraints.size());
  std::vector<PointData> rdata(rigidity.sample_points.size());
  parallel_for(constraints.size() + rigidity.sample_points.size(), threads, [&](std::size_t k) {
    if (k < constraints.size()) {
      const Constraint& c = constraints[k];
      if (c.target_jacobian) {
        try {
          cdata[k].ds = derivative_set(cage, c.point, tol, 1);
        } catch (const Error& e) {
          throw Error(e.code(), "constraint " + std::to_string(k) + ": " + e.what(), k);
        }
        cdata[k].lambda = cdata[k].ds->lambda;
      } else {
        cdata[k].lambda = mvc_coordinates(cage, c.point, tol).lambda;
      }
    } else {
      const std::size_t r = k - constraints.size();
      try {
        rdata[r].ds = derivative_set(cage, rigidity.sample_points[r], tol, 2);
      } catch (const Error& e) {
        throw Error(e.code(), "rigidity sample " + std::to_string(r) + ": " + e.what(), r);
      }
    }
  });

  std::vector<Eigen::RowVectorXd> rows;
  std::vector<Eigen::RowVector3d> rhs;
  LinearSystem sys;
  sys.reference = cage.vertices();
  auto push = [&](const Eigen::RowVectorXd& a, const Eigen::RowVector3d& b, std::string label) {
    rows.push_back(a);
    rhs.push_back(b);
    sys.row_labels.push_back(std::move(label));
  };

  for (std::size_t k = 0; k < constraints.size(); ++k) {
    const Constraint& c = constraints[k];
    const double s = std::sqrt(c.weight);
    const std::string tag = "constraint[" + std::to_string(k) + "]";
    if (c.target_value) {
      Eigen::RowVectorXd a(n);
      for (std::size_t i = 0; i < n; ++i) a[i] = cdata[k].lambda[i];
      push(s * a, s * (*c.target_value - c.point).transpose(), tag + ".value");
    }
    if (c.target_jacobian) {
      const DerivativeSet& ds = *cdata[k].ds;
      const Mat3 J = Mat3::Identity();
      for (int col = 0; col < 3; ++col) {
        Eigen::RowVectorXd a(n);
        for (std::size_t i = 0; i < n; ++i) a[i] = ds.grad_lambda[i][col];
        push(s * a, s * (c.target_jacobian->col(col) - J.col(col)).transpose(),
             tag + ".jacobian[:," + std::to_string(col) + "]");
      }
    }
  }

  if (rigidity.weight > 0.0) {
    const double s = std::sqrt(rigidity.weight);
    for (std::size_t r = 0; r < rdata.size(); ++r) {
      const DerivativeSet& ds = *rdata[r].ds;
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          Eigen::RowVectorXd row(n);
          for (std::size_t i = 0; i < n; ++i) row[i] = ds.hess_lambda[i](a, b);
          push(s * row, Eigen::RowVector3d::Zero(),
               "rigidity[" + std::to_string(r) + "].H[" + std::to_string(a) + "," + std::to_string(b) + "]");
        }
      }
    }
  }

  if (!any_value) {
    push(Eigen::RowVectorXd::Constant(n, 1.0 / static_cast<double>(n)), Eigen::RowVector3d::Zero(),
         "gauge.centroid");
    sys.gauge_row = true;
  }

  sys.A.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
  sys.rhs.resize(static_cast<Eigen::Index>(rows.size()), 3);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    sys.A.row(static_cast<Eigen::Index>(k)) = rows[k];
    sys.rhs.row(static_cast<Eigen::Index>(k)) = rhs[k];
  }
  return sys;
}

/// Least-squares solution. Among all minimisers, returns the one whose
/// displacement field has the smallest spread about its mean, so that
/// translations and other affine null directions are not introduced
/// gratuitously. Non-affine null directions are reported through
/// rank_deficient_unconstrained.
inline SolveResult solve(const LinearSystem& sys, double rank_tol = 1e-10) {
  using Eigen::Index;
  using Eigen::MatrixXd;
  if (sys.A.rows() == 0) throw Error(ErrorCode::EmptySystem, "system has no rows");
  const Index n = sys.A.cols();

  Eigen::JacobiSVD<MatrixXd> svd(sys.A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv[0] : 0.0;
  Index rank = 0;
  for (Index k = 0; k < sv.size(); ++k) {
    if (sv[k] > rank_tol * smax) ++rank;
  }

  // Minimum-norm least-squares particular solution.
  const MatrixXd Ur = svd.matrixU().leftCols(rank);
  const MatrixXd Vr = svd.matrixV().leftCols(rank);
  MatrixXd x = Vr * (sv.head(rank).cwiseInverse().asDiagonal() * (Ur.transpose() * sys.rhs));

  const Index nullity = n - rank;
  if (nullity > 0) {
    const MatrixXd N0 = svd.matrixV().rightCols(nullity);
    const MatrixXd C = MatrixXd::Identity(n, n) - MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
    const MatrixXd CN = C * N0;
    const MatrixXd y = CN.completeOrthogonalDecomposition().solve(-(C * x));
    x += N0 * y;
  }

  SolveResult out;
  out.rank = rank;
  out.nullity = nullity;
  out.residual = (sys.A * x - sys.rhs).norm();
  const double denom = sys.A.norm() * x.norm() + sys.rhs.norm();
  out.relative_residual = denom > 0.0 ? out.residual / denom : 0.0;

  // Affine displacement fields spanned by [1, p_x, p_y, p_z]; those in the
  // null space are gauge, anything beyond is unconstrained.
  MatrixXd affine(n, 4);
  for (Index i = 0; i < n; ++i) {
    const Vec3& p = sys.reference[static_cast<std::size_t>(i)];
    affine.row(i) << 1.0, p.x(), p.y(), p.z();
  }
  const MatrixXd Aa = sys.A * affine;
  Eigen::JacobiSVD<MatrixXd> asvd(Aa);
  Index arank = 0;
  for (Index k = 0; k < asvd.singularValues().size(); ++k) {
    if (asvd.singularValues()[k] > rank_tol * std::max(smax, 1e-300) * affine.norm()) ++arank;
  }
  out.rank_deficient_unconstrained = nullity > 4 - arank;

  out.cage.positions.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    out.cage.positions[static_cast<std::size_t>(i)] =
        sys.reference[static_cast<std::size_t>(i)] + x.row(i).transpose();
  }
  return out;
}

/// n^3 cell-centred lattice in the cage bounding box, minus points within
/// `band` * diagonal of the surface.
inline std::vector<Vec3> rigidity_grid(const CageMesh& cage, int n, double band = 0.05) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "grid resolution must be >= 1");
  const Vec3 lo = cage.bbox_min(), ext = cage.bbox_max() - cage.bbox_min();
  const double cut = band * cage.bbox_diagonal();
  std::vector<Vec3> out;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const Vec3 t((i + 0.5) / n, (j + 0.5) / n, (k + 0.5) / n);
        const Vec3 p = lo + ext.cwiseProduct(t);
        if (distance_to_surface(cage, p) > cut) out.push_back(p);
      }
    }
  }
  return out;
}

/// Sum over samples of the squared Frobenius norms of H(f_x), H(f_y), H(f_z).
inline double hessian_energy(const CageMesh& cage, const DeformedCage& deformed,
                             const std::vector<Vec3>& samples, const Tolerances& tol = {}) {
  double e = 0.0;
  for (const Vec3& p : samples) {
    const DeformationSample s = deformation_sample(cage, deformed, p, tol);
    for (const Mat3& h : s.hess) e += h.squaredNorm();
  }
  return e;
}

}  // namespace mvc
