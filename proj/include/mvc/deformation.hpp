#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mvc/derivatives.hpp"
#include "mvc/parallel.hpp"
#include "mvc/weights.hpp"

namespace mvc {

/// Target positions of the cage vertices, indexed like the reference cage.
struct DeformedCage {
  std::vector<Vec3> positions;
};

inline void check_deformed(const CageMesh& cage, const DeformedCage& deformed) {
  if (deformed.positions.size() != cage.vertex_count()) {
    throw Error(ErrorCode::VertexCountMismatch,
                "deformed cage has " + std::to_string(deformed.positions.size()) +
                    " vertices, reference has " + std::to_string(cage.vertex_count()));
  }
  for (std::size_t i = 0; i < deformed.positions.size(); ++i) {
    if (!deformed.positions[i].allFinite()) {
      throw Error(ErrorCode::InvalidInput, "non-finite deformed vertex", i);
    }
  }
}

/// f(eta), Jf(eta) and the Hessians of the three components of f.
struct DeformationSample {
  Vec3 value = Vec3::Zero();
  Mat3 jacobian = Mat3::Zero();
  std::array<Mat3, 3> hess{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
};

/// f = sum_i lambda_i pbar_i for precomputed coordinates.
inline Vec3 apply_coordinates(const std::vector<double>& lambda, const DeformedCage& deformed) {
  Vec3 f = Vec3::Zero();
  for (std::size_t i = 0; i < lambda.size(); ++i) f += lambda[i] * deformed.positions[i];
  return f;
}

/// Jf = sum_i pbar_i grad(lambda_i)^T, H(f_c) = sum_i pbar_i[c] H(lambda_i).
inline DeformationSample apply_derivatives(const DerivativeSet& ds, const DeformedCage& deformed) {
  DeformationSample s;
  s.value = apply_coordinates(ds.lambda, deformed);
  for (std::size_t i = 0; i < ds.lambda.size(); ++i) {
    const Vec3& p = deformed.positions[i];
    s.jacobian += p * ds.grad_lambda[i].transpose();
    if (!ds.hess_lambda.empty()) {
      for (int c = 0; c < 3; ++c) s.hess[c] += p[c] * ds.hess_lambda[i];
    }
  }
  return s;
}

inline Vec3 deform_point(const CageMesh& cage, const DeformedCage& deformed, const Vec3& eta,
                         const Tolerances& tol = {}) {
  check_deformed(cage, deformed);
  return apply_coordinates(mvc_coordinates(cage, eta, tol).lambda, deformed);
}

/// Value and derivatives of the deformation; OnSurface if eta is on the cage.
inline DeformationSample deformation_sample(const CageMesh& cage, const DeformedCage& deformed,
                                            const Vec3& eta, const Tolerances& tol = {}) {
  check_deformed(cage, deformed);
  return apply_derivatives(derivative_set(cage, eta, tol, 2), deformed);
}

enum class PointStatus { Ok, OnSurface, Singular, Failed };

inline const char* to_string(PointStatus s) {
  switch (s) {
    case PointStatus::Ok: return "ok";
    case PointStatus::OnSurface: return "on_surface";
    case PointStatus::Singular: return "singular";
    case PointStatus::Failed: return "failed";
  }
  return "?";
}

/// Coordinates of a fixed set of embedded points with respect to the
/// reference cage, computed once and applied to any number of deformed cages.
class CageEmbedding {
 public:
  struct Entry {
    PointStatus status = PointStatus::Ok;
    std::vector<double> lambda;
    std::string message;
  };

  CageEmbedding(const CageMesh& cage, std::vector<Vec3> points, const Tolerances& tol = {},
                unsigned threads = 1)
      : cage_(&cage), points_(std::move(points)), entries_(points_.size()) {
    parallel_for(points_.size(), threads, [&](std::size_t k) {
      Entry& e = entries_[k];
      try {
        WeightVector wv = mvc_coordinates(cage, points_[k], tol);
        e.lambda = std::move(wv.lambda);
        if (wv.on_surface) e.status = PointStatus::OnSurface;
      } catch (const Error& err) {
        e.status = err.code() == ErrorCode::NormalizationSingular ? PointStatus::Singular
                                                                  : PointStatus::Failed;
        e.message = err.what();
      }
    });
  }

  const std::vector<Vec3>& points() const { return points_; }
  const std::vector<Entry>& entries() const { return entries_; }

  /// Deformed positions; points whose coordinates failed keep their input
  /// position and are reported through entries().
  std::vector<Vec3> apply(const DeformedCage& deformed) const {
    check_deformed(*cage_, deformed);
    std::vector<Vec3> out(points_.size());
    for (std::size_t k = 0; k < points_.size(); ++k) {
      const Entry& e = entries_[k];
      out[k] = e.lambda.empty() ? points_[k] : apply_coordinates(e.lambda, deformed);
    }
    return out;
  }

 private:
  const CageMesh* cage_;
  std::vector<Vec3> points_;
  std::vector<Entry> entries_;
};

/// Moves every vertex of an embedded mesh with the cage; connectivity is
/// copied unchanged. Throws the first per-vertex failure with its index.
inline TriangleSoup deform_mesh(const CageMesh& cage, const DeformedCage& deformed,
                                const TriangleSoup& mesh, const Tolerances& tol = {},
                                unsigned threads = 1) {
  const CageEmbedding embedding(cage, mesh.vertices, tol, threads);
  for (std::size_t k = 0; k < embedding.entries().size(); ++k) {
    const auto& e = embedding.entries()[k];
    if (e.status == PointStatus::Singular || e.status == PointStatus::Failed) {
      throw Error(e.status == PointStatus::Singular ? ErrorCode::NormalizationSingular
                                                    : ErrorCode::InvalidInput,
                  "embedded vertex " + std::to_string(k) + ": " + e.message, k);
    }
  }
  return {embedding.apply(deformed), mesh.triangles};
}

/// Batch result for one point: value always (when coordinates exist),
/// derivatives only off the surface.
struct SampleResult {
  PointStatus status = PointStatus::Ok;
  std::optional<Vec3> value;
  std::optional<DeformationSample> sample;
  std::string message;
};

inline std::vector<SampleResult> deformation_samples(const CageMesh& cage, const DeformedCage& deformed,
                                                     const std::vector<Vec3>& points,
                                                     const Tolerances& tol = {}, unsigned threads = 1) {
  check_deformed(cage, deformed);
  std::vector<SampleResult> out(points.size());
  parallel_for(points.size(), threads, [&](std::size_t k) {
    SampleResult& r = out[k];
    try {
      r.sample = deformation_sample(cage, deformed, points[k], tol);
      r.value = r.sample->value;
    } catch (const Error& err) {
      r.message = err.what();
      if (err.code() == ErrorCode::OnSurface) {
        r.status = PointStatus::OnSurface;
        r.value = deform_point(cage, deformed, points[k], tol);
      } else if (err.code() == ErrorCode::NormalizationSingular) {
        r.status = PointStatus::Singular;
      } else {
        r.status = PointStatus::Failed;
      }
    }
  });
  return out;
}

}  // namespace mvc
