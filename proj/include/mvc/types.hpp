#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace mvc {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

enum class ErrorCode {
  InvalidInput,
  NotClosed,
  NonManifoldEdge,
  DegenerateTriangle,
  InconsistentOrientation,
  VertexCoincidence,
  DomainError,
  WrongClassification,
  OnSurface,
  NormalizationSingular,
  EmptySystem,
  NotConverged,
  EvaluatorFailed,
  ParseError,
  VertexCountMismatch,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::NonManifoldEdge: return "NonManifoldEdge";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::InconsistentOrientation: return "InconsistentOrientation";
    case ErrorCode::VertexCoincidence: return "VertexCoincidence";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::WrongClassification: return "WrongClassification";
    case ErrorCode::OnSurface: return "OnSurface";
    case ErrorCode::NormalizationSingular: return "NormalizationSingular";
    case ErrorCode::EmptySystem: return "EmptySystem";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::EvaluatorFailed: return "EvaluatorFailed";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::VertexCountMismatch: return "VertexCountMismatch";
  }
  return "Unknown";
}

/// Every failure in the library is reported as an mvc::Error carrying a
/// machine-readable code. `index` names the offending element (triangle,
/// vertex, line or stencil point) when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

/// Numerical thresholds shared by every module. Distances are relative:
/// eps_plane and eps_switch to the mean edge length of the triangle at hand,
/// eps_vertex to the cage bounding-box diagonal, eps_area to its square.
struct Tolerances {
  double eps_plane = 1e-9;
  double eps_vertex = 1e-12;
  double eps_switch = 1e-7;
  double eps_area = 1e-14;
  double eps_theta = 0.5;    // series / closed-form seam of the kernels
  double eps_pi = 1e-9;      // kernels refuse theta >= pi - eps_pi
  double eps_offset = 1e-2;  // base width of the near-plane offset band
};

inline Mat3 skew(const Vec3& k) {
  Mat3 m;
  m << 0.0, -k.z(), k.y(),
       k.z(), 0.0, -k.x(),
       -k.y(), k.x(), 0.0;
  return m;
}

}  // namespace mvc
