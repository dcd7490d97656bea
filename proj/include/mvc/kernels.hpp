#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string_view>

#include "mvc/detail/kernel_series.hpp"
#include "mvc/types.hpp"

namespace mvc {

// Trigonometric kernels with a removable singularity at 0:
//   eq1 = (cos x sin x - x) / sin^3 x        eq2 = x / sin x
//   eq3 = (cos x - 1) / sin^2 x
//   eq4 = (2 cos x sin^3 x + 3 (sin x cos x - x)) / sin^5 x
//   eq5 = (cos x sin^2 x (1 - 2 cos x) - 2 cos^2 x + 2 cos x) / sin^4 x
//   eq6 = eq1'(x) cos x / sin x              eq7 = eq1'(x) sin x
//   eq8 = eq2'(x) cos x / sin x              eq9 = eq2'(x) sin x
// Below eps_theta every kernel is evaluated from its Taylor series (even in
// x, 14 terms, see scripts/derive_kernel_series.py); the closed forms lose
// about 1/x^2 relative digits to cancellation.

enum class KernelId { eq1, eq2, eq3, eq4, eq5, eq6, eq7, eq8, eq9 };

inline constexpr std::array<KernelId, 9> kAllKernels = {
    KernelId::eq1, KernelId::eq2, KernelId::eq3, KernelId::eq4, KernelId::eq5,
    KernelId::eq6, KernelId::eq7, KernelId::eq8, KernelId::eq9};

inline std::string_view to_string(KernelId k) {
  static constexpr std::array<std::string_view, 9> names = {
      "eq1", "eq2", "eq3", "eq4", "eq5", "eq6", "eq7", "eq8", "eq9"};
  return names[static_cast<std::size_t>(k)];
}

namespace detail {

template <std::size_t N>
inline double even_series(const std::array<double, N>& c, double x) {
  const double x2 = x * x;
  double r = 0.0;
  for (std::size_t k = N; k-- > 0;) r = r * x2 + c[k];
  return r;
}

inline void check_kernel_domain(double theta, const Tolerances& tol) {
  if (!(theta >= 0.0) || theta >= std::numbers::pi - tol.eps_pi) {
    throw Error(ErrorCode::DomainError,
                "kernel argument outside [0, pi - eps_pi): " + std::to_string(theta));
  }
}

struct Trig {
  double x, s, c;
};

inline double closed_eq1(const Trig& t) { return (t.c * t.s - t.x) / (t.s * t.s * t.s); }
inline double closed_eq2(const Trig& t) { return t.x / t.s; }
inline double closed_deq1(const Trig& t) {
  const double s4 = t.s * t.s * t.s * t.s;
  return -2.0 / t.s - 3.0 * t.c * (t.c * t.s - t.x) / s4;
}
inline double closed_deq2(const Trig& t) { return (t.s - t.x * t.c) / (t.s * t.s); }

}  // namespace detail

/// eq_k(theta); DomainError outside [0, pi - eps_pi).
inline double eval_kernel(KernelId k, double theta, const Tolerances& tol = {}) {
  using namespace detail;
  check_kernel_domain(theta, tol);
  if (theta < tol.eps_theta) {
    switch (k) {
      case KernelId::eq1: return even_series(k_eq1_series, theta);
      case KernelId::eq2: return even_series(k_eq2_series, theta);
      case KernelId::eq3: return even_series(k_eq3_series, theta);
      case KernelId::eq4: return even_series(k_eq4_series, theta);
      case KernelId::eq5: return even_series(k_eq5_series, theta);
      case KernelId::eq6: return even_series(k_eq6_series, theta);
      case KernelId::eq7: return even_series(k_eq7_series, theta);
      case KernelId::eq8: return even_series(k_eq8_series, theta);
      case KernelId::eq9: return even_series(k_eq9_series, theta);
    }
  }
  const Trig t{theta, std::sin(theta), std::cos(theta)};
  const double s = t.s, c = t.c;
  switch (k) {
    case KernelId::eq1: return closed_eq1(t);
    case KernelId::eq2: return closed_eq2(t);
    case KernelId::eq3: return (c - 1.0) / (s * s);
    case KernelId::eq4:
      return (2.0 * c * s * s * s + 3.0 * (s * c - theta)) / (s * s * s * s * s);
    case KernelId::eq5:
      return (c * s * s * (1.0 - 2.0 * c) - 2.0 * c * c + 2.0 * c) / (s * s * s * s);
    case KernelId::eq6: return closed_deq1(t) * c / s;
    case KernelId::eq7: return closed_deq1(t) * s;
    case KernelId::eq8: return closed_deq2(t) * c / s;
    case KernelId::eq9: return closed_deq2(t) * s;
  }
  return 0.0;
}

/// d(eq1)/dtheta or d(eq2)/dtheta. Only eq1 and eq2 are accepted.
inline double eval_kernel_derivative(KernelId k, double theta, const Tolerances& tol = {}) {
  using namespace detail;
  if (k != KernelId::eq1 && k != KernelId::eq2) {
    throw Error(ErrorCode::InvalidInput, "kernel derivative is only provided for eq1 and eq2");
  }
  check_kernel_domain(theta, tol);
  if (theta < tol.eps_theta) {
    return theta * (k == KernelId::eq1 ? even_series(k_deq1_over_x_series, theta)
                                       : even_series(k_deq2_over_x_series, theta));
  }
  const Trig t{theta, std::sin(theta), std::cos(theta)};
  return k == KernelId::eq1 ? closed_deq1(t) : closed_deq2(t);
}

/// The kernels the derivative formulas consume, evaluated together.
struct KernelSet {
  double eq1 = 0.0, eq2 = 0.0, eq6 = 0.0, eq7 = 0.0, eq8 = 0.0, eq9 = 0.0;
};

inline KernelSet eval_kernel_set(double theta, const Tolerances& tol = {}) {
  using namespace detail;
  check_kernel_domain(theta, tol);
  KernelSet k;
  if (theta < tol.eps_theta) {
    k.eq1 = even_series(k_eq1_series, theta);
    k.eq2 = even_series(k_eq2_series, theta);
    k.eq6 = even_series(k_eq6_series, theta);
    k.eq7 = even_series(k_eq7_series, theta);
    k.eq8 = even_series(k_eq8_series, theta);
    k.eq9 = even_series(k_eq9_series, theta);
    return k;
  }
  const Trig t{theta, std::sin(theta), std::cos(theta)};
  const double d1 = closed_deq1(t), d2 = closed_deq2(t);
  k.eq1 = closed_eq1(t);
  k.eq2 = closed_eq2(t);
  k.eq6 = d1 * t.c / t.s;
  k.eq7 = d1 * t.s;
  k.eq8 = d2 * t.c / t.s;
  k.eq9 = d2 * t.s;
  return k;
}

}  // namespace mvc
