#pragma once

// Reproducible elementary functions.
//
// libm's transcendentals are only accurate, not identical, across platforms
// and C libraries. Everything here is built from operations IEEE 754 requires
// to be correctly rounded (+, -, *, /, sqrt) plus the exact frexp/ldexp/floor,
// evaluated in a fixed order, so results are bit-identical on any conforming
// double implementation. Accuracy is ~1 ulp worse than libm, which is fine:
// these back the simulator and interpolation kernels, whose outputs are
// golden-tested byte-for-byte.
//
// Compile with FP contraction off; a fused multiply-add would change results.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>

namespace mapeval::detmath {

inline constexpr double kPi = 3.14159265358979311600e+00;      // 0x400921FB54442D18
inline constexpr double kPio2Hi = 1.57079632679489655800e+00;  // 0x3FF921FB54442D18
inline constexpr double kPio2Lo = 6.12323399573676603587e-17;  // 0x3C91A62633145C07
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;   // 0x3FE62E42FEE00000
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;   // 0x3DEA39EF35793C76
inline constexpr double kInvLn2 = 1.44269504088896338700e+00;
inline constexpr double kTwoOverPi = 6.36619772367581382433e-01;

// ln(x) via frexp reduction and the atanh series on m in [sqrt(1/2), sqrt(2)).
inline double log(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("detmath::log: argument must be finite and positive");
  }
  int e = 0;
  double m = std::frexp(x, &e);  // m in [0.5, 1)
  if (m < 0.70710678118654752440) {
    m = m * 2.0;
    e -= 1;
  }
  const double r = (m - 1.0) / (m + 1.0);  // |r| <= 0.1716
  const double r2 = r * r;
  double s = 1.0 / 23.0;
  s = s * r2 + 1.0 / 21.0;
  s = s * r2 + 1.0 / 19.0;
  s = s * r2 + 1.0 / 17.0;
  s = s * r2 + 1.0 / 15.0;
  s = s * r2 + 1.0 / 13.0;
  s = s * r2 + 1.0 / 11.0;
  s = s * r2 + 1.0 / 9.0;
  s = s * r2 + 1.0 / 7.0;
  s = s * r2 + 1.0 / 5.0;
  s = s * r2 + 1.0 / 3.0;
  const double lnm = 2.0 * r + 2.0 * r * (r2 * s);
  const double ed = static_cast<double>(e);
  return ed * kLn2Hi + (lnm + ed * kLn2Lo);
}

inline double exp(double x) {
  if (std::isnan(x)) {
    throw std::domain_error("detmath::exp: argument is NaN");
  }
  if (x > 709.0) return std::numeric_limits<double>::infinity();
  if (x < -745.0) return 0.0;
  const double kd = std::floor(x * kInvLn2 + 0.5);
  const int k = static_cast<int>(kd);
  const double r = (x - kd * kLn2Hi) - kd * kLn2Lo;  // |r| <= ln2/2
  double p = 1.0 / 6227020800.0;                     // 1/13!
  p = p * r + 1.0 / 479001600.0;
  p = p * r + 1.0 / 39916800.0;
  p = p * r + 1.0 / 3628800.0;
  p = p * r + 1.0 / 362880.0;
  p = p * r + 1.0 / 40320.0;
  p = p * r + 1.0 / 5040.0;
  p = p * r + 1.0 / 720.0;
  p = p * r + 1.0 / 120.0;
  p = p * r + 1.0 / 24.0;
  p = p * r + 1.0 / 6.0;
  p = p * r + 0.5;
  p = p * r + 1.0;
  p = p * r + 1.0;
  return std::ldexp(p, k);
}

namespace detail {

// Both polynomials assume |r| <= pi/4 + reduction slack.
inline double sin_poly(double r) {
  const double r2 = r * r;
  double p = -1.0 / 1307674368000.0;  // -1/15!
  p = p * r2 + 1.0 / 6227020800.0;
  p = p * r2 - 1.0 / 39916800.0;
  p = p * r2 + 1.0 / 362880.0;
  p = p * r2 - 1.0 / 5040.0;
  p = p * r2 + 1.0 / 120.0;
  p = p * r2 - 1.0 / 6.0;
  return r + r * (r2 * p);
}

inline double cos_poly(double r) {
  const double r2 = r * r;
  double p = 1.0 / 20922789888000.0;  // 1/16!
  p = p * r2 - 1.0 / 87178291200.0;
  p = p * r2 + 1.0 / 479001600.0;
  p = p * r2 - 1.0 / 3628800.0;
  p = p * r2 + 1.0 / 40320.0;
  p = p * r2 - 1.0 / 720.0;
  p = p * r2 + 1.0 / 24.0;
  p = p * r2 - 0.5;
  return 1.0 + r2 * p;
}

// Quadrant reduction: x = n*(pi/2) + r with |r| <= pi/4. The two-part pi/2
// keeps r accurate for the argument range these kernels see (|x| well under
// 1e6; interpolation angles never exceed pi).
inline std::pair<double, int> reduce_pio2(double x) {
  const double nd = std::floor(x * kTwoOverPi + 0.5);
  const double r = (x - nd * kPio2Hi) - nd * kPio2Lo;
  const int q = static_cast<int>(nd - std::floor(nd / 4.0) * 4.0);
  return {r, q};
}

}  // namespace detail

inline double sin(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("detmath::sin: argument must be finite");
  }
  const auto [r, q] = detail::reduce_pio2(x);
  switch (q) {
    case 0: return detail::sin_poly(r);
    case 1: return detail::cos_poly(r);
    case 2: return -detail::sin_poly(r);
    default: return -detail::cos_poly(r);
  }
}

inline double cos(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("detmath::cos: argument must be finite");
  }
  const auto [r, q] = detail::reduce_pio2(x);
  switch (q) {
    case 0: return detail::cos_poly(r);
    case 1: return -detail::sin_poly(r);
    case 2: return -detail::cos_poly(r);
    default: return detail::sin_poly(r);
  }
}

namespace detail {

inline constexpr std::array<double, 32> make_asin_coeffs() {
  // asin(x) = sum_k c_k x^(2k+1), c_0 = 1,
  // c_{k+1} = c_k (2k+1)^2 / ((2k+2)(2k+3)); converges fast for |x| <= 0.5.
  std::array<double, 32> c{};
  c[0] = 1.0;
  for (int k = 0; k + 1 < 32; ++k) {
    const double n = 2.0 * k + 1.0;
    c[k + 1] = c[k] * (n * n) / ((n + 1.0) * (n + 2.0));
  }
  return c;
}

inline constexpr std::array<double, 32> kAsinCoeffs = make_asin_coeffs();

inline double asin_core(double x) {  // |x| <= 0.5
  const double x2 = x * x;
  double p = kAsinCoeffs[31];
  for (int k = 30; k >= 0; --k) {
    p = p * x2 + kAsinCoeffs[k];
  }
  return x * p;
}

}  // namespace detail

inline double asin(double x) {
  if (!(x >= -1.0 && x <= 1.0)) {
    throw std::domain_error("detmath::asin: argument must lie in [-1, 1]");
  }
  const double ax = x < 0.0 ? -x : x;
  if (ax <= 0.5) {
    return detail::asin_core(x);
  }
  const double s = std::sqrt((1.0 - ax) * 0.5);
  const double v = (kPio2Hi - 2.0 * detail::asin_core(s)) + kPio2Lo;
  return x < 0.0 ? -v : v;
}

inline double acos(double x) {
  if (!(x >= -1.0 && x <= 1.0)) {
    throw std::domain_error("detmath::acos: argument must lie in [-1, 1]");
  }
  if (x > 0.5) {
    // 2*asin(sqrt((1-x)/2)); avoids cancellation as x -> 1.
    return 2.0 * detail::asin_core(std::sqrt((1.0 - x) * 0.5));
  }
  if (x < -0.5) {
    return kPi - 2.0 * detail::asin_core(std::sqrt((1.0 + x) * 0.5));
  }
  return (kPio2Hi - detail::asin_core(x)) + kPio2Lo;
}

inline double tanh(double x) {
  if (std::isnan(x)) {
    throw std::domain_error("detmath::tanh: argument is NaN");
  }
  const double ax = x < 0.0 ? -x : x;
  if (ax >= 20.0) return x > 0.0 ? 1.0 : -1.0;
  const double t = exp(-2.0 * ax);
  const double r = (1.0 - t) / (1.0 + t);
  return x < 0.0 ? -r : r;
}

}  // namespace mapeval::detmath
