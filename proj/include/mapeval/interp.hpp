#pragma once

// Identity blending: lerp and slerp over embedding vectors.
//
// Convention: result = f(a, b, alpha) weights b by alpha, so alpha = 0
// returns a and alpha = 1 returns b.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapeval/detmath.hpp"

namespace mapeval {

using EmbeddingVector = std::vector<double>;

// slerp is singular at theta = pi; same-domain face embeddings should never
// be antipodal, so reject instead of picking an arbitrary great circle.
inline constexpr double kSlerpAntipodalMargin = 1e-6;
// Below this angle the sin ratio loses precision; the lerp limit is exact to
// machine precision there.
inline constexpr double kSlerpSmallAngle = 1e-7;

inline double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dot: dimension mismatch (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double l2_norm(const EmbeddingVector& a) { return std::sqrt(dot(a, a)); }

inline EmbeddingVector normalized(const EmbeddingVector& a) {
  const double n = l2_norm(a);
  if (n == 0.0) throw std::invalid_argument("normalized: zero vector");
  EmbeddingVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] / n;
  return out;
}

inline double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  const double na = l2_norm(a);
  const double nb = l2_norm(b);
  if (na == 0.0 || nb == 0.0) throw std::invalid_argument("cosine: zero vector");
  return dot(a, b) / (na * nb);
}

class MorphingFactor {
 public:
  explicit MorphingFactor(double alpha) : alpha_(alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
      throw std::invalid_argument("morphing factor must lie in [0,1], got " +
                                  std::to_string(alpha));
    }
  }
  double value() const noexcept { return alpha_; }

 private:
  double alpha_;
};

enum class InterpKind { Lerp, Slerp };

inline const char* to_string(InterpKind k) {
  return k == InterpKind::Lerp ? "lerp" : "slerp";
}

inline InterpKind interp_kind_from_string(const std::string& s) {
  if (s == "lerp") return InterpKind::Lerp;
  if (s == "slerp") return InterpKind::Slerp;
  throw std::invalid_argument("unknown interpolation kind '" + s + "' (expected lerp|slerp)");
}

namespace detail {
inline void require_same_dim(const EmbeddingVector& a, const EmbeddingVector& b,
                             const char* op) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
}
}  // namespace detail

inline EmbeddingVector lerp(const EmbeddingVector& a, const EmbeddingVector& b,
                            MorphingFactor alpha) {
  detail::require_same_dim(a, b, "lerp");
  const double t = alpha.value();
  const double w = 1.0 - t;
  EmbeddingVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = w * a[i] + t * b[i];
  return out;
}

inline EmbeddingVector slerp(const EmbeddingVector& a, const EmbeddingVector& b,
                             MorphingFactor alpha) {
  detail::require_same_dim(a, b, "slerp");
  const double na = l2_norm(a);
  const double nb = l2_norm(b);
  if (na == 0.0 || nb == 0.0) {
    throw std::invalid_argument("slerp: zero vector");
  }
  double c = dot(a, b) / (na * nb);
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  const double theta = detmath::acos(c);
  if (theta >= detmath::kPi - kSlerpAntipodalMargin) {
    throw std::invalid_argument("slerp: vectors are antipodal (angle within " +
                                std::to_string(kSlerpAntipodalMargin) + " of pi)");
  }
  const double t = alpha.value();
  if (theta < kSlerpSmallAngle) {
    return lerp(a, b, alpha);
  }
  const double sin_theta = detmath::sin(theta);
  const double wa = detmath::sin((1.0 - t) * theta) / sin_theta;
  const double wb = detmath::sin(t * theta) / sin_theta;
  EmbeddingVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = wa * a[i] + wb * b[i];
  return out;
}

inline EmbeddingVector interpolate(const EmbeddingVector& a, const EmbeddingVector& b,
                                   MorphingFactor alpha, InterpKind kind) {
  return kind == InterpKind::Lerp ? lerp(a, b, alpha) : slerp(a, b, alpha);
}

}  // namespace mapeval
