#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mapeval/interp.hpp"
#include "mapeval/rng.hpp"

using namespace mapeval;

namespace {

EmbeddingVector random_unit(rng::Stream& s, int dim) {
  EmbeddingVector v = s.normal_vector(dim);
  return normalized(v);
}

double max_abs_diff(const EmbeddingVector& a, const EmbeddingVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("lerp endpoints and midpoint") {
  const EmbeddingVector a{1.0, 0.0};
  const EmbeddingVector b{0.0, 1.0};
  REQUIRE(lerp(a, b, MorphingFactor{0.0}) == a);
  REQUIRE(lerp(a, b, MorphingFactor{1.0}) == b);
  const auto mid = lerp(a, b, MorphingFactor{0.5});
  REQUIRE(mid[0] == 0.5);
  REQUIRE(mid[1] == 0.5);
}

TEST_CASE("slerp endpoints and the quarter-circle midpoint") {
  const EmbeddingVector a{1.0, 0.0};
  const EmbeddingVector b{0.0, 1.0};
  REQUIRE(slerp(a, b, MorphingFactor{0.0}) == a);
  REQUIRE(slerp(a, b, MorphingFactor{1.0}) == b);
  const auto mid = slerp(a, b, MorphingFactor{0.5});
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  REQUIRE(mid[0] == Catch::Approx(inv_sqrt2).margin(1e-15));
  REQUIRE(mid[1] == Catch::Approx(inv_sqrt2).margin(1e-15));
}

TEST_CASE("slerp at 60 degrees bisects the angle on the sphere") {
  // independent check with libm
  const double theta = M_PI / 3.0;
  const EmbeddingVector a{1.0, 0.0, 0.0};
  const EmbeddingVector b{std::cos(theta), std::sin(theta), 0.0};
  const auto mid = slerp(a, b, MorphingFactor{0.5});
  REQUIRE(l2_norm(mid) == Catch::Approx(1.0).margin(1e-9));
  const double angle_a = std::acos(std::clamp(dot(mid, a), -1.0, 1.0));
  const double angle_b = std::acos(std::clamp(dot(mid, b), -1.0, 1.0));
  REQUIRE(angle_a == Catch::Approx(theta / 2.0).margin(1e-9));
  REQUIRE(angle_b == Catch::Approx(theta / 2.0).margin(1e-9));
}

TEST_CASE("interpolate dispatches and is idempotent on equal inputs") {
  const EmbeddingVector a{0.3, -0.4, 0.5};
  const auto out = interpolate(a, a, MorphingFactor{0.5}, InterpKind::Lerp);
  REQUIRE(max_abs_diff(out, a) <= 1e-15);
  const auto out2 = interpolate(a, a, MorphingFactor{0.25}, InterpKind::Slerp);
  REQUIRE(max_abs_diff(out2, a) <= 1e-12);
}

TEST_CASE("error paths: dimension mismatch, zero vector, antipodal, bad alpha") {
  const EmbeddingVector a{1.0, 0.0};
  const EmbeddingVector b3{0.0, 1.0, 0.0};
  const EmbeddingVector zero{0.0, 0.0};
  const EmbeddingVector neg{-1.0, 0.0};
  REQUIRE_THROWS_AS(lerp(a, b3, MorphingFactor{0.5}), std::invalid_argument);
  REQUIRE_THROWS_AS(slerp(a, b3, MorphingFactor{0.5}), std::invalid_argument);
  REQUIRE_THROWS_AS(slerp(a, zero, MorphingFactor{0.5}), std::invalid_argument);
  REQUIRE_THROWS_AS(slerp(zero, a, MorphingFactor{0.5}), std::invalid_argument);
  REQUIRE_THROWS_AS(slerp(a, neg, MorphingFactor{0.5}), std::invalid_argument);
  REQUIRE_THROWS_AS(MorphingFactor{-0.1}, std::invalid_argument);
  REQUIRE_THROWS_AS(MorphingFactor{1.1}, std::invalid_argument);
  const double nan = std::nan("");
  REQUIRE_THROWS_AS(MorphingFactor{nan}, std::invalid_argument);
}

TEST_CASE("properties over random unit pairs") {
  rng::Stream s(101, "interp-prop");
  for (const int dim : {2, 8, 64}) {
    for (int iter = 0; iter < 300; ++iter) {
      const auto a = random_unit(s, dim);
      const auto b = random_unit(s, dim);
      const double t = s.next_unit();
      const MorphingFactor alpha{t};
      const MorphingFactor swapped{1.0 - t};

      for (const InterpKind kind : {InterpKind::Lerp, InterpKind::Slerp}) {
        // endpoint recovery
        REQUIRE(max_abs_diff(interpolate(a, b, MorphingFactor{0.0}, kind), a) <= 1e-12);
        REQUIRE(max_abs_diff(interpolate(a, b, MorphingFactor{1.0}, kind), b) <= 1e-12);
        // swap symmetry
        REQUIRE(max_abs_diff(interpolate(a, b, alpha, kind),
                             interpolate(b, a, swapped, kind)) <= 1e-12);
      }

      // norm: slerp preserves, lerp contracts strictly inside the arc
      const auto sv = slerp(a, b, alpha);
      REQUIRE(l2_norm(sv) == Catch::Approx(1.0).margin(1e-9));
      if (t > 0.05 && t < 0.95) {
        const auto lv = lerp(a, b, alpha);
        if (max_abs_diff(a, b) > 1e-6) REQUIRE(l2_norm(lv) < 1.0);
      }

      // planarity: slerp output stays in span{a, b}
      const auto& v = sv;
      EmbeddingVector residual = v;
      // Gram-Schmidt basis of span{a,b}
      EmbeddingVector u1 = a;
      EmbeddingVector u2(b.size());
      const double proj = dot(b, u1);
      for (std::size_t i = 0; i < b.size(); ++i) u2[i] = b[i] - proj * u1[i];
      const double n2 = l2_norm(u2);
      const double c1 = dot(residual, u1);
      for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= c1 * u1[i];
      if (n2 > 1e-9) {
        for (std::size_t i = 0; i < u2.size(); ++i) u2[i] /= n2;
        const double c2 = dot(residual, u2);
        for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= c2 * u2[i];
      }
      REQUIRE(l2_norm(residual) <= 1e-9);
    }
  }
}

TEST_CASE("small angles fall back to lerp smoothly") {
  rng::Stream s(102, "interp-small");
  for (int iter = 0; iter < 500; ++iter) {
    const auto a = random_unit(s, 8);
    // b within ~1e-4 radians of a
    EmbeddingVector b(a.size());
    const double eps = 1e-4 * s.next_unit();
    for (std::size_t i = 0; i < a.size(); ++i) b[i] = a[i] + eps * s.next_normal();
    b = normalized(b);
    const double t = s.next_unit();
    const auto sv = slerp(a, b, MorphingFactor{t});
    const auto lv = lerp(a, b, MorphingFactor{t});
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) diff += (sv[i] - lv[i]) * (sv[i] - lv[i]);
    REQUIRE(std::sqrt(diff) <= 1e-7 * l2_norm(a));
  }
}
