#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "mapeval/rng.hpp"

using mapeval::rng::Stream;

// Frozen contract: stream (seed=42, tag="reference", index=0). Any change to
// these values is a breaking change to every golden file in the repo.
TEST_CASE("reference sequence is frozen") {
  Stream s(42, "reference", 0);
  const std::vector<std::uint64_t> expected = {
      0x0EFB731F76172F38ull, 0x1AA65706F886E381ull, 0x766C3FCB307D2458ull,
      0xDBD7C9D97B663F14ull, 0x7915E9F75F42C45Aull, 0x8EF6BA8FEE45AE14ull,
      0x188B49C5EBD3FBDEull, 0x9FC8D6EAAF944C60ull,
  };
  std::vector<std::uint64_t> got;
  for (std::size_t i = 0; i < expected.size(); ++i) got.push_back(s.next_u64());
  REQUIRE(got == expected);

  Stream u(42, "reference", 0);
  REQUIRE(u.next_unit() == 0.058524317913989266);
  REQUIRE(u.next_unit() == 0.10410064621148818);
  Stream n(42, "reference", 0);
  REQUIRE(n.next_normal() == -0.11853383577437095);
  REQUIRE(n.next_normal() == 1.1367152270153689);
}

TEST_CASE("streams are pure functions of (seed, tag, index)") {
  Stream a(7, "probe", 3);
  Stream b(7, "probe", 3);
  for (int i = 0; i < 100; ++i) REQUIRE(a.next_u64() == b.next_u64());

  Stream c(7, "probe", 4);
  Stream d(7, "identity", 3);
  Stream e(8, "probe", 3);
  Stream base(7, "probe", 3);
  bool all_equal_c = true;
  bool all_equal_d = true;
  bool all_equal_e = true;
  for (int i = 0; i < 16; ++i) {
    const std::uint64_t x = base.next_u64();
    all_equal_c &= (c.next_u64() == x);
    all_equal_d &= (d.next_u64() == x);
    all_equal_e &= (e.next_u64() == x);
  }
  REQUIRE_FALSE(all_equal_c);
  REQUIRE_FALSE(all_equal_d);
  REQUIRE_FALSE(all_equal_e);
}

TEST_CASE("next_unit stays in [0, 1)") {
  Stream s(11, "unit");
  for (int i = 0; i < 10000; ++i) {
    const double u = s.next_unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("normals have roughly standard moments") {
  Stream s(12, "normal");
  const int n = 50000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = s.next_normal();
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  REQUIRE(std::abs(mean) < 0.02);
  REQUIRE(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("normal_vector is reproducible") {
  Stream a(13, "vec", 5);
  Stream b(13, "vec", 5);
  REQUIRE(a.normal_vector(257) == b.normal_vector(257));
}
