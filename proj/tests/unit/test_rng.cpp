#include <doctest.h>

#include <set>

#include "loctime/rng.hpp"

using namespace loctime;

TEST_CASE("philox4x64-10 known answers") {
  // Random123 reference vector, zero counter and key.
  const Block z = philox4x64({0, 0, 0, 0}, {0, 0});
  CHECK(z[0] == 0x16554d9eca36314cULL);
  CHECK(z[1] == 0xdb20fe9d672d0fdcULL);
  CHECK(z[2] == 0xd7e772cee186176bULL);
  CHECK(z[3] == 0x7e68b68aec7ba23bULL);

  // Random123 pi-digits vector.
  const Block p = philox4x64({0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL, 0xa4093822299f31d0ULL, 0x082efa98ec4e6c89ULL},
                             {0x452821e638d01377ULL, 0xbe5466cf34e90c6cULL});
  CHECK(p[0] == 0xa528f45403e61d95ULL);
  CHECK(p[1] == 0x38c72dbd566e9788ULL);
  CHECK(p[2] == 0xa5a1610e72fd18b5ULL);
  CHECK(p[3] == 0x57bd43b5e52b7fe6ULL);

  // numpy's Philox(key=0) bumps the counter before its first block.
  const Block n = philox4x64({1, 0, 0, 0}, {0, 0});
  CHECK(n[0] == 0x02f4ba6408e4d89bULL);
  CHECK(n[3] == 0x907d7a052fd5b4dcULL);
}

TEST_CASE("derived keys differ by seed, replicate and tag") {
  std::set<Key> keys;
  for (std::uint64_t s = 0; s < 4; ++s)
    for (std::uint64_t r = 0; r < 4; ++r)
      for (auto t : {StreamTag::jumps, StreamTag::holding, StreamTag::field}) keys.insert(derive_key(s, r, t));
  CHECK(keys.size() == 48);
}

TEST_CASE("stream draws") {
  RandomStream a(7, 0, StreamTag::jumps), b(7, 0, StreamTag::jumps);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());

  RandomStream s(1, 2, StreamTag::experiment);
  std::array<int, 3> counts{};
  double mean = 0.0;
  const int n = 60000;
  for (int i = 0; i < n; ++i) {
    const auto k = s.below(3);
    REQUIRE(k < 3);
    counts[k]++;
    const double u = s.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    mean += s.exponential();
  }
  for (int c : counts) CHECK(std::abs(c - n / 3.0) < 5 * std::sqrt(n * 2.0 / 9.0));
  CHECK(mean / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("exponential table is random access") {
  ExponentialTable t(3, 1, StreamTag::holding);
  const double x = t(10, 5);
  for (int i = 0; i < 50; ++i) t(static_cast<std::uint64_t>(i), 0);
  CHECK(t(10, 5) == x);
  CHECK(t(10, 5) != t(10, 6));
  CHECK(t(10, 5) != t(11, 5));
}
