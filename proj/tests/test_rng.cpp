#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "relgen/rng.hpp"

using namespace relgen;

TEST_SUITE("rng") {

TEST_CASE("identical seeds give identical streams") {
  SeededRng a(987654321), b(987654321);
  for (int i = 0; i < 50; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("raw output is frozen") {
  // mt19937_64's sequence is fixed by the standard; these values pin the
  // whole derivation chain against accidental reseeding changes.
  SeededRng r(0);
  CHECK(r.next_u64() == 0x28e837c5cb41dc3eull);
  CHECK(r.next_u64() == 0xfdfd3a7c3e40f98bull);
  CHECK(r.next_u64() == 0x0a213217f032e8b9ull);
  CHECK(SeededRng(42).next_u64() == 0xc151df7d6ee5e2d6ull);
}

TEST_CASE("split derivation is frozen and label-sensitive") {
  const SeededRng r(7);
  CHECK(r.split("alpha").seed() == 0x55e51f0fcbba1d15ull);
  CHECK(r.split("alpha", 1).seed() == 0xf902d53630a42f53ull);
  CHECK(r.split("beta").seed() == 0x6b110b94ee666bf0ull);

  CHECK(r.split("alpha").seed() != r.split("beta").seed());
  CHECK(r.split("alpha", 0).seed() != r.split("alpha", 1).seed());
  CHECK(r.split("alpha").seed() != SeededRng(8).split("alpha").seed());
}

TEST_CASE("split is independent of parent draws") {
  SeededRng a(55), b(55);
  a.next_u64();
  a.next_u64();
  CHECK(a.split("child").seed() == b.split("child").seed());
}

TEST_CASE("uniform_int covers its range inclusively") {
  SeededRng r(3);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = r.uniform_int(-2, 3);
    CHECK(v >= -2);
    CHECK(v <= 3);
    seen.insert(v);
  }
  CHECK(seen.size() == 6);  // all values of a small domain appear
  CHECK(r.uniform_int(9, 9) == 9);
}

TEST_CASE("uniform_u64 respects its bound") {
  SeededRng r(4);
  for (int i = 0; i < 2000; ++i) CHECK(r.uniform_u64(17) < 17);
  CHECK(r.uniform_u64(1) == 0);
}

TEST_CASE("uniform_real stays in [0,1) with a sane mean") {
  SeededRng r(123);
  CHECK(r.uniform_real() == doctest::Approx(0.31320017867847072).epsilon(1e-15));
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double v = r.uniform_real();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    sum += v;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));

  SeededRng r2(5);
  for (int i = 0; i < 1000; ++i) {
    const double v = r2.uniform_real(-4.0, 2.5);
    CHECK(v >= -4.0);
    CHECK(v < 2.5);
  }
}

TEST_CASE("shuffle permutes and is seed-deterministic") {
  std::vector<int> items(40);
  for (int i = 0; i < 40; ++i) items[static_cast<std::size_t>(i)] = i;
  auto a = items, b = items;
  SeededRng(9).shuffle(a);
  SeededRng(9).shuffle(b);
  CHECK(a == b);
  CHECK(a != items);  // 40 elements; identity is effectively impossible
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == items);
}

TEST_CASE("coin and pick draw from the stream") {
  SeededRng r(77);
  int heads = 0;
  for (int i = 0; i < 2000; ++i) heads += r.coin() ? 1 : 0;
  CHECK(heads > 800);
  CHECK(heads < 1200);

  const std::vector<int> items{10, 20, 30};
  std::set<int> seen;
  for (int i = 0; i < 200; ++i) seen.insert(r.pick(items));
  CHECK(seen == std::set<int>{10, 20, 30});
}

}  // TEST_SUITE
