#include <doctest.h>

#include "walshlab/dyadic_point.hpp"

using walshlab::DyadicPoint;

TEST_CASE("point xor examples") {
  auto half = DyadicPoint::from_ratio(1, 1);    // 0.1
  auto quarter = DyadicPoint::from_ratio(1, 2); // 0.01
  auto x = DyadicPoint::from_ratio(11, 4);      // 0.1011

  CHECK((x ^ DyadicPoint::zero()) == x);
  CHECK((half ^ quarter) == DyadicPoint::from_ratio(3, 2));                      // 3/4
  CHECK((DyadicPoint::from_ratio(3, 2) ^ quarter) == half);                      // shared bit cancels
  CHECK((half ^ half) == DyadicPoint::zero());
}

TEST_CASE("trailing zeros do not distinguish points") {
  CHECK(DyadicPoint::from_ratio(1, 1) == DyadicPoint::from_ratio(4, 3));
  CHECK(DyadicPoint::from_ratio(1, 1).resolution() == 1);
}

TEST_CASE("point xor group laws, exhaustive at resolution 8") {
  const int r = 8;
  for (uint64_t a = 0; a < 256; ++a) {
    auto pa = DyadicPoint::from_cell(a, r);
    CHECK((pa ^ pa) == DyadicPoint::zero());
    for (uint64_t b = 0; b < 256; ++b) {
      auto pb = DyadicPoint::from_cell(b, r);
      CHECK((pa ^ pb) == DyadicPoint::from_cell(a ^ b, r));
      CHECK((pa ^ pb) == (pb ^ pa));
    }
  }
}

TEST_CASE("cell index recovers leading bits") {
  auto x = DyadicPoint::from_cell(0b1011, 4);
  CHECK(x.cell_index(4) == 0b1011);
  CHECK(x.cell_index(2) == 0b10);
  CHECK(x.cell_index(6) == 0b101100);
  CHECK(x.bit(1) == 1);
  CHECK(x.bit(2) == 0);
  CHECK(x.bit(99) == 0);
  CHECK(x.bit_string() == "1011");
  CHECK(x.approx() == doctest::Approx(11.0 / 16.0));
}

TEST_CASE("random points are deterministic for a fixed seed") {
  std::mt19937_64 a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    CHECK(DyadicPoint::random(70, a) == DyadicPoint::random(70, b));
  }
}
