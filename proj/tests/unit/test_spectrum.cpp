#include <doctest.h>

#include <random>

#include "walshlab/error.hpp"
#include "walshlab/spectrum.hpp"

using walshlab::Error;
using walshlab::Spectrum;

namespace {

// Direct evaluation of the definition: eps_0 + sum |eps_j - eps_{j-1}|.
uint64_t variation_oracle(uint64_t n) {
  uint64_t v = n & 1u;
  uint64_t prev = n & 1u;
  for (int j = 1; j < 64; ++j) {
    uint64_t cur = (n >> j) & 1u;
    v += cur ^ prev;
    prev = cur;
  }
  return v;
}

uint64_t floor_log2(uint64_t n) {
  uint64_t e = 0;
  while (n >>= 1) ++e;
  return e;
}

} // namespace

TEST_CASE("variation matches the bit-flip definition") {
  CHECK(Spectrum::from_value(0).variation() == 0);
  CHECK(Spectrum::from_value(5).variation() == 4);
  CHECK(Spectrum::from_value(21).variation() == 6);
  CHECK(Spectrum::from_value(85).variation() == 8);
  for (uint64_t n = 0; n < (1u << 14); ++n)
    CHECK(Spectrum::from_value(n).variation() == variation_oracle(n));
}

TEST_CASE("variation stays below log2(n) + 2") {
  for (uint64_t n = 1; n <= (1u << 20); ++n) {
    uint64_t v = Spectrum::from_value(n).variation();
    CHECK(v <= floor_log2(n) + 2);
  }
}

TEST_CASE("variation of powers of two and of all-ones runs") {
  for (int64_t k = 0; k <= 60; ++k) CHECK(Spectrum::pow2(k).variation() == 2);
  // 2^k - 1 is a single run of k bits: one run, variation 2.
  for (int64_t k = 1; k <= 60; ++k) {
    std::vector<int64_t> run;
    for (int64_t e = 0; e < k; ++e) run.push_back(e);
    CHECK(Spectrum::from_bits(run).variation() == 2);
  }
}

TEST_CASE("xor is the symmetric difference") {
  auto five = Spectrum::from_value(5);
  CHECK(five.xor_with(five) == Spectrum::zero());
  CHECK((five ^ Spectrum::from_value(16)).value() == 21);
  CHECK((Spectrum::from_value(21) ^ five).value() == 16);
}

TEST_CASE("xor group laws on random values") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    uint64_t a = rng() & 0xffffffu, b = rng() & 0xffffffu, c = rng() & 0xffffffu;
    auto sa = Spectrum::from_value(a), sb = Spectrum::from_value(b), sc = Spectrum::from_value(c);
    CHECK((sa ^ sb) == (sb ^ sa));
    CHECK(((sa ^ sb) ^ sc) == (sa ^ (sb ^ sc)));
    CHECK((sa ^ sa) == Spectrum::zero());
    CHECK((sa ^ sb).value() == (a ^ b));
  }
}

TEST_CASE("nested_diff subtracts a nested subset") {
  CHECK(Spectrum::from_value(21).nested_diff(Spectrum::from_value(5)).value() == 16);
  CHECK(Spectrum::from_value(85).nested_diff(Spectrum::from_value(21)).value() == 64);
  auto a = Spectrum::from_value(85);
  CHECK(a.nested_diff(a) == Spectrum::zero());
  CHECK_THROWS_AS((void)Spectrum::from_value(5).nested_diff(Spectrum::from_value(2)), Error);
}

TEST_CASE("plus and minus agree with machine arithmetic") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 4000; ++trial) {
    uint64_t a = rng() >> 2, b = rng() >> 2;
    auto sa = Spectrum::from_value(a), sb = Spectrum::from_value(b);
    CHECK(sa.plus(sb).value() == a + b);
    if (a >= b) CHECK(sa.minus(sb).value() == a - b);
    CHECK(Spectrum::from_value(a >> 3).shl(3).value() == ((a >> 3) << 3));
  }
  CHECK_THROWS_AS((void)Spectrum::from_value(3).minus(Spectrum::from_value(4)), Error);
}

TEST_CASE("plus carries across huge exponents") {
  auto big = Spectrum::from_bits({1000, 1002});
  auto sum = big.plus(Spectrum::pow2(1000));
  CHECK(sum == Spectrum::from_bits({1001, 1002}));
  auto cascade = Spectrum::from_bits({1000, 1001, 1002}).plus(Spectrum::pow2(1000));
  CHECK(cascade == Spectrum::from_bits({1003}));
  auto borrow = Spectrum::pow2(1 << 20).minus(Spectrum::pow2(0));
  CHECK(borrow.popcount() == (1u << 20));
  CHECK(borrow.variation() == 2);
}

TEST_CASE("ordering follows numeric value") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 2000; ++trial) {
    uint64_t a = rng(), b = rng();
    auto sa = Spectrum::from_value(a), sb = Spectrum::from_value(b);
    CHECK((sa < sb) == (a < b));
    CHECK((sa == sb) == (a == b));
  }
  CHECK(Spectrum::pow2(100) > Spectrum::from_value(UINT64_MAX));
}

TEST_CASE("string form is readable for huge values") {
  CHECK(Spectrum::from_value(85).str() == "85");
  CHECK(Spectrum::from_bits({0, 100}).str() == "2^100 + 2^0");
  CHECK(!Spectrum::from_bits({0, 100}).value().has_value());
}
