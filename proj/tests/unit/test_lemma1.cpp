#include <doctest.h>

#include <random>

#include "walshlab/error.hpp"
#include "walshlab/lemma1.hpp"
#include "walshlab/sequences.hpp"
#include "walshlab/walsh_point.hpp"

using namespace walshlab;

namespace {

const std::vector<Spectrum>& canonical() {
  static auto seq = generate_sequence(SequenceKind::nested_canonical, 40);
  return seq;
}

const Lemma1Artifact& level_one() {
  static auto art = build_lemma1(canonical(), 1);
  return art;
}

const Lemma1Artifact& level_two() {
  static auto art = build_lemma1(canonical(), 2);
  return art;
}

} // namespace

TEST_CASE("base construction at the first level") {
  auto base = build_base(canonical(), 1);
  CHECK(base.resolution == 3);
  CHECK(base.sign_grid == StepFn::from_integers(3, {1, 1, 1, -1, 1, -1, 1, -1}));
  CHECK(base.kernel_norm == Rat64(7, 4));
  CHECK(base.partial.at_cell(0) == Rat64(7, 4));
  CHECK(base.kernel_norm >= Rat64(static_cast<int64_t>(base.n_level.variation()), 8));

  CHECK(build_base(canonical(), 2).resolution == 5);
}

TEST_CASE("vacant bit certification") {
  CHECK(minimal_out_of_spectrum(canonical(), 3) == 3);
  CHECK(minimal_out_of_spectrum(canonical(), 5) == 5);
  // nested with saturated spectra: 1, 3, 7, 15 leave no certifiable bit
  std::vector<Spectrum> full = {Spectrum::from_value(1), Spectrum::from_value(3),
                                Spectrum::from_value(7), Spectrum::from_value(15)};
  CHECK_THROWS_AS((void)minimal_out_of_spectrum(full, 1), Error);
}

TEST_CASE("index selection at the first level") {
  const auto& art = level_one();
  REQUIRE(art.deltas.size() == 8);
  CHECK(art.out_bit == 3);
  CHECK(art.lambda == Spectrum::from_value(3));

  // the first step has an empty product, so the sum condition reads
  // |S(g_1)| >= V/16 on the whole home cell and picks the upper-cut branch
  CHECK(art.deltas[0].active_count == 0);
  CHECK(art.deltas[0].cond_sum);
  CHECK(art.deltas[0].branch == Branch::upper_cut);
  CHECK(art.deltas[0].delta.value() == 16);

  Spectrum m_pow = Spectrum::pow2(art.out_bit);
  CHECK(art.deltas[0].delta >= m_pow.plus(Spectrum::from_value(1)));
  for (std::size_t j = 0; j + 1 < art.deltas.size(); ++j)
    CHECK(art.deltas[j + 1].delta >= art.deltas[j].delta.plus(m_pow).shl(1));

  for (const auto& d : art.deltas) {
    const Spectrum& hit = d.branch == Branch::upper_cut ? d.upper_cut : d.lower_cut;
    CHECK(hit == canonical()[d.source_index]);
  }
}

TEST_CASE("branch measure fractions agree with grid enumeration") {
  const auto& art = level_one();
  const auto& g = art.base.sign_grid.num();
  const int n_res = art.base.resolution;
  // enumerate the finest grid the first j modulations can see
  for (std::size_t j = 1; j < art.deltas.size(); ++j) {
    int fine_res = static_cast<int>(art.deltas[j - 1].delta.max_bit()) + 1;
    uint64_t fine = uint64_t{1} << fine_res;
    uint64_t in_cell = 0, sum_hits = 0, rem_hits = 0;
    Rat64 threshold = art.witness_threshold();
    for (uint64_t cell = 0; cell < fine; ++cell) {
      if ((cell >> (fine_res - n_res)) != j) continue;
      ++in_cell;
      auto x = DyadicPoint::from_cell(cell, fine_res);
      // head over steps before j, remainder and sum values on the home cell
      int64_t head = 1;
      for (std::size_t i = 0; i < j; ++i) {
        int w = walsh_eval(art.deltas[i].delta, x);
        head *= 1 + w * g[(j ^ i)];
      }
      Rat64 rem = Rat64(g[0]) * Rat64(head - 1);
      if ((rem + art.base.kernel_norm).abs() >= threshold) ++sum_hits;
      if (rem.abs() >= threshold) ++rem_hits;
    }
    REQUIRE(art.deltas[j].fracs_exact);
    CHECK(art.deltas[j].frac_sum ==
          Rat64(static_cast<int64_t>(sum_hits), static_cast<int64_t>(in_cell)));
    CHECK(art.deltas[j].frac_rem ==
          Rat64(static_cast<int64_t>(rem_hits), static_cast<int64_t>(in_cell)));
    CHECK(art.deltas[j].cond_sum == (art.deltas[j].frac_sum >= Rat64(1, 2)));
    CHECK(art.deltas[j].cond_rem == (art.deltas[j].frac_rem >= Rat64(1, 2)));
  }
}

TEST_CASE("assembled product at the first level") {
  const auto& art = level_one();
  REQUIRE(art.dense.has_value());
  CHECK(art.dense_resolution == 19);
  CHECK(art.degree.value() == art.deltas.back().delta.value_or_throw() + 7);
  CHECK(art.witness_cap == canonical()[art.cap_index]);
  CHECK(art.cap_index == 9); // first term at or past the degree

  int64_t max_val = 0;
  for (int64_t v : art.dense->num()) {
    CHECK(v >= 0);
    max_val = std::max(max_val, v);
  }
  CHECK(max_val <= 256);
  CHECK(max_val == 256);

  CHECK(fwht(*art.dense).at(0) == Rat64(1));
}

TEST_CASE("the full verification battery passes at the first level") {
  auto verdicts = verify_artifact(level_one(), 0, 300);
  REQUIRE(!verdicts.empty());
  for (const auto& v : verdicts) {
    INFO(v.tag, ": ", v.detail);
    CHECK(v.pass);
  }
}

TEST_CASE("pointwise cuts match dense partial sums at seeded points") {
  const auto& art = level_one();
  auto coeffs = fwht(*art.dense);
  std::mt19937_64 rng(12345);
  for (int p = 0; p < 200; ++p) {
    DyadicPoint x = DyadicPoint::random(art.dense_resolution + 3, rng);
    for (std::size_t step = 0; step < art.deltas.size(); ++step) {
      auto pair = eval_cut(art, x, step);
      CHECK(partial_sum(coeffs, art.deltas[step].lower_cut).at(x) == pair.lower.to_rat());
      CHECK(partial_sum(coeffs, art.deltas[step].upper_cut).at(x) == pair.upper.to_rat());
      CHECK(pair.upper.to_rat() - pair.lower.to_rat() == pair.gap);
    }
  }
}

TEST_CASE("home-cell cut gap equals the kernel norm") {
  const auto& art = level_one();
  std::mt19937_64 rng(7);
  for (std::size_t step = 0; step < art.deltas.size(); ++step) {
    for (int p = 0; p < 50; ++p) {
      std::vector<uint8_t> bits(24);
      for (int b = 0; b < 3; ++b) bits[b] = static_cast<uint8_t>((step >> (2 - b)) & 1);
      for (int b = 3; b < 24; ++b) bits[b] = static_cast<uint8_t>(rng() & 1);
      auto x = DyadicPoint::from_bits(std::move(bits));
      auto pair = eval_cut(art, x, step);
      CHECK(pair.gap.abs() == Rat64(7, 4));
      CHECK(pair.gap.abs() >= Rat64(4, 8));
    }
  }
}

TEST_CASE("set extraction at the first level is exact and full") {
  auto rep = extract_set(level_one());
  CHECK(rep.exact);
  CHECK(rep.threshold == Rat64(1, 4));
  CHECK(rep.all_cells_quarter);
  REQUIRE(rep.cells.size() == 8);
  for (const auto& cell : rep.cells) CHECK(cell.fraction >= Rat64(1, 4));
  CHECK(rep.witness_cap_ok);
  CHECK(rep.max_witness_source <= level_one().cap_index);
}

TEST_CASE("second level runs without a dense form") {
  const auto& art = level_two();
  CHECK(art.base.resolution == 5);
  CHECK(art.out_bit == 5);
  CHECK(art.deltas.size() == 32);
  CHECK(!art.dense.has_value());
  CHECK(art.degree.max_bit() > 60); // far beyond any dense grid

  Spectrum m_pow = Spectrum::pow2(5);
  CHECK(art.deltas[0].delta >= m_pow.plus(Spectrum::from_value(1)));
  for (std::size_t j = 0; j + 1 < art.deltas.size(); ++j)
    CHECK(art.deltas[j + 1].delta >= art.deltas[j].delta.plus(m_pow).shl(1));

  auto verdicts = verify_artifact(art, 0, 64);
  for (const auto& v : verdicts) {
    INFO(v.tag, ": ", v.detail);
    CHECK(v.pass);
  }
}

TEST_CASE("second-level cut gaps hold at sampled points") {
  const auto& art = level_two();
  Rat64 eighth(static_cast<int64_t>(art.variation()), 8);
  std::mt19937_64 rng(0);
  int fine = static_cast<int>(art.deltas.back().delta.max_bit()) + 2;
  for (int p = 0; p < 2000; ++p) {
    std::size_t step = static_cast<std::size_t>(rng() % art.deltas.size());
    std::vector<uint8_t> bits(static_cast<std::size_t>(fine));
    for (int b = 0; b < 5; ++b) bits[static_cast<std::size_t>(b)] =
        static_cast<uint8_t>((step >> (4 - b)) & 1);
    for (int b = 5; b < fine; ++b) bits[static_cast<std::size_t>(b)] =
        static_cast<uint8_t>(rng() & 1);
    auto x = DyadicPoint::from_bits(std::move(bits));
    auto pair = eval_cut(art, x, step);
    CHECK(pair.gap.abs() == art.base.kernel_norm);
    CHECK(pair.gap.abs() >= eighth);
  }
}

TEST_CASE("sampled set extraction at the second level") {
  auto rep = extract_set(level_two(), 64, 0);
  CHECK(!rep.exact);
  CHECK(rep.points == 64 * 32);
  CHECK(rep.witness_cap_ok);
  uint64_t passing_cells = 0;
  for (const auto& cell : rep.cells)
    if (cell.fraction >= Rat64(1, 4)) ++passing_cells;
  CHECK(passing_cells == 32);
}

TEST_CASE("construction rejects short prefixes") {
  auto seq = generate_sequence(SequenceKind::nested_canonical, 6);
  CHECK_THROWS_AS((void)build_lemma1(seq, 1), Error);
}
