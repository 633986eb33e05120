#include <doctest.h>

#include <random>

#include "walshlab/error.hpp"
#include "walshlab/sequences.hpp"
#include "walshlab/orlicz.hpp"
#include "walshlab/witness.hpp"

using namespace walshlab;

namespace {

const std::vector<Spectrum>& canonical() {
  static auto seq = generate_sequence(SequenceKind::nested_canonical, 40);
  return seq;
}

const WitnessPlan& plan_two() {
  static auto plan = plan_levels(canonical(), PiecewiseConvex::identity(), 2);
  return plan;
}

} // namespace

TEST_CASE("two-level plan lands on the derived positions") {
  const auto& plan = plan_two();
  REQUIRE(plan.levels.size() == 2);

  const auto& first = plan.levels[0];
  CHECK(first.level == 1);
  CHECK(first.variation == 4);
  CHECK(first.term_ok);
  CHECK(first.cap_exact);
  CHECK(first.degree.value() == 349527);
  CHECK(first.cap.value() == 1398101); // the first term at or past the degree
  CHECK(first.cap_index == 9);
  REQUIRE(first.has_gap);
  CHECK(first.alpha_index == 10);
  CHECK(first.beta_index == 11);
  CHECK(canonical()[first.alpha_index] < canonical()[first.beta_index]);
  CHECK(canonical()[first.alpha_index] > first.cap);

  const auto& second = plan.levels[1];
  CHECK(second.level == 13);
  CHECK(second.variation == 28);
  CHECK(second.term_ok);
  CHECK(!second.cap_exact); // its degree runs past any scannable prefix
  CHECK(second.degree > canonical().back().nested_diff(canonical()[12]));

  // budget: weights are within 2^-j, so they sum below 1
  CHECK(first.weight() == Rat64(1, 4));
  CHECK(first.weight() <= Rat64(1, 2));
  CHECK(second.weight() == Rat64(2, 28));
  CHECK(second.weight() <= Rat64(1, 4));
}

TEST_CASE("single-level plan works and deeper plans fail honestly") {
  auto plan = plan_levels(canonical(), PiecewiseConvex::identity(), 1);
  CHECK(plan.levels.size() == 1);
  CHECK(plan.levels[0].level == 1);
  // a third level would need the second level's cap, which is unresolvable
  CHECK_THROWS_AS((void)plan_levels(canonical(), PiecewiseConvex::identity(), 3), Error);
}

TEST_CASE("planning rejects a function as large as the growth function") {
  auto phi = build_phi(canonical(), 30);
  CHECK_THROWS_AS((void)plan_levels(canonical(), phi, 1), Error);
}

TEST_CASE("witness evaluation clears the bounds everywhere at level one") {
  WitnessConfig config;
  config.samples = 500;
  WitnessLab lab(plan_two(), config);
  REQUIRE(lab.artifacts().size() == 1);
  REQUIRE(lab.artifacts().count(1) == 1);

  // At the first level the floor is (1/4)(4/16) - 2/28 and every point's
  // designated-cut maximum exceeds it: cut values have magnitude >= 3/4,
  // scaled by 1/4 and shifted by the higher level's constant 2/28.
  std::mt19937_64 rng(1);
  for (int p = 0; p < 200; ++p) {
    auto x = lab.sample_point(rng);
    auto ev = lab.evaluate(x);
    CHECK(ev.sup_exact);
    CHECK(ev.sup >= Rat64(3, 16) - Rat64(2, 28));
    CHECK(ev.clears_some_level_bound);
    CHECK(ev.top_level_floor == Rat64(1, 16) - Rat64(2, 28));
    CHECK(ev.clears_top_level_floor);
    REQUIRE(ev.flat_defects.size() == 1);
    CHECK(ev.flat_defects[0].is_zero());
  }
}

TEST_CASE("witness summary over the seeded sample") {
  WitnessConfig config;
  config.samples = 1000;
  config.seed = 0;
  WitnessLab lab(plan_two(), config);
  auto summary = lab.run();
  CHECK(summary.points == 1000);
  CHECK(summary.bound_hits == 1000);
  CHECK(summary.floor_hits == 1000);
  CHECK(summary.flat_zero_points == 1000);
  REQUIRE(summary.level_bounds.size() == 2);
  // (M_1/V_1)(V_1/16 - 1) = (1/4)(1/4 - 1) < 0 at desk scale
  CHECK(summary.level_bounds[0] == Rat64(-3, 16));
}

TEST_CASE("determinism of the witness run") {
  WitnessConfig config;
  config.samples = 300;
  WitnessLab lab1(plan_two(), config);
  WitnessLab lab2(plan_two(), config);
  auto a = lab1.run();
  auto b = lab2.run();
  CHECK(a.bound_hits == b.bound_hits);
  CHECK(a.floor_hits == b.floor_hits);
  CHECK(a.flat_zero_points == b.flat_zero_points);
}

TEST_CASE("relocation of a constant polynomial") {
  SparsePoly one;
  one.terms.push_back({Spectrum::zero(), Rat64(1)});
  auto result = spectral_relocate(one, plan_two());
  CHECK(result.gap_position == 1);
  REQUIRE(result.relocated.terms.size() == 1);
  CHECK(result.relocated.terms[0].first == result.shift);
  CHECK(result.window_ok);
  CHECK(result.vanishes_below_anchor);
  CHECK(result.full_at_window_top);
  CHECK(result.index_addition_ok);
  CHECK(result.modulus_preserved);

  const auto& seq = canonical();
  const auto& lvl = plan_two().levels[0];
  CHECK(result.shift == seq[lvl.beta_index].nested_diff(seq[lvl.alpha_index]));
}

TEST_CASE("relocation of random small polynomials") {
  std::mt19937_64 rng(99);
  for (int r = 0; r < 40; ++r) {
    auto poly = SparsePoly::random(1 << 12, 8, rng);
    auto result = spectral_relocate(poly, plan_two(), rng());
    CHECK(result.window_ok);
    CHECK(result.vanishes_below_anchor);
    CHECK(result.full_at_window_top);
    CHECK(result.index_addition_ok);
    CHECK(result.modulus_preserved);
    CHECK(result.relocated.terms.size() == poly.terms.size());
  }
}

TEST_CASE("relocation refuses oversized degrees") {
  SparsePoly big;
  big.terms.push_back({canonical()[20], Rat64(1)});
  CHECK_THROWS_AS((void)spectral_relocate(big, plan_two()), Error);
}
