#include "walshlab/sequences.hpp"

#include <algorithm>
#include <cmath>

#include "walshlab/error.hpp"

namespace walshlab {

namespace {

// Product of two sparse naturals, used only to compare ratios exactly.
// Cost is popcount(a) additions; callers keep operands at scan size.
Spectrum sparse_mul(const Spectrum& a, const Spectrum& b) {
  Spectrum acc;
  for (int64_t e : a.bits()) acc = acc.plus(b.shl(e));
  return acc;
}

// a/b < c/d for positive naturals.
bool ratio_less(const Spectrum& a, const Spectrum& b, const Spectrum& c, const Spectrum& d) {
  return sparse_mul(a, d) < sparse_mul(c, b);
}

} // namespace

std::optional<SequenceKind> parse_sequence_kind(const std::string& name) {
  if (name == "nested-canonical") return SequenceKind::nested_canonical;
  if (name == "separated-canonical") return SequenceKind::separated_canonical;
  if (name == "powers-of-two") return SequenceKind::powers_of_two;
  return std::nullopt;
}

std::string sequence_kind_name(SequenceKind kind) {
  switch (kind) {
    case SequenceKind::nested_canonical: return "nested-canonical";
    case SequenceKind::separated_canonical: return "separated-canonical";
    case SequenceKind::powers_of_two: return "powers-of-two";
  }
  return "?";
}

std::vector<Spectrum> generate_sequence(SequenceKind kind, std::size_t count) {
  require(count >= 1, Errc::invalid_argument, "count must be >= 1");
  std::vector<Spectrum> out;
  out.reserve(count);
  for (std::size_t k = 1; k <= count; ++k) {
    std::vector<int64_t> bits;
    switch (kind) {
      case SequenceKind::nested_canonical:
        for (std::size_t j = 0; j <= k; ++j) bits.push_back(static_cast<int64_t>(2 * j));
        break;
      case SequenceKind::separated_canonical: {
        int64_t shift = static_cast<int64_t>(k) * static_cast<int64_t>(k);
        for (std::size_t j = 0; j <= k; ++j) bits.push_back(shift + static_cast<int64_t>(2 * j));
        break;
      }
      case SequenceKind::powers_of_two:
        bits.push_back(static_cast<int64_t>(k));
        break;
    }
    out.push_back(Spectrum::from_bits(std::move(bits)));
  }
  return out;
}

SequenceReport classify_sequence(const std::vector<Spectrum>& seq,
                                 const std::vector<Spectrum>* close_to) {
  require(seq.size() >= 2, Errc::invalid_argument, "need at least two terms");
  for (std::size_t i = 1; i < seq.size(); ++i)
    require(seq[i - 1] < seq[i], Errc::invalid_argument, "sequence must be strictly increasing");
  require(!seq.front().is_zero(), Errc::invalid_argument, "terms must be positive");

  SequenceReport rep;
  rep.variation_profile.reserve(seq.size());
  for (const auto& n : seq) rep.variation_profile.push_back(n.variation());

  rep.separated = true;
  rep.nested = true;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    const Spectrum& a = seq[i];
    const Spectrum& b = seq[i + 1];
    if (!(a.max_bit() < b.min_bit())) rep.separated = false;
    // nested: Sp(b) restricted to [0, max Sp(a)] must equal Sp(a)
    std::vector<int64_t> low;
    for (int64_t e : b.bits())
      if (e <= a.max_bit()) low.push_back(e);
    if (low != a.bits()) rep.nested = false;
  }

  uint64_t running_min = rep.variation_profile[0];
  for (std::size_t i = 1; i < rep.variation_profile.size(); ++i) {
    if (rep.variation_profile[i] > running_min) rep.unbounded_variation_evidence = true;
    running_min = std::min(running_min, rep.variation_profile[i]);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i + 1 < seq.size(); ++i)
    if (ratio_less(seq[i + 1], seq[i], seq[best + 1], seq[best])) best = i;
  rep.lacunary_index = best;
  rep.lacunary_ratio = std::exp2(approx_log2(seq[best + 1]) - approx_log2(seq[best]));

  if (close_to != nullptr) {
    require(close_to->size() == seq.size(), Errc::invalid_argument,
            "comparison sequence length mismatch");
    Spectrum sup;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const Spectrum& m = (*close_to)[i];
      Spectrum diff = m >= seq[i] ? m.minus(seq[i]) : seq[i].minus(m);
      if (diff > sup) sup = diff;
    }
    rep.close_bound = sup;
  }
  return rep;
}

double approx_log2(const Spectrum& n) {
  require(!n.is_zero(), Errc::invalid_argument, "log2 of zero");
  int64_t top = n.max_bit();
  // mantissa from the top 52 bits
  double m = 0.0;
  for (int64_t e : n.bits()) {
    int64_t d = top - e;
    if (d < 52) m += std::ldexp(1.0, -static_cast<int>(d));
  }
  return static_cast<double>(top) + std::log2(m);
}

} // namespace walshlab
