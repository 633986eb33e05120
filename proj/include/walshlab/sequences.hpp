#ifndef WALSHLAB_SEQUENCES_HPP
#define WALSHLAB_SEQUENCES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "walshlab/spectrum.hpp"

namespace walshlab {

enum class SequenceKind {
  nested_canonical,    // n_k = sum_{j<=k} 4^j        -> 5, 21, 85, ...
  separated_canonical, // n_k = 2^(k^2) sum_{j<=k} 4^j -> 10, 336, 43520, ...
  powers_of_two,       // n_k = 2^k                   -> 2, 4, 8, ...
};

std::optional<SequenceKind> parse_sequence_kind(const std::string& name);
std::string sequence_kind_name(SequenceKind kind);

/// First `count` terms, k starting at 1.
std::vector<Spectrum> generate_sequence(SequenceKind kind, std::size_t count);

struct SequenceReport {
  std::vector<uint64_t> variation_profile;
  bool separated = false;
  bool nested = false;
  /// Some pair k < l with V(n_k) < V(n_l) exists in the scanned prefix.
  bool unbounded_variation_evidence = false;
  /// Smallest observed n_{k+1}/n_k; index locates the minimizing k (0-based).
  double lacunary_ratio = 0.0;
  std::size_t lacunary_index = 0;
  /// sup |m_k - n_k| against a comparison sequence, when one was given.
  std::optional<Spectrum> close_bound;
};

/// Scans a strictly increasing prefix of length >= 2. The optional second
/// sequence (same length) fills close_bound.
SequenceReport classify_sequence(const std::vector<Spectrum>& seq,
                                 const std::vector<Spectrum>* close_to = nullptr);

/// log2(n) within ~1e-12, valid for arbitrarily large spectra.
double approx_log2(const Spectrum& n);

} // namespace walshlab

#endif
