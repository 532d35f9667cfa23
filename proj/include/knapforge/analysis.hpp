#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "knapforge/cryptosystems.hpp"
#include "knapforge/numeric.hpp"

namespace knapforge {

/// Knapsack density s / log2(max entry). Requires every entry >= 2.
double density(const RowVec& key);

struct PseudoKeyCandidate {
  Nat q;
  std::vector<Nat> rests;
};

struct PseudoKeyReport {
  std::vector<PseudoKeyCandidate> candidates;  // ascending q
  bool unique = false;
  bool contains_true_key = false;
  // True iff the sorted public entries are superincreasing, in which case
  // every q' > sum(w) is a pseudo-key (rests = w). That family is flagged
  // here, not enumerated.
  bool degenerate_family = false;

  bool contains(const Nat& q) const;
  std::string to_text() const;
};

/// Enumerate every pseudo-key q' in [2, q_max]: the division rests
/// w_i mod q' must sum below q' and be strictly superincreasing once sorted
/// ascending. Exhaustive and deterministic. When true_q is given,
/// contains_true_key reports whether it was found.
PseudoKeyReport find_pseudokeys(const RowVec& pub, const Nat& q_max,
                                const std::optional<Nat>& true_q = {});

struct UniquenessTrial {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  Nat p;
  bool unique = false;
  std::size_t pseudo_key_count = 0;
  bool contains_true_key = false;
};

struct UniquenessResult {
  std::vector<UniquenessTrial> trials;
  double unique_fraction = 0.0;

  /// Line-oriented records "index seed p unique count" plus a summary line.
  std::string to_text() const;
};

/// For each trial: p uniform in the open interval (p_lo, p_hi), a fresh
/// system-2 variant-2 key, pseudo-key search up to max(w_i). Trials run in
/// parallel on seed-split child sources; the outcome depends only on
/// (rng seed, parameters).
UniquenessResult uniqueness_experiment(std::size_t s, const Nat& p_lo,
                                       const Nat& p_hi, std::size_t trials,
                                       RandomSource& rng);

/// Counts N_{q,s,r} of s-tuples over {0..q-1} summing to exactly r, for
/// r = 0..q-1 (prefix-sum recurrence from the rest-sum proposition).
/// Probabilities are these counts over q^s.
std::vector<Nat> rest_sum_counts(const Nat& q, std::size_t s);

enum class RestSumMode { Exact, MonteCarlo };

/// Probability that s independent uniform draws in {0..q-1} sum to <= q-1.
/// Exact mode is a convolution (rest_sum_counts); Monte Carlo needs
/// trials >= 10^4. The result never exceeds (3/4)^(s-1).
Rat rest_sum_probability(const Nat& q, std::size_t s, RestSumMode mode,
                         std::size_t trials = 0, RandomSource* rng = nullptr);

/// S_st = number of superincreasing nonnegative sequences of length s with
/// sum t, via S_{s,t} = sum_{u=0}^{ceil(t/2)-1} S_{s-1,u}; C_st = number of
/// all such sequences = C(t+s-1, s-1). Their ratio tends to 2^(-s(s-1)/2).
std::pair<Nat, Nat> count_superincreasing(std::size_t s, const Nat& t);

}  // namespace knapforge
