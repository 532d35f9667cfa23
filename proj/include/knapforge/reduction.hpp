#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "knapforge/numeric.hpp"

namespace knapforge {

/// One rest-matching instance: find q' whose rests against w hit the
/// prescribed values, with the last rest inside [lo, hi].
struct Problem4Instance {
  std::vector<Nat> w;           // s public entries
  std::vector<Nat> prescribed;  // r_1 < ... < r_{s-1}
  Nat lo, hi;                   // range for the s-th rest

  void validate() const;
};

/// Exhaustive scan over q' in [2, q_max]; returns the first q' whose rests
/// against w equal the prescribed values for i < s, with the last rest in
/// [lo, hi] and the whole rest sequence still superincreasing. Stands in for
/// the hypothetical polynomial solver of the reduction theorem. steps_out,
/// when given, receives the number of candidates tried.
std::optional<Nat> problem4_oracle(const Problem4Instance& inst,
                                   const Nat& q_max,
                                   std::uint64_t* steps_out = nullptr);

enum class ReductionStage { TrialDivision, Oracle };

struct ReductionReport {
  Nat n;
  std::optional<Nat> factor;
  ReductionStage stage = ReductionStage::TrialDivision;
  std::size_t subproblem_index = 0;  // 1-based winner; 0 when not applicable
  std::size_t subproblem_count = 0;
  std::uint64_t wall_steps = 0;  // candidate divisors examined on the
                                 // reporting path

  std::string to_line() const;
};

using Problem4Solver = std::function<std::optional<Nat>(
    const Problem4Instance&, const Nat&, std::uint64_t*)>;

/// Probabilistic reduction of factoring to Problem 4. Fixes the
/// superincreasing rests r_i = 2^(i-1), trial-divides n up to 3*sum(r),
/// then runs ceil(log eta / log(2/3)) subproblems with random last entries
/// in (n/2, n) in parallel, stopping at the first solution. Any oracle
/// answer is validated as a proper divisor before being reported.
ReductionReport factor_via_problem4(const Nat& n, std::size_t s, double eta,
                                    RandomSource& rng,
                                    const Problem4Solver& solver = {});

}  // namespace knapforge
