#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "knapforge/cryptosystems.hpp"
#include "knapforge/numeric.hpp"

namespace knapforge {

/// Dense row-major matrix of exact rationals. Rows double as lattice basis
/// vectors.
struct RatMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rat> e;

  RatMatrix() = default;
  RatMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), e(r * c) {}

  Rat& at(std::size_t i, std::size_t j) { return e[i * cols + j]; }
  const Rat& at(std::size_t i, std::size_t j) const { return e[i * cols + j]; }
  bool operator==(const RatMatrix&) const = default;
};

struct LLLResult {
  RatMatrix reduced;     // c_1..c_n as rows
  IntMatrix transform;   // unimodular psi with reduced = psi * input
  std::uint64_t steps;   // main-loop visits (size-reduce + swap test each)
  Rat delta;
};

/// Exact-arithmetic LLL on the rows of `basis` (ambient dimension >= rank).
/// Throws RankError on dependent rows. The step counter increments once per
/// k-loop visit, so equal inputs always report equal counts; the whole run
/// commutes with scalar scaling of the input.
LLLResult lll_reduce(const RatMatrix& basis, const Rat& delta = Rat(3, 4));

struct AttackOutcome {
  std::optional<Message> message;  // empty = FAILURE
  std::uint64_t lll_steps = 0;
  std::optional<std::size_t> row;  // reduced row that produced the message

  std::string to_line() const;
};

/// Embedding attack: lattice spanned by rows (0..lambda..0, w_i) and
/// (0..0, N) with lambda = 2^(-2s) * min(w_i); accepts a reduced row whose
/// transform coefficients (or their negation) are 0/1 over the first s
/// columns and re-encrypt to N.
AttackOutcome attack1(const PublicKey& pub, const Nat& ciphertext);

/// Generalized attack on D = X + lambda * M_pert where X carries
/// (w_1..w_s, N) in the last column and M_pert has entries in [-1, 1].
/// attack1 is the special case M_pert = (identity block, zero last row).
AttackOutcome attack2(const PublicKey& pub, const Nat& ciphertext,
                      const RatMatrix& perturbation);

/// The attack-1 perturbation pattern for a given dimension s.
RatMatrix attack1_pattern(std::size_t s);

/// Random perturbation with dyadic entries k/2^20, k uniform in
/// [-2^20, 2^20].
RatMatrix random_unit_perturbation(std::size_t n, RandomSource& rng);

struct StabilityRow {
  Nat q;
  std::size_t samples = 0;
  std::size_t step_matches = 0;
  std::size_t result_matches = 0;
};

struct StabilityResult {
  std::vector<StabilityRow> rows;

  /// Line-oriented records plus a summary line.
  std::string to_text() const;
};

/// For each sampled perturbation and each q: attack2 on N0 = x0*m and on
/// N1 = (q*x0 + eps)*m; records whether LLL step counts and attack results
/// agree. Samples run on seed-split child sources, so the table does not
/// depend on scheduling.
StabilityResult stability_experiment(const Message& m, const RowVec& x0,
                                     const std::vector<Nat>& q_list,
                                     const RowVec& eps, std::size_t samples,
                                     RandomSource& rng);

}  // namespace knapforge
