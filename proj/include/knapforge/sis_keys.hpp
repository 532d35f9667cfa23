#pragma once

#include <vector>

#include "knapforge/numeric.hpp"

namespace knapforge {

/// Factored form of the secret s x s matrix P_sigma * L * U * N * P_tau.
/// L is unit lower-triangular with first column all ones, N is unit
/// lower-triangular with last row all ones; both are implicit. Only U (upper
/// triangular, diagonal >= 1) and the two permutations are stored. The matrix
/// is inverted through the factors; the dense product exists only for key
/// publication and tests.
struct EpsilonMatrix {
  std::size_t s = 0;
  Nat x_bound;
  Permutation sigma;
  Permutation tau;
  IntMatrix u;  // s x s, zero below the diagonal

  EpsilonMatrix() = default;
  EpsilonMatrix(std::size_t s, Nat x_bound, Permutation sigma, Permutation tau,
                IntMatrix u);
};

/// Row whose entries read in sigma order form a superincreasing sequence.
struct SuperincreasingRow {
  RowVec eps;
  Permutation sigma;
};

/// Random factored matrix with U entries uniform in {1..x_bound} and uniform
/// random permutations. Every dense entry lands in [0, 4*x_bound] and row
/// 1-norms stay below 4*s*x_bound.
EpsilonMatrix gen_epsilon_matrix(std::size_t s, const Nat& x_bound,
                                 RandomSource& rng);

/// Dense s x s product of the factors.
IntMatrix densify(const EpsilonMatrix& eps);

/// Solve densify(eps) * m = rhs through the factored form: permute, subtract
/// the first entry, back-substitute U, subtract the last entry, permute.
/// O(s^2) scalar operations; throws DecodeError if the system has no integer
/// solution.
ColVec solve_epsilon_system(const EpsilonMatrix& eps, const ColVec& rhs);

/// Entries drawn uniformly from [(2^(i-1)-1)*p, 2^(i-1)*p) in sigma order,
/// with sigma a uniform random permutation. Superincreasing by interval
/// disjointness.
SuperincreasingRow gen_superincreasing(std::size_t s, const Nat& p,
                                       RandomSource& rng);

/// True iff every element after the first strictly exceeds the sum of all
/// previous ones. Empty and singleton sequences qualify vacuously.
bool is_superincreasing(const std::vector<Nat>& seq);

/// Greedy subset-sum decode by decreasing sigma index. Returns the 0/1 column
/// m with dot(eps, m) = target; throws DecodeError if target is not
/// representable.
ColVec decode_superincreasing(const SuperincreasingRow& row, const Nat& target);

/// L1 norm of a row; entries are expected nonnegative.
Nat row_norm1(const RowVec& v);

}  // namespace knapforge
