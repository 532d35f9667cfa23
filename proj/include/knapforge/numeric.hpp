#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "knapforge/errors.hpp"

namespace knapforge {

using Int = mpz_class;
// Nonnegative by convention; operations that require naturals check at their
// boundary rather than in the type.
using Nat = mpz_class;
using Rat = mpq_class;

struct RowVec {
  std::vector<Int> e;

  RowVec() = default;
  explicit RowVec(std::size_t n) : e(n) {}
  explicit RowVec(std::vector<Int> v) : e(std::move(v)) {}

  std::size_t size() const { return e.size(); }
  Int& operator[](std::size_t i) { return e[i]; }
  const Int& operator[](std::size_t i) const { return e[i]; }
  bool operator==(const RowVec&) const = default;
};

struct ColVec {
  std::vector<Int> e;

  ColVec() = default;
  explicit ColVec(std::size_t n) : e(n) {}
  explicit ColVec(std::vector<Int> v) : e(std::move(v)) {}

  std::size_t size() const { return e.size(); }
  Int& operator[](std::size_t i) { return e[i]; }
  const Int& operator[](std::size_t i) const { return e[i]; }
  bool operator==(const ColVec&) const = default;
};

// Dense row-major integer matrix.
struct IntMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Int> e;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), e(r * c) {}

  Int& at(std::size_t i, std::size_t j) { return e[i * cols + j]; }
  const Int& at(std::size_t i, std::size_t j) const { return e[i * cols + j]; }
  bool operator==(const IntMatrix&) const = default;

  static IntMatrix identity(std::size_t n);
};

class RandomSource;

// Bijection on {0..n-1} stored as an image array: i -> image[i].
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::uint32_t> image);

  static Permutation identity(std::size_t n);
  static Permutation random(std::size_t n, RandomSource& rng);

  std::size_t size() const { return img_.size(); }
  std::uint32_t operator()(std::size_t i) const { return img_[i]; }
  const std::vector<std::uint32_t>& image() const { return img_; }
  Permutation inverse() const;
  bool operator==(const Permutation&) const = default;

 private:
  std::vector<std::uint32_t> img_;
};

/// Deterministic seedable random source (splitmix64 stream). Identical seeds
/// yield identical streams; child(i) derives an independent source from the
/// construction seed and i, so parallel consumers are order-independent.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  std::uint64_t next_u64();
  /// Uniform on [lo, hi], both ends inclusive. Rejection sampled (no modulo
  /// bias).
  std::uint64_t uniform_u64(std::uint64_t lo, std::uint64_t hi);
  Nat uniform_nat(const Nat& lo, const Nat& hi);
  RandomSource child(std::uint64_t index) const;
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

/// Euclidean division a = q*b + r with 0 <= r < b. Throws ParamError on b = 0.
std::pair<Nat, Nat> floor_div_rem(const Nat& a, const Nat& b);

/// Inner product of a row with a column of equal length.
Int dot(const RowVec& x, const ColVec& m);

enum class Side { Left, Right };

/// Multiply v by the permutation matrix P (P[i][perm(i)] = 1) on the given
/// side: Left yields out[i] = v[perm(i)], Right yields out[perm(i)] = v[i].
RowVec permutation_matrix_apply(const Permutation& perm, const RowVec& v,
                                Side side);

ColVec mat_vec(const IntMatrix& a, const ColVec& v);

/// Bits needed to store n: ceil(log2(n+1)); 0 for n = 0.
std::size_t bit_length(const Nat& n);

/// Parse a nonnegative decimal integer, rejecting anything else.
Nat parse_nat(const std::string& text);

}  // namespace knapforge
