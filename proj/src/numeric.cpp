#include "knapforge/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace knapforge {
namespace {

// splitmix64 finalizer; also used for seed splitting.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Permutation::Permutation(std::vector<std::uint32_t> image)
    : img_(std::move(image)) {
  std::vector<bool> seen(img_.size(), false);
  for (std::uint32_t v : img_) {
    if (v >= img_.size() || seen[v])
      throw ParamError("permutation image is not a bijection");
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::uint32_t> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<std::uint32_t>(i);
  return Permutation(std::move(img));
}

Permutation Permutation::random(std::size_t n, RandomSource& rng) {
  std::vector<std::uint32_t> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<std::uint32_t>(i);
  for (std::size_t i = n; i > 1; --i) {
    std::uint64_t j = rng.uniform_u64(0, i - 1);
    std::swap(img[i - 1], img[j]);
  }
  return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
  std::vector<std::uint32_t> inv(img_.size());
  for (std::size_t i = 0; i < img_.size(); ++i)
    inv[img_[i]] = static_cast<std::uint32_t>(i);
  return Permutation(std::move(inv));
}

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed), state_(seed) {}

std::uint64_t RandomSource::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

std::uint64_t RandomSource::uniform_u64(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) throw ParamError("uniform_u64: empty range");
  std::uint64_t range = hi - lo;  // inclusive width - 1
  if (range == UINT64_MAX) return next_u64();
  ++range;
  // Power-of-two mask rejection.
  std::uint64_t mask = range - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  for (;;) {
    std::uint64_t v = next_u64() & mask;
    if (v < range) return lo + v;
  }
}

Nat RandomSource::uniform_nat(const Nat& lo, const Nat& hi) {
  if (lo > hi) throw ParamError("uniform_nat: empty range");
  Nat range = hi - lo + 1;
  if (range.fits_ulong_p())
    return lo + Nat(uniform_u64(0, range.get_ui() - 1));
  std::size_t bits = mpz_sizeinbase(Nat(range - 1).get_mpz_t(), 2);
  std::size_t words = (bits + 63) / 64;
  std::vector<std::uint64_t> buf(words);
  Nat v;
  for (;;) {
    for (auto& w : buf) w = next_u64();
    mpz_import(v.get_mpz_t(), words, -1, sizeof(std::uint64_t), -1, 0,
               buf.data());
    mpz_tdiv_r_2exp(v.get_mpz_t(), v.get_mpz_t(), bits);
    if (v < range) return lo + v;
  }
}

RandomSource RandomSource::child(std::uint64_t index) const {
  return RandomSource(mix64(seed_ + (index + 1) * 0x9e3779b97f4a7c15ULL));
}

std::pair<Nat, Nat> floor_div_rem(const Nat& a, const Nat& b) {
  if (b == 0) throw ParamError("floor_div_rem: division by zero");
  Nat q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return {q, r};
}

Int dot(const RowVec& x, const ColVec& m) {
  if (x.size() != m.size()) throw ShapeError("dot: length mismatch");
  Int acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (m[i] == 0) continue;
    if (m[i] == 1)
      acc += x[i];
    else
      acc += x[i] * m[i];
  }
  return acc;
}

RowVec permutation_matrix_apply(const Permutation& perm, const RowVec& v,
                                Side side) {
  if (perm.size() != v.size())
    throw ShapeError("permutation_matrix_apply: size mismatch");
  RowVec out(v.size());
  if (side == Side::Left) {
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[perm(i)];
  } else {
    for (std::size_t i = 0; i < v.size(); ++i) out[perm(i)] = v[i];
  }
  return out;
}

ColVec mat_vec(const IntMatrix& a, const ColVec& v) {
  if (a.cols != v.size()) throw ShapeError("mat_vec: shape mismatch");
  ColVec out(a.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    Int acc = 0;
    for (std::size_t j = 0; j < a.cols; ++j) acc += a.at(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

std::size_t bit_length(const Nat& n) {
  if (n == 0) return 0;
  return mpz_sizeinbase(n.get_mpz_t(), 2);
}

Nat parse_nat(const std::string& text) {
  if (text.empty()) throw ParamError("empty integer token");
  for (char c : text)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ParamError("not a decimal natural: '" + text + "'");
  return Nat(text, 10);
}

}  // namespace knapforge
