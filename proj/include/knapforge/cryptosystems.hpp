#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "knapforge/numeric.hpp"
#include "knapforge/sis_keys.hpp"

namespace knapforge {

/// Plaintext: column over {0..M-1}.
using Message = ColVec;

struct Params {
  std::size_t s = 0;
  Nat p;
  unsigned alphabet = 2;  // M
  int variant = 1;        // 1 or 2
  int system = 1;         // 1, 2 or 3
  std::uint64_t seed = 0;

  void validate() const;
};

struct PublicKey {
  RowVec x;
  unsigned alphabet = 2;
  int system = 1;
  int variant = 1;
  std::uint64_t seed = 0;

  std::size_t dim() const { return x.size(); }
};

/// System 1 secret: factored epsilon matrix, the q_i / p_i chains and the
/// seed row x_0. The published row is kept for the final re-encryption check;
/// decryption touches it nowhere else.
struct PrivateKey1 {
  EpsilonMatrix eps;
  std::vector<Nat> q;       // q_1..q_s
  std::vector<Nat> p_mult;  // p_1..p_s
  RowVec x0;
  RowVec x_pub;
  unsigned alphabet = 2;
  int variant = 1;
  std::uint64_t seed = 0;
};

struct PrivateKey2 {
  SuperincreasingRow row;
  Nat q1;
  Nat p1;
  RowVec x0;
  RowVec x_pub;
  unsigned alphabet = 2;
  int variant = 1;
  std::uint64_t seed = 0;
};

struct PrivateKey3 {
  RowVec eps1;
  RowVec eps2;
  SuperincreasingRow mu;  // mu.eps = eps2 - eps1 entrywise
  Nat q1, p1, q2, p2;
  RowVec x0;
  RowVec x_pub;
  unsigned alphabet = 2;
  int variant = 1;
  std::uint64_t seed = 0;
};

/// x_i = q_i x_{i-1} + p_i eps_i with eps = eps(s, floor(p/4s)), p_i = 1 and
/// q_i uniform in [(M-1)p+1, 2(M-1)p]. Variant 1 draws x_0 entries in
/// [0, 2^s], variant 2 in [0, s^5]. Requires p >= 4s.
std::pair<PublicKey, PrivateKey1> keygen1(const Params& params);

/// x_1 = q_1 x_0 + eps with a superincreasing eps and q_1 uniform in
/// [2^s p, 2^(s+1) p]. Variant 1 draws x_0 entries in [0, p], variant 2 in
/// [0, 2^s].
std::pair<PublicKey, PrivateKey2> keygen2(const Params& params);

/// Hybrid: x_1 = q_1 x_0 + eps_1, x_2 = q_2 x_1 + eps_2 where eps_1 is
/// uniform in [0, p)^s and eps_2 = eps_1 + mu for a superincreasing mu.
std::pair<PublicKey, PrivateKey3> keygen3(const Params& params);

/// Ciphertext dot(x, m); message entries must lie in {0..M-1}.
Nat encrypt(const PublicKey& pub, const Message& m);

/// Full decryption including the final re-encryption check; any garbage
/// input surfaces as DecodeError.
Message decrypt1(const PrivateKey1& priv, const Nat& ciphertext);
Message decrypt2(const PrivateKey2& priv, const Nat& ciphertext);
Message decrypt3(const PrivateKey3& priv, const Nat& ciphertext);

/// Decryption stages without the re-encryption check (never consults the
/// public row). Exposed for tests and analysis.
Message decrypt1_raw(const PrivateKey1& priv, const Nat& ciphertext);
Message decrypt2_raw(const PrivateKey2& priv, const Nat& ciphertext);
Message decrypt3_raw(const PrivateKey3& priv, const Nat& ciphertext);

}  // namespace knapforge
