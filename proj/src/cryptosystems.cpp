#include "knapforge/cryptosystems.hpp"

#include <utility>

namespace knapforge {
namespace {

RowVec random_row(std::size_t s, const Nat& lo, const Nat& hi,
                  RandomSource& rng) {
  RowVec v(s);
  for (std::size_t i = 0; i < s; ++i) v[i] = rng.uniform_nat(lo, hi);
  return v;
}

RowVec chain_step(const Nat& q, const RowVec& prev, const Nat& p,
                  const RowVec& eps_row) {
  RowVec next(prev.size());
  for (std::size_t j = 0; j < prev.size(); ++j)
    next[j] = q * prev[j] + p * eps_row[j];
  return next;
}

// (M-1) * p_i * ||eps_i||_1 < q_i; violated only on an internal logic error.
void check_lambda(const Nat& p_i, const Nat& q_i, const Nat& norm1,
                  unsigned alphabet) {
  if ((alphabet - 1) * p_i * norm1 >= q_i)
    throw Error("internal: lambda condition violated by generated key");
}

void check_alphabet(const Message& m, unsigned alphabet) {
  for (const Int& v : m.e)
    if (v < 0 || v >= alphabet)
      throw ParamError("message entry outside the alphabet");
}

Nat pow2(std::size_t k) {
  Nat v = 1;
  v <<= k;
  return v;
}

}  // namespace

void Params::validate() const {
  if (system < 1 || system > 3) throw ParamError("system must be 1, 2 or 3");
  if (variant != 1 && variant != 2) throw ParamError("variant must be 1 or 2");
  if (alphabet < 2) throw ParamError("alphabet bound M must be >= 2");
  std::size_t s_min = system == 2 ? 1 : 2;
  if (s < s_min) throw ParamError("dimension s too small");
  if (p < 2) throw ParamError("p must be >= 2");
  if (p < static_cast<long>(s)) throw ParamError("p must be >= s");
}

std::pair<PublicKey, PrivateKey1> keygen1(const Params& params) {
  params.validate();
  if (params.system != 1) throw ParamError("keygen1: params.system != 1");
  const std::size_t s = params.s;
  if (params.p < 4 * Nat(static_cast<unsigned long>(s)))
    throw ParamError("keygen1: p must be >= 4s");
  RandomSource rng(params.seed);

  Nat x_bound = params.p / (4 * Nat(static_cast<unsigned long>(s)));
  EpsilonMatrix eps = gen_epsilon_matrix(s, x_bound, rng);
  IntMatrix dense = densify(eps);

  // q_i ranges scale with (M-1) so the lambda condition survives M > 2.
  Nat q_lo = (params.alphabet - 1) * params.p + 1;
  Nat q_hi = 2 * (params.alphabet - 1) * params.p;
  std::vector<Nat> q(s), p_mult(s, Nat(1));
  for (std::size_t i = 0; i < s; ++i) q[i] = rng.uniform_nat(q_lo, q_hi);

  Nat x0_hi;
  if (params.variant == 1)
    x0_hi = pow2(s);
  else
    mpz_ui_pow_ui(x0_hi.get_mpz_t(), s, 5);
  RowVec x0 = random_row(s, 0, x0_hi, rng);

  RowVec x = x0;
  for (std::size_t i = 0; i < s; ++i) {
    RowVec eps_row(s);
    for (std::size_t j = 0; j < s; ++j) eps_row[j] = dense.at(i, j);
    check_lambda(p_mult[i], q[i], row_norm1(eps_row), params.alphabet);
    x = chain_step(q[i], x, p_mult[i], eps_row);
  }

  PublicKey pub{x, params.alphabet, 1, params.variant, params.seed};
  PrivateKey1 priv{std::move(eps), std::move(q),       std::move(p_mult),
                   std::move(x0),  std::move(x),        params.alphabet,
                   params.variant, params.seed};
  return {std::move(pub), std::move(priv)};
}

std::pair<PublicKey, PrivateKey2> keygen2(const Params& params) {
  params.validate();
  if (params.system != 2) throw ParamError("keygen2: params.system != 2");
  if (params.alphabet != 2)
    throw ParamError("keygen2: greedy decoding requires M = 2");
  const std::size_t s = params.s;
  RandomSource rng(params.seed);

  SuperincreasingRow row = gen_superincreasing(s, params.p, rng);
  Nat q1 = rng.uniform_nat(pow2(s) * params.p, pow2(s + 1) * params.p);
  Nat p1 = 1;
  Nat x0_hi = params.variant == 1 ? params.p : pow2(s);
  RowVec x0 = random_row(s, 0, x0_hi, rng);

  check_lambda(p1, q1, row_norm1(row.eps), params.alphabet);
  RowVec x = chain_step(q1, x0, p1, row.eps);

  PublicKey pub{x, params.alphabet, 2, params.variant, params.seed};
  PrivateKey2 priv{std::move(row), std::move(q1),  std::move(p1),
                   std::move(x0),  std::move(x),   params.alphabet,
                   params.variant, params.seed};
  return {std::move(pub), std::move(priv)};
}

std::pair<PublicKey, PrivateKey3> keygen3(const Params& params) {
  params.validate();
  if (params.system != 3) throw ParamError("keygen3: params.system != 3");
  if (params.alphabet != 2)
    throw ParamError("keygen3: greedy decoding requires M = 2");
  const std::size_t s = params.s;
  RandomSource rng(params.seed);

  RowVec eps1 = random_row(s, 0, params.p - 1, rng);
  SuperincreasingRow mu = gen_superincreasing(s, params.p, rng);
  RowVec eps2(s);
  for (std::size_t j = 0; j < s; ++j) eps2[j] = eps1[j] + mu.eps[j];

  // ||eps1||_1 <= s(p-1) and ||eps2||_1 < sp + 2^s p, so q_1 and q_2 one and
  // two powers of two above 2^s p keep both lambda conditions.
  Nat q1 = rng.uniform_nat(pow2(s + 1) * params.p, pow2(s + 2) * params.p);
  Nat q2 = rng.uniform_nat(pow2(s + 2) * params.p, pow2(s + 3) * params.p);
  Nat p1 = 1, p2 = 1;
  RowVec x0 = random_row(s, 0, params.p, rng);

  check_lambda(p1, q1, row_norm1(eps1), params.alphabet);
  check_lambda(p2, q2, row_norm1(eps2), params.alphabet);
  RowVec x1 = chain_step(q1, x0, p1, eps1);
  RowVec x2 = chain_step(q2, x1, p2, eps2);

  PublicKey pub{x2, params.alphabet, 3, params.variant, params.seed};
  PrivateKey3 priv{std::move(eps1), std::move(eps2), std::move(mu),
                   std::move(q1),   std::move(p1),   std::move(q2),
                   std::move(p2),   std::move(x0),   std::move(x2),
                   params.alphabet, params.variant,  params.seed};
  return {std::move(pub), std::move(priv)};
}

Nat encrypt(const PublicKey& pub, const Message& m) {
  if (m.size() != pub.dim()) throw ShapeError("encrypt: message length != s");
  check_alphabet(m, pub.alphabet);
  return dot(pub.x, m);
}

namespace {

// N_{i-1} = floor(N_i / q_i), O_i = (N_i - q_i N_{i-1}) / p_i.
Nat peel_layer(Nat& n, const Nat& q, const Nat& p) {
  auto [quot, rem] = floor_div_rem(n, q);
  auto [o, o_rem] = floor_div_rem(rem, p);
  if (o_rem != 0) throw DecodeError("ciphertext layer not divisible by p_i");
  n = quot;
  return o;
}

void verify_ciphertext(const RowVec& x_pub, unsigned alphabet,
                       const Message& m, const Nat& ciphertext) {
  PublicKey pub{x_pub, alphabet, 0, 0, 0};
  if (encrypt(pub, m) != ciphertext)
    throw DecodeError("invalid ciphertext: re-encryption mismatch");
}

}  // namespace

Message decrypt1_raw(const PrivateKey1& priv, const Nat& ciphertext) {
  if (ciphertext < 0) throw ParamError("decrypt: negative ciphertext");
  const std::size_t s = priv.q.size();
  Nat n = ciphertext;
  ColVec rests(s);
  for (std::size_t i = s; i-- > 0;)
    rests[i] = peel_layer(n, priv.q[i], priv.p_mult[i]);
  Message m = solve_epsilon_system(priv.eps, rests);
  for (const Int& v : m.e)
    if (v < 0 || v >= priv.alphabet)
      throw DecodeError("recovered message outside the alphabet");
  return m;
}

Message decrypt1(const PrivateKey1& priv, const Nat& ciphertext) {
  Message m;
  try {
    m = decrypt1_raw(priv, ciphertext);
  } catch (const ParamError&) {
    throw;
  } catch (const Error&) {
    throw DecodeError("invalid ciphertext");
  }
  verify_ciphertext(priv.x_pub, priv.alphabet, m, ciphertext);
  return m;
}

Message decrypt2_raw(const PrivateKey2& priv, const Nat& ciphertext) {
  if (ciphertext < 0) throw ParamError("decrypt: negative ciphertext");
  Nat n = ciphertext;
  Nat target = peel_layer(n, priv.q1, priv.p1);
  return decode_superincreasing(priv.row, target);
}

Message decrypt2(const PrivateKey2& priv, const Nat& ciphertext) {
  Message m;
  try {
    m = decrypt2_raw(priv, ciphertext);
  } catch (const ParamError&) {
    throw;
  } catch (const Error&) {
    throw DecodeError("invalid ciphertext");
  }
  verify_ciphertext(priv.x_pub, priv.alphabet, m, ciphertext);
  return m;
}

Message decrypt3_raw(const PrivateKey3& priv, const Nat& ciphertext) {
  if (ciphertext < 0) throw ParamError("decrypt: negative ciphertext");
  Nat n = ciphertext;
  Nat o2 = peel_layer(n, priv.q2, priv.p2);
  Nat o1 = peel_layer(n, priv.q1, priv.p1);
  Nat omega = o2 - o1;
  if (omega < 0) throw DecodeError("invalid ciphertext: negative omega");
  return decode_superincreasing(priv.mu, omega);
}

Message decrypt3(const PrivateKey3& priv, const Nat& ciphertext) {
  Message m;
  try {
    m = decrypt3_raw(priv, ciphertext);
  } catch (const ParamError&) {
    throw;
  } catch (const Error&) {
    throw DecodeError("invalid ciphertext");
  }
  verify_ciphertext(priv.x_pub, priv.alphabet, m, ciphertext);
  return m;
}

}  // namespace knapforge
