#include "knapforge/sis_keys.hpp"

#include <utility>

namespace knapforge {

EpsilonMatrix::EpsilonMatrix(std::size_t s_, Nat x_bound_, Permutation sigma_,
                             Permutation tau_, IntMatrix u_)
    : s(s_),
      x_bound(std::move(x_bound_)),
      sigma(std::move(sigma_)),
      tau(std::move(tau_)),
      u(std::move(u_)) {
  if (s < 2) throw ParamError("epsilon matrix: s must be >= 2");
  if (sigma.size() != s || tau.size() != s || u.rows != s || u.cols != s)
    throw ShapeError("epsilon matrix: inconsistent dimensions");
  for (std::size_t i = 0; i < s; ++i) {
    if (u.at(i, i) < 1)
      throw ParamError("epsilon matrix: U diagonal entry < 1");
    for (std::size_t j = 0; j < i; ++j)
      if (u.at(i, j) != 0)
        throw ParamError("epsilon matrix: U not upper triangular");
    for (std::size_t j = i; j < s; ++j)
      if (u.at(i, j) < 0) throw ParamError("epsilon matrix: negative U entry");
  }
}

EpsilonMatrix gen_epsilon_matrix(std::size_t s, const Nat& x_bound,
                                 RandomSource& rng) {
  if (s < 2) throw ParamError("gen_epsilon_matrix: s must be >= 2");
  if (x_bound < 1) throw ParamError("gen_epsilon_matrix: x_bound must be >= 1");
  IntMatrix u(s, s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = i; j < s; ++j)
      u.at(i, j) = rng.uniform_nat(1, x_bound);
  Permutation sigma = Permutation::random(s, rng);
  Permutation tau = Permutation::random(s, rng);
  return EpsilonMatrix(s, x_bound, std::move(sigma), std::move(tau),
                       std::move(u));
}

IntMatrix densify(const EpsilonMatrix& eps) {
  const std::size_t s = eps.s;
  IntMatrix a = eps.u;
  // Left-multiply by L: row i += row 0 for i > 0.
  for (std::size_t i = 1; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) a.at(i, j) += a.at(0, j);
  // Right-multiply by N: column j += column s-1 for j < s-1.
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j + 1 < s; ++j) a.at(i, j) += a.at(i, s - 1);
  // Row permutation by sigma, column permutation by tau.
  Permutation tau_inv = eps.tau.inverse();
  IntMatrix out(s, s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j)
      out.at(i, j) = a.at(eps.sigma(i), tau_inv(j));
  return out;
}

ColVec solve_epsilon_system(const EpsilonMatrix& eps, const ColVec& rhs) {
  const std::size_t s = eps.s;
  if (rhs.size() != s) throw ShapeError("solve_epsilon_system: bad rhs length");
  // eps * m = P_sigma L U N P_tau m = rhs; peel the factors off the left.
  ColVec y(s);
  Permutation sigma_inv = eps.sigma.inverse();
  for (std::size_t i = 0; i < s; ++i) y[i] = rhs[sigma_inv(i)];
  // L w = y: w_0 = y_0, w_i = y_i - y_0.
  ColVec w(s);
  w[0] = y[0];
  for (std::size_t i = 1; i < s; ++i) w[i] = y[i] - y[0];
  // U t = w by back substitution; divisions must be exact.
  ColVec t(s);
  for (std::size_t ii = s; ii-- > 0;) {
    Int acc = w[ii];
    for (std::size_t j = ii + 1; j < s; ++j) acc -= eps.u.at(ii, j) * t[j];
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), acc.get_mpz_t(),
                eps.u.at(ii, ii).get_mpz_t());
    if (r != 0)
      throw DecodeError("solve_epsilon_system: no integer solution");
    t[ii] = q;
  }
  // N v = t: v_i = t_i for i < s-1, v_{s-1} = t_{s-1} - sum of the others.
  ColVec v(s);
  Int tail = 0;
  for (std::size_t i = 0; i + 1 < s; ++i) {
    v[i] = t[i];
    tail += t[i];
  }
  v[s - 1] = t[s - 1] - tail;
  // P_tau m = v: m[tau(i)] = v[i].
  ColVec m(s);
  for (std::size_t i = 0; i < s; ++i) m[eps.tau(i)] = v[i];
  return m;
}

SuperincreasingRow gen_superincreasing(std::size_t s, const Nat& p,
                                       RandomSource& rng) {
  if (s < 1) throw ParamError("gen_superincreasing: s must be >= 1");
  if (p < 2) throw ParamError("gen_superincreasing: p must be >= 2");
  Permutation sigma = Permutation::random(s, rng);
  RowVec eps(s);
  Nat pow = 1;  // 2^(i-1)
  for (std::size_t i = 0; i < s; ++i) {
    // First element from [1, p) rather than [0, p): a zero entry would make
    // the subset-sum map non-injective and greedy decoding ambiguous.
    Nat lo = i == 0 ? Nat(1) : Nat((pow - 1) * p);
    Nat hi = pow * p - 1;
    eps[sigma(i)] = rng.uniform_nat(lo, hi);
    pow <<= 1;
  }
  return SuperincreasingRow{std::move(eps), std::move(sigma)};
}

bool is_superincreasing(const std::vector<Nat>& seq) {
  Nat sum = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i > 0 && seq[i] <= sum) return false;
    sum += seq[i];
  }
  return true;
}

ColVec decode_superincreasing(const SuperincreasingRow& row,
                              const Nat& target) {
  if (target < 0) throw ParamError("decode_superincreasing: negative target");
  const std::size_t s = row.eps.size();
  ColVec m(s);
  Nat residual = target;
  for (std::size_t i = s; i-- > 0;) {
    const Int& v = row.eps[row.sigma(i)];
    if (residual >= v) {
      m[row.sigma(i)] = 1;
      residual -= v;
    }
  }
  if (residual != 0)
    throw DecodeError("decode_superincreasing: target not representable");
  return m;
}

Nat row_norm1(const RowVec& v) {
  Nat sum = 0;
  for (const Int& x : v.e) sum += abs(x);
  return sum;
}

}  // namespace knapforge
