#include "knapforge/lattice.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>

namespace knapforge {
namespace {

Rat rat_dot(const RatMatrix& a, std::size_t i, const RatMatrix& b,
            std::size_t j) {
  Rat acc = 0;
  for (std::size_t k = 0; k < a.cols; ++k) acc += a.at(i, k) * b.at(j, k);
  return acc;
}

// Nearest integer to an exact rational, halves rounded up.
Int round_rat(const Rat& x) {
  Int num = x.get_num(), den = x.get_den();
  Int q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (2 * r >= den) ++q;
  return q;
}

}  // namespace

LLLResult lll_reduce(const RatMatrix& basis, const Rat& delta) {
  const std::size_t n = basis.rows;
  const std::size_t m = basis.cols;
  if (n == 0 || m < n) throw ParamError("lll_reduce: bad basis shape");
  if (!(delta > Rat(1, 4) && delta < 1))
    throw ParamError("lll_reduce: delta must be in (1/4, 1)");

  RatMatrix b = basis;
  IntMatrix h = IntMatrix::identity(n);

  // Exact Gram-Schmidt data: mu (strictly lower triangular) and the squared
  // norms of the orthogonalized vectors. The b*_i themselves are not kept.
  RatMatrix gso(n, m);
  std::vector<Rat> norm2(n);
  std::vector<std::vector<Rat>> mu(n, std::vector<Rat>(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < m; ++k) gso.at(i, k) = b.at(i, k);
    for (std::size_t j = 0; j < i; ++j) {
      Rat proj = rat_dot(b, i, gso, j);
      if (norm2[j] == 0) throw RankError("lll_reduce: dependent rows");
      mu[i][j] = proj / norm2[j];
      for (std::size_t k = 0; k < m; ++k)
        gso.at(i, k) -= mu[i][j] * gso.at(j, k);
    }
    norm2[i] = rat_dot(gso, i, gso, i);
    if (norm2[i] == 0) throw RankError("lll_reduce: dependent rows");
  }
  gso = RatMatrix();  // mu/norm2 are maintained incrementally from here on

  auto size_reduce = [&](std::size_t k, std::size_t l) {
    if (2 * abs(mu[k][l].get_num()) <= mu[k][l].get_den()) return;
    Int r = round_rat(mu[k][l]);
    for (std::size_t j = 0; j < m; ++j) b.at(k, j) -= r * b.at(l, j);
    for (std::size_t j = 0; j < n; ++j) h.at(k, j) -= r * h.at(l, j);
    for (std::size_t j = 0; j < l; ++j) mu[k][j] -= r * mu[l][j];
    mu[k][l] -= r;
  };

  std::uint64_t steps = 0;
  std::size_t k = 1;
  while (k < n) {
    ++steps;
    size_reduce(k, k - 1);
    if (norm2[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * norm2[k - 1]) {
      // Swap b_k, b_{k-1} and patch the Gram-Schmidt data in place.
      for (std::size_t j = 0; j < m; ++j)
        std::swap(b.at(k, j), b.at(k - 1, j));
      for (std::size_t j = 0; j < n; ++j)
        std::swap(h.at(k, j), h.at(k - 1, j));
      for (std::size_t j = 0; j + 1 < k; ++j) std::swap(mu[k][j], mu[k - 1][j]);
      Rat mu_old = mu[k][k - 1];
      Rat bn = norm2[k] + mu_old * mu_old * norm2[k - 1];
      mu[k][k - 1] = mu_old * norm2[k - 1] / bn;
      norm2[k] = norm2[k - 1] * norm2[k] / bn;
      norm2[k - 1] = bn;
      for (std::size_t i = k + 1; i < n; ++i) {
        Rat t = mu[i][k];
        mu[i][k] = mu[i][k - 1] - mu_old * t;
        mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k];
      }
      k = k > 1 ? k - 1 : 1;
    } else {
      for (std::size_t l = k - 1; l-- > 0;) size_reduce(k, l);
      ++k;
    }
  }

  LLLResult result;
  result.reduced = std::move(b);
  result.transform = std::move(h);
  result.steps = steps;
  result.delta = delta;
  return result;
}

std::string AttackOutcome::to_line() const {
  std::string out = "result=";
  if (message) {
    for (const Int& v : message->e) out += v.get_str();
  } else {
    out += "FAILURE";
  }
  out += " lll_steps=" + std::to_string(lll_steps);
  out += " row=" + (row ? std::to_string(*row) : std::string("none"));
  return out;
}

namespace {

Rat attack_lambda(const RowVec& w) {
  const Int* min = &w[0];
  for (const Int& v : w.e) {
    if (v <= 0) throw ParamError("attack: key entries must be positive");
    if (v < *min) min = &v;
  }
  Rat lambda(*min);
  Rat scale(1);
  scale <<= 2 * w.size();  // 2^(2s)
  return lambda / scale;
}

// Scan the transform rows for a 0/1 (or 0/-1) coefficient pattern over the
// first s columns whose combination reproduces the ciphertext.
std::optional<std::pair<Message, std::size_t>> accept_rows(
    const IntMatrix& transform, const RowVec& w, const Nat& ciphertext) {
  const std::size_t s = w.size();
  for (std::size_t i = 0; i < transform.rows; ++i) {
    for (int sign : {+1, -1}) {
      bool shape_ok = true;
      Message m(s);
      for (std::size_t j = 0; j < s; ++j) {
        Int c = sign * transform.at(i, j);
        if (c != 0 && c != 1) {
          shape_ok = false;
          break;
        }
        m[j] = c;
      }
      if (!shape_ok) continue;
      Int total = 0;
      for (std::size_t j = 0; j < s; ++j)
        if (m[j] == 1) total += w[j];
      if (total == ciphertext) return std::make_pair(std::move(m), i);
    }
  }
  return std::nullopt;
}

AttackOutcome run_attack(const PublicKey& pub, const Nat& ciphertext,
                         const RatMatrix& perturbation) {
  const std::size_t s = pub.dim();
  if (ciphertext < 0) throw ParamError("attack: negative ciphertext");
  if (ciphertext == 0) {
    // The zero message needs no lattice work.
    AttackOutcome out;
    out.message = Message(s);
    return out;
  }
  if (perturbation.rows != s + 1 || perturbation.cols != s + 1)
    throw ShapeError("attack: perturbation must be (s+1) x (s+1)");
  for (const Rat& v : perturbation.e)
    if (v < -1 || v > 1)
      throw ParamError("attack: perturbation entries must lie in [-1, 1]");

  Rat lambda = attack_lambda(pub.x);
  RatMatrix d(s + 1, s + 1);
  for (std::size_t i = 0; i < s; ++i) d.at(i, s) = Rat(pub.x[i]);
  d.at(s, s) = Rat(ciphertext);
  for (std::size_t i = 0; i <= s; ++i)
    for (std::size_t j = 0; j <= s; ++j)
      d.at(i, j) += lambda * perturbation.at(i, j);

  LLLResult lll = lll_reduce(d);
  AttackOutcome out;
  out.lll_steps = lll.steps;
  if (auto hit = accept_rows(lll.transform, pub.x, ciphertext)) {
    out.message = std::move(hit->first);
    out.row = hit->second;
  }
  return out;
}

}  // namespace

RatMatrix attack1_pattern(std::size_t s) {
  RatMatrix m(s + 1, s + 1);
  for (std::size_t i = 0; i < s; ++i) m.at(i, i) = 1;
  return m;
}

AttackOutcome attack1(const PublicKey& pub, const Nat& ciphertext) {
  return run_attack(pub, ciphertext, attack1_pattern(pub.dim()));
}

AttackOutcome attack2(const PublicKey& pub, const Nat& ciphertext,
                      const RatMatrix& perturbation) {
  return run_attack(pub, ciphertext, perturbation);
}

RatMatrix random_unit_perturbation(std::size_t n, RandomSource& rng) {
  RatMatrix m(n, n);
  const std::uint64_t denom = 1u << 20;
  for (Rat& v : m.e) {
    std::int64_t k = static_cast<std::int64_t>(rng.uniform_u64(0, 2 * denom)) -
                     static_cast<std::int64_t>(denom);
    v = Rat(static_cast<long>(k), static_cast<unsigned long>(denom));
    v.canonicalize();
  }
  return m;
}

std::string StabilityResult::to_text() const {
  std::string out;
  for (const auto& r : rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  " step_match=%.4f result_match=%.4f samples=%zu",
                  r.samples ? double(r.step_matches) / double(r.samples) : 0.0,
                  r.samples ? double(r.result_matches) / double(r.samples)
                            : 0.0,
                  r.samples);
    out += "q=" + r.q.get_str() + buf + "\n";
  }
  return out;
}

StabilityResult stability_experiment(const Message& m, const RowVec& x0,
                                     const std::vector<Nat>& q_list,
                                     const RowVec& eps, std::size_t samples,
                                     RandomSource& rng) {
  const std::size_t s = x0.size();
  if (m.size() != s || eps.size() != s)
    throw ShapeError("stability_experiment: mismatched dimensions");
  if (q_list.empty() || samples == 0)
    throw ParamError("stability_experiment: empty q list or zero samples");
  for (const Int& v : x0.e)
    if (v < 1) throw ParamError("stability_experiment: x0 entries must be >= 1");
  for (const Int& v : eps.e)
    if (v < 0) throw ParamError("stability_experiment: eps entries must be >= 0");
  for (const Nat& q : q_list)
    if (q < 1) throw ParamError("stability_experiment: q must be >= 1");

  PublicKey base{x0, 2, 2, 1, 0};
  Nat n0 = dot(x0, m);

  std::vector<PublicKey> shifted;
  std::vector<Nat> n1;
  shifted.reserve(q_list.size());
  for (const Nat& q : q_list) {
    RowVec x1(s);
    for (std::size_t j = 0; j < s; ++j) x1[j] = q * x0[j] + eps[j];
    n1.push_back(dot(x1, m));
    shifted.push_back(PublicKey{std::move(x1), 2, 2, 1, 0});
  }

  struct Cell {
    bool step_match = false;
    bool result_match = false;
  };
  std::vector<std::vector<Cell>> table(samples,
                                       std::vector<Cell>(q_list.size()));
  std::exception_ptr failure_ptr;
  std::mutex failure_mu;

  auto run_sample = [&](std::size_t t) {
    RandomSource child = rng.child(t);
    RatMatrix pert = random_unit_perturbation(s + 1, child);
    AttackOutcome ref = attack2(base, n0, pert);
    for (std::size_t qi = 0; qi < q_list.size(); ++qi) {
      AttackOutcome got = attack2(shifted[qi], n1[qi], pert);
      Cell& cell = table[t][qi];
      cell.step_match = got.lll_steps == ref.lll_steps;
      if (ref.message && got.message)
        cell.result_match = *ref.message == *got.message;
      else
        cell.result_match = !ref.message && !got.message;
    }
  };

  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (workers > 1 && samples > 1) {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i)
      pool.emplace_back([&] {
        for (;;) {
          std::size_t t = next.fetch_add(1);
          if (t >= samples) return;
          try {
            run_sample(t);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure_ptr) failure_ptr = std::current_exception();
            return;
          }
        }
      });
    for (auto& th : pool) th.join();
    if (failure_ptr) std::rethrow_exception(failure_ptr);
  } else {
    for (std::size_t t = 0; t < samples; ++t) run_sample(t);
  }

  StabilityResult result;
  for (std::size_t qi = 0; qi < q_list.size(); ++qi) {
    StabilityRow row;
    row.q = q_list[qi];
    row.samples = samples;
    for (std::size_t t = 0; t < samples; ++t) {
      if (table[t][qi].step_match) ++row.step_matches;
      if (table[t][qi].result_match) ++row.result_matches;
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace knapforge
