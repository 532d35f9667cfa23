// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Runs the full set in a few minutes on a laptop.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "knapforge/analysis.hpp"
#include "knapforge/bench.hpp"
#include "knapforge/cryptosystems.hpp"
#include "knapforge/keyfile.hpp"
#include "knapforge/lattice.hpp"
#include "knapforge/reduction.hpp"
#include "oracles.hpp"

using namespace knapforge;

namespace {

int g_failures = 0;

void report(int index, const char* name, bool pass, const std::string& detail) {
  std::printf("[%2d] %s %-28s %s\n", index, pass ? "PASS" : "FAIL", name,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

Params make_params(int system, std::size_t s, const Nat& p, std::uint64_t seed,
                   int variant = 1) {
  Params params;
  params.s = s;
  params.p = p;
  params.variant = variant;
  params.system = system;
  params.seed = seed;
  return params;
}

Message random_message(std::size_t s, RandomSource& rng) {
  Message m(s);
  for (std::size_t i = 0; i < s; ++i) m[i] = rng.uniform_u64(0, 1);
  return m;
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// 1. Exhaustive roundtrips at s = 8 plus 1000 random roundtrips at
//    production dimensions, zero failures.
void criterion_roundtrip() {
  auto start = std::chrono::steady_clock::now();
  std::size_t checked = 0;
  bool ok = true;

  auto [pub1s, sk1s] = keygen1(make_params(1, 8, 64, 101));
  auto [pub2s, sk2s] = keygen2(make_params(2, 8, 40, 102));
  auto [pub3s, sk3s] = keygen3(make_params(3, 8, 16, 103));
  for (std::uint64_t mask = 0; mask < 256 && ok; ++mask) {
    Message m(8);
    for (std::size_t b = 0; b < 8; ++b) m[b] = (mask >> b) & 1;
    ok = ok && decrypt1(sk1s, encrypt(pub1s, m)) == m;
    ok = ok && decrypt2(sk2s, encrypt(pub2s, m)) == m;
    ok = ok && decrypt3(sk3s, encrypt(pub3s, m)) == m;
    checked += 3;
  }
  double exhaustive_time = elapsed(start);

  auto [pub1, sk1] = keygen1(make_params(1, 200, 1000000, 111));
  auto [pub2, sk2] = keygen2(make_params(2, 500, 1000000, 112));
  auto [pub3, sk3] = keygen3(make_params(3, 200, 1000000, 113));
  RandomSource rng(114);
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    Message m1 = random_message(200, rng);
    Message m2 = random_message(500, rng);
    Message m3 = random_message(200, rng);
    ok = ok && decrypt1(sk1, encrypt(pub1, m1)) == m1;
    ok = ok && decrypt2(sk2, encrypt(pub2, m2)) == m2;
    ok = ok && decrypt3(sk3, encrypt(pub3, m3)) == m3;
    checked += 3;
  }
  double total_time = elapsed(start);
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "%zu roundtrips, exhaustive %.1fs, total %.1fs", checked,
                exhaustive_time, total_time);
  report(1, "roundtrip-correctness", ok && exhaustive_time < 10.0 &&
                                         total_time < 120.0,
         detail);
}

// 2. Key-size table cells within 10% (system 1) / 15% (system 2 variant 1).
void criterion_key_size() {
  struct Cell {
    int system;
    std::size_t s;
    const char* p;
    double expected_mb;
    double tolerance;
  };
  const Cell cells[] = {
      {1, 200, "1000000", 0.107, 0.10},
      {1, 200, "1000000000000", 0.207, 0.10},
      {1, 400, "1000000", 0.430, 0.10},
      {1, 400, "1000000000000", 0.828, 0.10},
      {2, 500, "1000000", 0.034, 0.15},
      {2, 500, "1000000000000000000", 0.039, 0.15},
      {2, 2000, "1000000", 0.510, 0.15},
      {2, 2000, "1000000000000000000", 0.530, 0.15},
  };
  auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  std::uint64_t seed = 7000;
  for (const Cell& cell : cells) {
    Params params = make_params(cell.system, cell.s, Nat(cell.p), seed++);
    RowVec x = cell.system == 1 ? keygen1(params).first.x
                                : keygen2(params).first.x;
    double mb = key_size_mb(x);
    bool cell_ok = std::abs(mb - cell.expected_mb) <=
                   cell.tolerance * cell.expected_mb;
    ok = ok && cell_ok;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%.3f/%.3f", cell_ok ? "" : "!",
                  mb, cell.expected_mb);
    if (!detail.empty()) detail += ' ';
    detail += buf;
  }
  ok = ok && elapsed(start) < 60.0;
  report(2, "key-size-reproduction", ok, detail);
}

// 3. Density formulas within 10%.
void criterion_density() {
  bool ok = true;
  std::string detail;
  auto check = [&](double measured, double predicted, const char* tag) {
    bool this_ok = std::abs(measured - predicted) <= 0.10 * predicted;
    ok = ok && this_ok;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%s=%.4f/%.4f", this_ok ? "" : "!", tag,
                  measured, predicted);
    if (!detail.empty()) detail += ' ';
    detail += buf;
  };

  auto [pub1, sk1] = keygen1(make_params(1, 400, 1000000, 301));
  check(density(pub1.x), 1.0 / std::log2(1e6), "sys1");

  const double s = 500;
  for (const char* p_str : {"1000000", "1000000000000"}) {
    Nat p(p_str);
    double logp = std::log2(p.get_d());
    auto [pub_v1, sk_v1] =
        keygen2(make_params(2, 500, p, 302 + std::strlen(p_str), 1));
    check(density(pub_v1.x), 1.0 / (1.0 + 2.0 / s + 2.0 * logp / s), "v1");
    auto [pub_v2, sk_v2] =
        keygen2(make_params(2, 500, p, 303 + std::strlen(p_str), 2));
    check(density(pub_v2.x), 1.0 / (2.0 + 2.0 / s + logp / s), "v2");
  }
  report(3, "density-formulas", ok, detail);
}

// 4. Pseudo-key uniqueness percentages with >= 1000 trials each.
void criterion_uniqueness() {
  struct Row {
    std::size_t s;
    unsigned long p_lo, p_hi;
    double expected, tolerance;
  };
  const Row rows[] = {
      {5, 20, 35, 0.02, 0.03},
      {6, 30, 45, 0.46, 0.05},
      {7, 30, 45, 0.79, 0.05},
      {8, 40, 55, 0.96, 0.03},
  };
  auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (const Row& row : rows) {
    RandomSource rng(40000 + row.s);
    UniquenessResult result =
        uniqueness_experiment(row.s, row.p_lo, row.p_hi, 2000, rng);
    bool row_ok =
        std::abs(result.unique_fraction - row.expected) <= row.tolerance;
    ok = ok && row_ok;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%ss%zu=%.3f/%.2f", row_ok ? "" : "!",
                  row.s, result.unique_fraction, row.expected);
    if (!detail.empty()) detail += ' ';
    detail += buf;
  }
  double dt = elapsed(start);
  char buf[32];
  std::snprintf(buf, sizeof buf, " (%.0fs)", dt);
  detail += buf;
  report(4, "pseudo-key-uniqueness", ok && dt < 300.0, detail);
}

// 5. Rest-sum bound and monotonicity across (q, s) in {2..12} x {1..6}.
void criterion_rest_sum() {
  bool ok = true;
  for (unsigned long q = 2; q <= 12 && ok; ++q) {
    for (std::size_t s = 1; s <= 6 && ok; ++s) {
      Rat p = rest_sum_probability(q, s, RestSumMode::Exact);
      Rat bound = 1;
      for (std::size_t i = 1; i < s; ++i) bound *= Rat(3, 4);
      ok = ok && p <= bound;
      if (q == 2 && s == 2) ok = ok && p == Rat(3, 4);
      std::vector<Nat> counts = rest_sum_counts(q, s);
      for (std::size_t r = 1; r < counts.size(); ++r)
        ok = ok && counts[r] >= counts[r - 1];
    }
  }
  report(5, "rest-sum-bound", ok,
         ok ? "P <= (3/4)^(s-1) on 66 pairs, equality at (2,2)" : "violated");
}

// 6. Superincreasing counting: recurrence vs enumeration, plus the 1/8
//    asymptotic at s = 3.
void criterion_count_si() {
  bool ok = true;
  for (unsigned s = 1; s <= 5 && ok; ++s)
    for (long t = 0; t <= 60 && ok; ++t) {
      auto [si, all] = count_superincreasing(s, t);
      auto [si_ref, all_ref] = oracles::count_superincreasing_enumerate(s, t);
      ok = si == si_ref && all == all_ref;
    }
  auto [si, all] = count_superincreasing(3, 10000);
  Rat ratio(si, all);
  ratio.canonicalize();
  double r = ratio.get_d();
  bool ratio_ok = std::abs(r - 0.125) <= 0.05 * 0.125;
  char detail[96];
  std::snprintf(detail, sizeof detail,
                "recurrence=enumeration for s<=5,t<=60; S/C(3,1e4)=%.5f", r);
  report(6, "superincreasing-counting", ok && ratio_ok, detail);
}

// 7. Factoring reduction success rate over 200 seeded semiprime runs.
void criterion_reduction() {
  auto start = std::chrono::steady_clock::now();
  // Primes in [100, 1000]: min factor 101 > 3 * sum(r) = 9 at s = 3.
  std::vector<unsigned long> primes;
  for (unsigned long v = 100; v <= 1000; ++v) {
    bool prime = v > 1;
    for (unsigned long d = 2; d * d <= v && prime; ++d)
      if (v % d == 0) prime = false;
    if (prime) primes.push_back(v);
  }
  RandomSource picker(501);
  int successes = 0;
  bool sound = true;
  const int runs = 200;
  const double eta = 0.05;
  for (int run = 0; run < runs; ++run) {
    Nat a = primes[picker.uniform_u64(0, primes.size() - 1)];
    Nat b = primes[picker.uniform_u64(0, primes.size() - 1)];
    Nat n = a * b;
    RandomSource rng(90000 + run);
    ReductionReport rep = factor_via_problem4(n, 3, eta, rng);
    if (rep.factor) {
      ++successes;
      sound = sound && *rep.factor > 1 && *rep.factor < n &&
              n % *rep.factor == 0;
    }
  }
  double rate = static_cast<double>(successes) / runs;
  double dt = elapsed(start);
  char detail[96];
  std::snprintf(detail, sizeof detail, "success=%.3f (>= %.3f), %.0fs", rate,
                1.0 - eta - 0.03, dt);
  report(7, "factoring-reduction", sound && rate >= 1.0 - eta - 0.03 &&
                                       dt < 120.0,
         detail);
}

// 8. LLL correctness: reducedness assertions, brute-force shortest vector
//    within the guarantee, projective invariance.
void criterion_lll() {
  RandomSource rng(66001);
  bool ok = true;

  auto random_basis = [&](std::size_t n) {
    for (;;) {
      RatMatrix m(n, n);
      IntMatrix check(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          long v = static_cast<long>(rng.uniform_u64(0, 18)) - 9;
          m.at(i, j) = Rat(v);
          check.at(i, j) = v;
        }
      if (oracles::determinant(check) != 0) return m;
    }
  };

  for (std::size_t n : {std::size_t(3), std::size_t(4)}) {
    for (int trial = 0; trial < 50 && ok; ++trial) {
      RatMatrix basis = random_basis(n);
      LLLResult res = lll_reduce(basis);
      ok = ok && oracles::is_lll_reduced(res.reduced, Rat(3, 4));
      IntMatrix t = res.transform;
      ok = ok && abs(oracles::determinant(t)) == 1;
      for (std::size_t i = 0; i < n && ok; ++i)
        for (std::size_t j = 0; j < n && ok; ++j) {
          Rat acc = 0;
          for (std::size_t k = 0; k < n; ++k)
            acc += Rat(res.transform.at(i, k)) * basis.at(k, j);
          ok = acc == res.reduced.at(i, j);
        }
      Rat truth = oracles::shortest_vector_norm2(basis, 12);
      Rat first = 0;
      for (std::size_t j = 0; j < n; ++j)
        first += res.reduced.at(0, j) * res.reduced.at(0, j);
      ok = ok && first <= (Rat(1) << (n - 1)) * truth;
    }
  }

  for (int trial = 0; trial < 50 && ok; ++trial) {
    std::size_t n = 2 + trial % 3;
    RatMatrix basis = random_basis(n);
    LLLResult base = lll_reduce(basis);
    for (Rat rho : {Rat(2), Rat(1, 3)}) {
      RatMatrix scaled = basis;
      for (Rat& v : scaled.e) v *= rho;
      LLLResult res = lll_reduce(scaled);
      ok = ok && res.steps == base.steps && res.transform == base.transform;
    }
  }
  report(8, "lll-correctness", ok,
         "reduced + unimodular + guarantee (dims 3-4) + projective");
}

// 9. Attack success at low density; attack1 == attack2 on the pattern.
void criterion_attack() {
  RandomSource rng(77001);
  int hits = 0;
  bool pattern_ok = true;
  const int trials = 50;
  for (int trial = 0; trial < trials; ++trial) {
    RowVec w(6);
    for (std::size_t i = 0; i < 6; ++i)
      w[i] = rng.uniform_nat(Nat(1) << 29, (Nat(1) << 30) - 1);
    PublicKey pub{w, 2, 2, 1, 0};
    Message m = random_message(6, rng);
    Nat ct = encrypt(pub, m);
    AttackOutcome a1 = attack1(pub, ct);
    if (a1.message && *a1.message == m) ++hits;
    if (trial < 10) {
      AttackOutcome a2 = attack2(pub, ct, attack1_pattern(6));
      pattern_ok = pattern_ok && a1.lll_steps == a2.lll_steps &&
                   a1.message == a2.message && a1.row == a2.row;
    }
  }
  char detail[64];
  std::snprintf(detail, sizeof detail, "recovered %d/%d, pattern equal: %s",
                hits, trials, pattern_ok ? "yes" : "no");
  report(9, "attack-behavior", hits >= trials * 7 / 10 && pattern_ok, detail);
}

// 10. Stability of step counts and results under key shifts.
void criterion_stability() {
  RandomSource rng(88001);
  const std::size_t s = 8;
  Message m = random_message(s, rng);
  RowVec x0(s), eps(s), zero(s);
  for (std::size_t i = 0; i < s; ++i) {
    x0[i] = rng.uniform_nat(500, 1000);
    eps[i] = rng.uniform_nat(0, 8);
    zero[i] = 0;
  }
  std::vector<Nat> q_list{Nat(1) << 50};  // ||eps||_1 <= 64 => ratio < 2^-44

  RandomSource rng_a(88002);
  StabilityResult shifted = stability_experiment(m, x0, q_list, eps, 100,
                                                 rng_a);
  RandomSource rng_b(88002);
  StabilityResult exact = stability_experiment(m, x0, q_list, zero, 100,
                                               rng_b);

  double step_rate = static_cast<double>(shifted.rows[0].step_matches) / 100.0;
  double result_rate =
      static_cast<double>(shifted.rows[0].result_matches) / 100.0;
  bool exact_ok = exact.rows[0].step_matches == 100 &&
                  exact.rows[0].result_matches == 100;
  char detail[96];
  std::snprintf(detail, sizeof detail,
                "steps=%.2f results=%.2f (>=0.95), eps=0 exact: %s", step_rate,
                result_rate, exact_ok ? "yes" : "no");
  report(10, "stability-theorem", step_rate >= 0.95 && result_rate >= 0.95 &&
                                      exact_ok,
         detail);
}

// 11. Scaling laws: encrypt time quadruples when s doubles (system 1);
//     system 2 decrypt time grows at most 10x from s=500 to s=2000.
void criterion_scaling() {
  BenchTable enc = run_bench(BenchMetric::EncryptTime, 1, 1, {200, 400},
                             {Nat(1000000)}, 15, 424242);
  double ratio_enc = enc.cell(1, 0) / enc.cell(0, 0);
  bool enc_ok = ratio_enc >= 2.0 && ratio_enc <= 6.0;

  BenchTable dec = run_bench(BenchMetric::DecryptTime, 2, 1, {500, 2000},
                             {Nat(1000000)}, 15, 434343);
  double ratio_dec = dec.cell(1, 0) / dec.cell(0, 0);
  bool dec_ok = ratio_dec <= 10.0;

  char detail[96];
  std::snprintf(detail, sizeof detail,
                "sys1 encrypt x%.2f (in [2,6]), sys2 decrypt x%.2f (<=10)",
                ratio_enc, ratio_dec);
  report(11, "scaling-laws", enc_ok && dec_ok, detail);
}

}  // namespace

int main() {
  std::printf("knapforge acceptance suite\n");
  criterion_roundtrip();
  criterion_key_size();
  criterion_density();
  criterion_uniqueness();
  criterion_rest_sum();
  criterion_count_si();
  criterion_reduction();
  criterion_lll();
  criterion_attack();
  criterion_stability();
  criterion_scaling();
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criteria FAILED\n", g_failures);
  return 1;
}
