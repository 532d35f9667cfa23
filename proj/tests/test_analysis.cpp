#include <doctest.h>

#include <cmath>

#include "knapforge/analysis.hpp"
#include "oracles.hpp"

using namespace knapforge;

TEST_CASE("density formula") {
  CHECK(density(RowVec(std::vector<Int>{2, 2, 2, 2})) == doctest::Approx(4.0));
  double d = density(RowVec(std::vector<Int>{2, 3, 5, 7}));
  CHECK(d == doctest::Approx(4.0 / std::log2(7.0)).epsilon(1e-10));
  CHECK_THROWS_AS(density(RowVec(std::vector<Int>{1, 5})), DomainError);
}

TEST_CASE("pseudo-key search on a hand-built key") {
  // w = (301, 702) built as q = 100, v = (3, 7), eps = (1, 2).
  RowVec w(std::vector<Int>{301, 702});
  PseudoKeyReport report = find_pseudokeys(w, 702, Nat(100));
  CHECK(report.contains(100));
  CHECK(report.contains_true_key);
  bool saw = false;
  for (const auto& cand : report.candidates)
    if (cand.q == 100) {
      saw = true;
      CHECK(cand.rests == std::vector<Nat>{1, 2});
    }
  CHECK(saw);
}

TEST_CASE("fast scan matches the literal definition") {
  RandomSource rng(6);
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t s = rng.uniform_u64(1, 6);
    RowVec w(s);
    for (std::size_t i = 0; i < s; ++i) w[i] = rng.uniform_nat(1, 4000);
    Nat q_max = rng.uniform_nat(2, 5000);
    PseudoKeyReport got = find_pseudokeys(w, q_max);
    // Reference: scan every q' and apply the definition directly.
    std::vector<Nat> expected;
    for (Nat q = 2; q <= q_max; ++q) {
      std::vector<Nat> rests(s);
      Nat sum = 0;
      for (std::size_t i = 0; i < s; ++i) {
        rests[i] = w[i] % q;
        sum += rests[i];
      }
      if (sum >= q) continue;
      std::sort(rests.begin(), rests.end());
      if (!is_superincreasing(rests)) continue;
      expected.push_back(q);
    }
    REQUIRE(got.candidates.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
      CHECK(got.candidates[i].q == expected[i]);
  }
}

TEST_CASE("degenerate one-entry key reports a non-unique family") {
  RowVec w(std::vector<Int>{1});
  PseudoKeyReport report = find_pseudokeys(w, 40);
  // Every q' in [2, 40] leaves rest 1: sum < q' and trivially
  // superincreasing.
  CHECK(report.candidates.size() == 39);
  CHECK_FALSE(report.unique);
  CHECK(report.degenerate_family);
}

TEST_CASE("generated keys always contain the true private key") {
  RandomSource rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    Params params;
    params.s = 8;
    params.p = rng.uniform_nat(41, 54);
    params.system = 2;
    params.variant = 2;
    params.seed = rng.next_u64();
    auto [pub, priv] = keygen2(params);
    const Int* maxw = &pub.x[0];
    for (const Int& v : pub.x.e)
      if (v > *maxw) maxw = &v;
    PseudoKeyReport report = find_pseudokeys(pub.x, *maxw, priv.q1);
    CHECK(report.contains_true_key);
  }
}

TEST_CASE("uniqueness experiment is reproducible and near the reference") {
  RandomSource rng(2025);
  UniquenessResult a = uniqueness_experiment(8, 40, 55, 120, rng);
  RandomSource rng2(2025);
  UniquenessResult b = uniqueness_experiment(8, 40, 55, 120, rng2);
  CHECK(a.unique_fraction == b.unique_fraction);
  for (std::size_t i = 0; i < a.trials.size(); ++i) {
    CHECK(a.trials[i].p == b.trials[i].p);
    CHECK(a.trials[i].unique == b.trials[i].unique);
    CHECK(a.trials[i].contains_true_key);
  }
  // s = 8 sits near 0.96; a small run just needs the right ballpark.
  CHECK(a.unique_fraction > 0.85);
  std::string text = a.to_text();
  CHECK(text.find("summary trials=120") != std::string::npos);
}

TEST_CASE("rest-sum probability: exact values and the 3/4 bound") {
  CHECK(rest_sum_probability(2, 2, RestSumMode::Exact) == Rat(3, 4));
  CHECK(rest_sum_probability(2, 1, RestSumMode::Exact) == 1);
  Rat p_10_5 = rest_sum_probability(10, 5, RestSumMode::Exact);
  Rat bound = Rat(3, 4) * Rat(3, 4) * Rat(3, 4) * Rat(3, 4);
  CHECK(p_10_5 <= bound);
}

TEST_CASE("rest-sum convolution agrees with direct enumeration") {
  for (unsigned long q : {2, 3, 5, 9}) {
    for (unsigned s : {1u, 2u, 3u, 5u}) {
      auto [hits, total] = oracles::restsum_enumerate(q, s);
      Rat expected(hits, total);
      expected.canonicalize();
      CHECK(rest_sum_probability(Nat(q), s, RestSumMode::Exact) == expected);
    }
  }
}

TEST_CASE("rest-sum distribution is monotone in r") {
  for (unsigned long q : {2, 3, 7, 12}) {
    for (unsigned s = 1; s <= 6; ++s) {
      std::vector<Nat> counts = rest_sum_counts(Nat(q), s);
      REQUIRE(counts.size() == q);
      for (std::size_t r = 1; r < counts.size(); ++r)
        CHECK(counts[r] >= counts[r - 1]);
    }
  }
}

TEST_CASE("rest-sum monte carlo lands near the exact value") {
  RandomSource rng(50);
  Rat exact = rest_sum_probability(6, 3, RestSumMode::Exact);
  Rat mc = rest_sum_probability(6, 3, RestSumMode::MonteCarlo, 20000, &rng);
  CHECK(std::abs(mc.get_d() - exact.get_d()) < 0.02);
  CHECK_THROWS_AS(rest_sum_probability(6, 3, RestSumMode::MonteCarlo, 10, &rng),
                  ParamError);
}

TEST_CASE("superincreasing counts: examples and enumeration cross-check") {
  auto [s2, c2] = count_superincreasing(2, 10);
  CHECK(s2 == 5);
  CHECK(c2 == 11);
  auto [s1, c1] = count_superincreasing(1, 7);
  CHECK(s1 == 1);
  CHECK(c1 == 1);

  for (unsigned s = 1; s <= 5; ++s)
    for (long t : {0, 1, 2, 3, 5, 10, 17, 33, 60}) {
      auto [si, all] = count_superincreasing(s, t);
      auto [si_ref, all_ref] = oracles::count_superincreasing_enumerate(s, t);
      CHECK(si == si_ref);
      CHECK(all == all_ref);
    }
}

TEST_CASE("superincreasing ratio approaches 1/8 at s = 3") {
  double prev_err = 1.0;
  for (long t : {100, 1000, 10000}) {
    auto [si, all] = count_superincreasing(3, t);
    Rat ratio(si, all);
    ratio.canonicalize();
    double err = std::abs(ratio.get_d() - 0.125);
    CHECK(err < prev_err);  // sweep closes in on the limit
    prev_err = err;
  }
  CHECK(prev_err < 0.125 * 0.05);
}
