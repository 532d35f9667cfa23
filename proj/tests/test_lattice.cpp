#include <doctest.h>

#include "knapforge/lattice.hpp"
#include "oracles.hpp"

using namespace knapforge;

namespace {

RatMatrix from_rows(const std::vector<std::vector<long>>& rows) {
  RatMatrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[0].size(); ++j)
      m.at(i, j) = Rat(rows[i][j]);
  return m;
}

RatMatrix scale(const RatMatrix& m, const Rat& rho) {
  RatMatrix out = m;
  for (Rat& v : out.e) v *= rho;
  return out;
}

// reduced == transform * input, exactly.
void check_transform(const LLLResult& result, const RatMatrix& input) {
  for (std::size_t i = 0; i < input.rows; ++i)
    for (std::size_t j = 0; j < input.cols; ++j) {
      Rat acc = 0;
      for (std::size_t k = 0; k < input.rows; ++k)
        acc += Rat(result.transform.at(i, k)) * input.at(k, j);
      CHECK(acc == result.reduced.at(i, j));
    }
  IntMatrix t = result.transform;
  CHECK(abs(oracles::determinant(t)) == 1);
}

RatMatrix random_integer_basis(std::size_t n, RandomSource& rng) {
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
}

}  // namespace

TEST_CASE("identity basis is already reduced") {
  RatMatrix id = from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  LLLResult result = lll_reduce(id);
  CHECK(result.reduced == id);
  CHECK(result.transform == IntMatrix::identity(3));
  check_transform(result, id);
}

TEST_CASE("small basis reaches the true shortest vector") {
  RatMatrix basis = from_rows({{1, 1, 2}, {-1, 0, 2}, {3, 5, 6}});
  LLLResult result = lll_reduce(basis);
  CHECK(oracles::is_lll_reduced(result.reduced, Rat(3, 4)));
  check_transform(result, basis);

  Rat truth = oracles::shortest_vector_norm2(basis, 8);
  Rat shortest = -1;
  for (std::size_t i = 0; i < 3; ++i) {
    Rat norm = 0;
    for (std::size_t j = 0; j < 3; ++j)
      norm += result.reduced.at(i, j) * result.reduced.at(i, j);
    if (shortest < 0 || norm < shortest) shortest = norm;
  }
  CHECK(shortest == truth);  // dim 3: LLL is exact here
}

TEST_CASE("rank error on dependent rows") {
  CHECK_THROWS_AS(lll_reduce(from_rows({{1, 2}, {2, 4}})), RankError);
  CHECK_THROWS_AS(lll_reduce(from_rows({{1}, {2}})), ParamError);  // m < n
  CHECK_NOTHROW(lll_reduce(from_rows({{1, 2, 3}})));  // single row
}

TEST_CASE("delta validation") {
  RatMatrix id = from_rows({{1, 0}, {0, 1}});
  CHECK_THROWS_AS(lll_reduce(id, Rat(1, 4)), ParamError);
  CHECK_THROWS_AS(lll_reduce(id, Rat(1)), ParamError);
  CHECK_NOTHROW(lll_reduce(id, Rat(99, 100)));
}

TEST_CASE("projective invariance: scaling changes nothing but the rows") {
  RandomSource rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = rng.uniform_u64(2, 4);
    RatMatrix basis = random_integer_basis(n, rng);
    LLLResult base = lll_reduce(basis);
    for (Rat rho : {Rat(2), Rat(1, 3)}) {
      LLLResult scaled = lll_reduce(scale(basis, rho));
      CHECK(scaled.steps == base.steps);
      CHECK(scaled.transform == base.transform);
      CHECK(scaled.reduced == scale(base.reduced, rho));
    }
  }
}

TEST_CASE("reduced bases satisfy size reduction and Lovasz exactly") {
  RandomSource rng(15);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = rng.uniform_u64(2, 5);
    RatMatrix basis = random_integer_basis(n, rng);
    LLLResult result = lll_reduce(basis);
    CHECK(oracles::is_lll_reduced(result.reduced, Rat(3, 4)));
    check_transform(result, basis);
  }
}

TEST_CASE("shortest reduced vector within the LLL guarantee, dims 3 and 4") {
  RandomSource rng(23);
  for (std::size_t n : {std::size_t(3), std::size_t(4)}) {
    for (int trial = 0; trial < 25; ++trial) {
      RatMatrix basis = random_integer_basis(n, rng);
      LLLResult result = lll_reduce(basis);
      Rat truth = oracles::shortest_vector_norm2(basis, 12);
      Rat first = 0;
      for (std::size_t j = 0; j < n; ++j)
        first += result.reduced.at(0, j) * result.reduced.at(0, j);
      // ||c_1||^2 <= 2^(n-1) * lambda_1^2 for delta = 3/4.
      Rat guarantee = Rat(1) << (n - 1);
      CHECK(first <= guarantee * truth);
    }
  }
}

namespace {

PublicKey low_density_key(std::size_t s, RandomSource& rng) {
  RowVec w(s);
  for (std::size_t i = 0; i < s; ++i)
    w[i] = rng.uniform_nat(Nat(1) << 29, (Nat(1) << 30) - 1);
  return PublicKey{std::move(w), 2, 2, 1, 0};
}

}  // namespace

TEST_CASE("attack1 on low-density instances recovers most plaintexts") {
  RandomSource rng(501);
  int hits = 0;
  const int trials = 30;
  for (int trial = 0; trial < trials; ++trial) {
    PublicKey pub = low_density_key(6, rng);
    Message m(6);
    for (std::size_t i = 0; i < 6; ++i) m[i] = rng.uniform_u64(0, 1);
    Nat ct = encrypt(pub, m);
    AttackOutcome outcome = attack1(pub, ct);
    if (outcome.message) {
      CHECK(encrypt(pub, *outcome.message) == ct);  // soundness
      if (*outcome.message == m) ++hits;
    }
  }
  CHECK(hits >= trials * 7 / 10);
}

TEST_CASE("attack1 short-circuits the zero ciphertext") {
  RandomSource rng(7);
  PublicKey pub = low_density_key(6, rng);
  AttackOutcome outcome = attack1(pub, 0);
  REQUIRE(outcome.message.has_value());
  CHECK(*outcome.message == Message(6));
  CHECK(outcome.lll_steps == 0);
  CHECK_FALSE(outcome.row.has_value());
}

TEST_CASE("attack2 with the attack-1 pattern is attack1") {
  RandomSource rng(91);
  for (int trial = 0; trial < 10; ++trial) {
    PublicKey pub = low_density_key(6, rng);
    Message m(6);
    for (std::size_t i = 0; i < 6; ++i) m[i] = rng.uniform_u64(0, 1);
    Nat ct = encrypt(pub, m);
    AttackOutcome a1 = attack1(pub, ct);
    AttackOutcome a2 = attack2(pub, ct, attack1_pattern(6));
    CHECK(a1.lll_steps == a2.lll_steps);
    CHECK(a1.message == a2.message);
    CHECK(a1.row == a2.row);
  }
}

TEST_CASE("attack2 with random dyadic perturbations still succeeds mostly") {
  RandomSource rng(311);
  int hits = 0;
  const int trials = 20;
  for (int trial = 0; trial < trials; ++trial) {
    PublicKey pub = low_density_key(6, rng);
    Message m(6);
    for (std::size_t i = 0; i < 6; ++i) m[i] = rng.uniform_u64(0, 1);
    Nat ct = encrypt(pub, m);
    RatMatrix pert = random_unit_perturbation(7, rng);
    AttackOutcome outcome = attack2(pub, ct, pert);
    if (outcome.message && *outcome.message == m) ++hits;
  }
  CHECK(hits > trials / 2);
}

TEST_CASE("attack2 validates the perturbation and accepts the boundary") {
  RandomSource rng(13);
  PublicKey pub = low_density_key(4, rng);
  Message m(4);
  m[1] = 1;
  Nat ct = encrypt(pub, m);

  RatMatrix boundary(5, 5);
  for (std::size_t i = 0; i < 5; ++i)
    boundary.at(i, i) = (i % 2 == 0) ? Rat(1) : Rat(-1);
  CHECK_NOTHROW(attack2(pub, ct, boundary));

  RatMatrix bad(5, 5);
  bad.at(0, 0) = Rat(3, 2);
  CHECK_THROWS_AS(attack2(pub, ct, bad), ParamError);
  CHECK_THROWS_AS(attack2(pub, ct, RatMatrix(4, 4)), ShapeError);
}

TEST_CASE("attack1 mostly fails at density near one") {
  // Variant-1 system-2 keys at small p sit at high density where the
  // embedding no longer exposes the message.
  RandomSource rng(67);
  int hits = 0;
  const int trials = 10;
  const std::size_t s = 40;
  for (int trial = 0; trial < trials; ++trial) {
    Params params;
    params.s = s;
    params.p = s;
    params.system = 2;
    params.variant = 1;
    params.seed = rng.next_u64();
    auto [pub, priv] = keygen2(params);
    Message m(s);
    for (std::size_t i = 0; i < s; ++i) m[i] = rng.uniform_u64(0, 1);
    AttackOutcome outcome = attack1(pub, encrypt(pub, m));
    if (outcome.message && *outcome.message == m) ++hits;
  }
  CHECK(hits < trials / 2);
}

TEST_CASE("stability: exact scaling when eps = 0") {
  RandomSource rng(19);
  Message m(8);
  RowVec x0(8), eps(8);
  for (std::size_t i = 0; i < 8; ++i) {
    m[i] = rng.uniform_u64(0, 1);
    x0[i] = rng.uniform_nat(500, 1000);
    eps[i] = 0;
  }
  std::vector<Nat> q_list{3, Nat(1) << 20};
  StabilityResult result = stability_experiment(m, x0, q_list, eps, 20, rng);
  for (const StabilityRow& row : result.rows) {
    CHECK(row.step_matches == row.samples);
    CHECK(row.result_matches == row.samples);
  }
}

TEST_CASE("stability: small eps over large q matches almost always") {
  RandomSource rng(29);
  Message m(8);
  RowVec x0(8), eps(8);
  for (std::size_t i = 0; i < 8; ++i) {
    m[i] = rng.uniform_u64(0, 1);
    x0[i] = rng.uniform_nat(500, 1000);
    eps[i] = rng.uniform_nat(0, 8);
  }
  // First q violates the small-shift hypothesis (reported, not asserted);
  // the second sits far below 2^-40.
  std::vector<Nat> q_list{2, Nat(1) << 50};
  StabilityResult result = stability_experiment(m, x0, q_list, eps, 20, rng);
  CHECK(result.rows[1].step_matches >= 19);
  CHECK(result.rows[1].result_matches >= 19);
  std::string text = result.to_text();
  CHECK(text.find("q=") != std::string::npos);
  CHECK(text.find("step_match=") != std::string::npos);
}
