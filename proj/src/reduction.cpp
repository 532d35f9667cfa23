#include "knapforge/reduction.hpp"

#include "knapforge/sis_keys.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace knapforge {

void Problem4Instance::validate() const {
  if (w.empty()) throw ParamError("problem 4: empty key");
  if (prescribed.size() + 1 != w.size())
    throw ParamError("problem 4: need s-1 prescribed rests for s entries");
  for (std::size_t i = 0; i + 1 < prescribed.size(); ++i)
    if (prescribed[i] >= prescribed[i + 1])
      throw ParamError("problem 4: prescribed rests must be increasing");
  if (lo > hi) throw ParamError("problem 4: empty rest range");
  for (const Nat& v : w)
    if (v < 0) throw ParamError("problem 4: negative entry");
}

namespace {

// Cooperative-cancellation scan; polls `stop` between blocks. A candidate
// q' is accepted when the prescribed rests match, the last rest falls in
// [lo, hi], and the full rest sequence (r_1..r_{s-1}, last) stays
// superincreasing; the last point reduces to last > sum(r_i) once the
// prescribed prefix qualifies.
std::optional<Nat> oracle_scan(const Problem4Instance& inst, const Nat& q_max,
                               std::uint64_t* steps_out,
                               const std::atomic<bool>* stop) {
  const std::size_t s = inst.w.size();
  std::uint64_t steps = 0;
  auto done = [&](std::optional<Nat> r) {
    if (steps_out) *steps_out = steps;
    return r;
  };

  Nat prefix_sum = 0;
  for (const Nat& r : inst.prescribed) prefix_sum += r;
  if (s >= 2 && !is_superincreasing(inst.prescribed))
    return done(std::nullopt);  // no last rest can complete the sequence

  bool fits = q_max.fits_ulong_p();
  for (const Nat& v : inst.w) fits = fits && v.fits_ulong_p();
  if (fits) {
    std::vector<std::uint64_t> w(s);
    for (std::size_t i = 0; i < s; ++i) w[i] = inst.w[i].get_ui();
    std::vector<std::uint64_t> pres(inst.prescribed.size());
    for (std::size_t i = 0; i < pres.size(); ++i) {
      if (!inst.prescribed[i].fits_ulong_p()) return done(std::nullopt);
      pres[i] = inst.prescribed[i].get_ui();
    }
    std::uint64_t lo = inst.lo.fits_ulong_p() ? inst.lo.get_ui() : UINT64_MAX;
    std::uint64_t hi = inst.hi.fits_ulong_p() ? inst.hi.get_ui() : UINT64_MAX;
    std::uint64_t psum = prefix_sum.get_ui();
    std::uint64_t qm = q_max.get_ui();
    for (std::uint64_t q = 2; q <= qm; ++q) {
      if (stop && (q & 0xfff) == 0 && stop->load(std::memory_order_relaxed))
        return done(std::nullopt);
      ++steps;
      bool ok = true;
      for (std::size_t i = 0; i + 1 < s; ++i)
        if (w[i] % q != pres[i]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      std::uint64_t last = w[s - 1] % q;
      if (last < lo || last > hi) continue;
      if (s >= 2 && last <= psum) continue;
      return done(Nat(static_cast<unsigned long>(q)));
    }
    return done(std::nullopt);
  }

  for (Nat q = 2; q <= q_max; ++q) {
    if (stop && steps % 4096 == 0 && stop->load(std::memory_order_relaxed))
      return done(std::nullopt);
    ++steps;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < s; ++i)
      if (inst.w[i] % q != inst.prescribed[i]) {
        ok = false;
        break;
      }
    if (!ok) continue;
    Nat last = inst.w[s - 1] % q;
    if (last < inst.lo || last > inst.hi) continue;
    if (s >= 2 && last <= prefix_sum) continue;
    return done(q);
  }
  return done(std::nullopt);
}

}  // namespace

std::optional<Nat> problem4_oracle(const Problem4Instance& inst,
                                   const Nat& q_max,
                                   std::uint64_t* steps_out) {
  inst.validate();
  if (q_max < 2) throw ParamError("problem4_oracle: q_max must be >= 2");
  return oracle_scan(inst, q_max, steps_out, nullptr);
}

std::string ReductionReport::to_line() const {
  std::string out = "n=" + n.get_str();
  out += " factor=" + (factor ? factor->get_str() : std::string("none"));
  out += " stage=";
  out += stage == ReductionStage::TrialDivision ? "trial_division" : "oracle";
  out += " subproblems=" + std::to_string(subproblem_count);
  return out;
}

ReductionReport factor_via_problem4(const Nat& n, std::size_t s, double eta,
                                    RandomSource& rng,
                                    const Problem4Solver& solver) {
  if (n < 4) throw ParamError("factor_via_problem4: n must be >= 4");
  if (s < 2) throw ParamError("factor_via_problem4: s must be >= 2");
  if (!(eta > 0.0 && eta < 1.0))
    throw ParamError("factor_via_problem4: eta must be in (0, 1)");

  ReductionReport report;
  report.n = n;

  // Smallest superincreasing choice: r_i = 2^(i-1).
  std::vector<Nat> rests(s - 1);
  Nat rest_sum = 0;
  for (std::size_t i = 0; i < s - 1; ++i) {
    rests[i] = Nat(1) << i;
    rest_sum += rests[i];
  }

  // Stage 1: trial division up to 3 * sum(r); afterwards every divisor of n
  // exceeds every prescribed rest.
  Nat bound = 3 * rest_sum;
  std::uint64_t steps = 0;
  for (Nat q = 2; q <= bound && q < n; ++q) {
    ++steps;
    if (n % q == 0) {
      report.factor = q;
      report.stage = ReductionStage::TrialDivision;
      report.wall_steps = steps;
      return report;
    }
  }

  // Stage 2: rho subproblems with (2/3)^rho < eta.
  std::size_t rho = 1;
  for (double failure = 2.0 / 3.0; failure >= eta; failure *= 2.0 / 3.0) ++rho;
  report.stage = ReductionStage::Oracle;
  report.subproblem_count = rho;

  std::vector<Problem4Instance> subproblems(rho);
  Nat half = n / 2;
  for (std::size_t k = 0; k < rho; ++k) {
    RandomSource child = rng.child(k);
    Problem4Instance& inst = subproblems[k];
    inst.w.resize(s);
    for (std::size_t i = 0; i < s - 1; ++i) inst.w[i] = n + rests[i];
    inst.w[s - 1] = child.uniform_nat(half + 1, n - 1);
    inst.prescribed = rests;
    inst.lo = 0;
    inst.hi = half;
  }

  std::atomic<bool> found{false};
  std::mutex mu;
  std::optional<Nat> winner;
  std::size_t winner_index = 0;
  std::uint64_t winner_steps = 0;
  std::uint64_t max_steps = 0;
  std::exception_ptr failure_ptr;

  auto attempt = [&](std::size_t k) {
    if (found.load(std::memory_order_relaxed)) return;
    std::uint64_t sub_steps = 0;
    std::optional<Nat> q = solver
                               ? solver(subproblems[k], n, &sub_steps)
                               : oracle_scan(subproblems[k], n, &sub_steps,
                                             &found);
    std::lock_guard<std::mutex> lock(mu);
    max_steps = std::max(max_steps, sub_steps);
    if (!q) return;
    // Any solution must be a proper divisor: w_1 mod q' = r_1 with
    // w_1 = n + r_1 forces q' | n, and the range condition excludes q' = n.
    if (*q <= 1 || *q >= n || n % *q != 0) {
      failure_ptr = std::make_exception_ptr(
          Error("internal: oracle returned a non-divisor"));
      found.store(true, std::memory_order_relaxed);
      return;
    }
    if (!winner || k < winner_index) {
      winner = q;
      winner_index = k;
      winner_steps = sub_steps;
    }
    found.store(true, std::memory_order_relaxed);
  };

  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, rho);
  if (workers > 1) {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < workers; ++i)
      pool.emplace_back([&] {
        for (;;) {
          std::size_t k = next.fetch_add(1);
          if (k >= rho) return;
          attempt(k);
        }
      });
    for (auto& th : pool) th.join();
  } else {
    for (std::size_t k = 0; k < rho && !found; ++k) attempt(k);
  }
  if (failure_ptr) std::rethrow_exception(failure_ptr);

  if (winner) {
    report.factor = winner;
    report.subproblem_index = winner_index + 1;
    report.wall_steps = steps + winner_steps;
  } else {
    report.wall_steps = steps + max_steps;
  }
  return report;
}

}  // namespace knapforge
