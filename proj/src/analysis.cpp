#include "knapforge/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "knapforge/sis_keys.hpp"

namespace knapforge {

double density(const RowVec& key) {
  if (key.size() == 0) throw ParamError("density: empty key");
  for (const Int& v : key.e)
    if (v < 2) throw DomainError("density: entry < 2");
  const Int* max = &key[0];
  for (const Int& v : key.e)
    if (v > *max) max = &v;
  long exp2;
  double frac = mpz_get_d_2exp(&exp2, max->get_mpz_t());
  double log2max = static_cast<double>(exp2) + std::log2(frac);
  return static_cast<double>(key.size()) / log2max;
}

bool PseudoKeyReport::contains(const Nat& q) const {
  auto it = std::lower_bound(
      candidates.begin(), candidates.end(), q,
      [](const PseudoKeyCandidate& c, const Nat& v) { return c.q < v; });
  return it != candidates.end() && it->q == q;
}

std::string PseudoKeyReport::to_text() const {
  std::string out;
  for (const auto& c : candidates) {
    out += "q=" + c.q.get_str() + " rests=";
    for (std::size_t i = 0; i < c.rests.size(); ++i) {
      if (i) out += ',';
      out += c.rests[i].get_str();
    }
    out += '\n';
  }
  out += "count=" + std::to_string(candidates.size());
  out += " unique=" + std::string(unique ? "1" : "0");
  out += " degenerate_family=" + std::string(degenerate_family ? "1" : "0");
  out += '\n';
  return out;
}

namespace {

// Sorted-ascending rests must be strictly superincreasing (condition checked
// from the second element on, so a single leading zero is admissible).
template <typename T>
bool sorted_superincreasing(T* rests, std::size_t s) {
  std::sort(rests, rests + s);
  T sum = 0;
  for (std::size_t i = 0; i < s; ++i) {
    if (i > 0 && rests[i] <= sum) return false;
    sum += rests[i];
  }
  return true;
}

// Literal scan over q' in [lo, hi]; arbitrary precision.
void scan_pseudokeys_mpz(const std::vector<Nat>& w, const Nat& lo,
                         const Nat& hi, PseudoKeyReport& report) {
  const std::size_t s = w.size();
  std::vector<Nat> rests(s);
  for (Nat q = lo; q <= hi; ++q) {
    Nat sum = 0;
    bool ok = true;
    for (std::size_t i = 0; i < s; ++i) {
      rests[i] = w[i] % q;
      sum += rests[i];
      if (sum >= q) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    std::vector<Nat> sorted = rests;
    if (!sorted_superincreasing(sorted.data(), s)) continue;
    report.candidates.push_back({q, rests});
  }
}

// Divisor-block scan: all floor(w_i/q') are constant on [q, q_end], so the
// rest sum W - q'K is linear there and the sum condition cuts each block to
// a subrange. Only those q' reach the sort. Visits every q' in [2, hi]
// exactly once; results identical to the literal scan.
void scan_pseudokeys_u64(const std::vector<std::uint64_t>& w,
                         std::uint64_t hi, PseudoKeyReport& report) {
  const std::size_t s = w.size();
  unsigned __int128 w_total = 0;
  for (auto v : w) w_total += v;
  std::uint64_t rests[64];
  std::uint64_t scratch[64];
  std::uint64_t k[64];
  for (std::uint64_t q = 2; q <= hi;) {
    std::uint64_t q_end = hi;
    unsigned __int128 k_total = 0;
    for (std::size_t i = 0; i < s; ++i) {
      k[i] = w[i] / q;
      if (k[i] > 0) q_end = std::min(q_end, w[i] / k[i]);
      k_total += k[i];
    }
    // Sum condition: W - q'K < q'  <=>  q' > W/(K+1).
    std::uint64_t lo =
        static_cast<std::uint64_t>(w_total / (k_total + 1)) + 1;
    for (std::uint64_t qq = std::max(q, lo); qq <= q_end; ++qq) {
      for (std::size_t i = 0; i < s; ++i) rests[i] = w[i] - qq * k[i];
      std::copy(rests, rests + s, scratch);
      if (!sorted_superincreasing(scratch, s)) continue;
      std::vector<Nat> kept(s);
      for (std::size_t i = 0; i < s; ++i)
        kept[i] = Nat(static_cast<unsigned long>(rests[i]));
      report.candidates.push_back(
          {Nat(static_cast<unsigned long>(qq)), std::move(kept)});
    }
    q = q_end + 1;
  }
}

}  // namespace

PseudoKeyReport find_pseudokeys(const RowVec& pub, const Nat& q_max,
                                const std::optional<Nat>& true_q) {
  if (q_max < 2) throw ParamError("find_pseudokeys: q_max must be >= 2");
  const std::size_t s = pub.size();
  if (s == 0) throw ParamError("find_pseudokeys: empty key");
  std::vector<Nat> w(s);
  for (std::size_t i = 0; i < s; ++i) {
    if (pub[i] < 0) throw ParamError("find_pseudokeys: negative key entry");
    w[i] = pub[i];
  }

  PseudoKeyReport report;
  bool fits_u64 = s <= 64 && q_max.fits_ulong_p();
  for (const Nat& v : w) fits_u64 = fits_u64 && v.fits_ulong_p();
  if (fits_u64) {
    std::vector<std::uint64_t> wu(s);
    unsigned __int128 total = 0;
    for (std::size_t i = 0; i < s; ++i) {
      wu[i] = w[i].get_ui();
      total += wu[i];
    }
    if (total <= UINT64_MAX / 2)
      scan_pseudokeys_u64(wu, q_max.get_ui(), report);
    else
      fits_u64 = false;
  }
  if (!fits_u64) scan_pseudokeys_mpz(w, 2, q_max, report);

  report.unique = report.candidates.size() == 1;
  if (true_q) report.contains_true_key = report.contains(*true_q);
  std::vector<Nat> sorted_w = w;
  std::sort(sorted_w.begin(), sorted_w.end());
  report.degenerate_family = is_superincreasing(sorted_w);
  return report;
}

std::string UniquenessResult::to_text() const {
  std::string out;
  std::size_t unique_count = 0;
  for (const auto& t : trials) {
    out += std::to_string(t.index) + " " + std::to_string(t.seed) + " " +
           t.p.get_str() + " " + (t.unique ? "1" : "0") + " " +
           std::to_string(t.pseudo_key_count) + "\n";
    if (t.unique) ++unique_count;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "summary trials=%zu unique=%zu fraction=%.6f",
                trials.size(), unique_count, unique_fraction);
  out += buf;
  out += '\n';
  return out;
}

UniquenessResult uniqueness_experiment(std::size_t s, const Nat& p_lo,
                                       const Nat& p_hi, std::size_t trials,
                                       RandomSource& rng) {
  if (s < 4 || s > 10)
    throw ParamError(
        "uniqueness_experiment: s must lie in [4, 10] (exhaustive search)");
  if (p_hi - p_lo < 2)
    throw ParamError("uniqueness_experiment: open interval (p_lo, p_hi) empty");
  if (trials < 100) throw ParamError("uniqueness_experiment: need >= 100 trials");

  UniquenessResult result;
  result.trials.resize(trials);

  auto run_trial = [&](std::size_t t) {
    RandomSource child = rng.child(t);
    Nat p = child.uniform_nat(p_lo + 1, p_hi - 1);
    Params params;
    params.s = s;
    params.p = p;
    params.system = 2;
    params.variant = 2;
    params.seed = child.next_u64();
    auto [pub, priv] = keygen2(params);
    const Int* max = &pub.x[0];
    for (const Int& v : pub.x.e)
      if (v > *max) max = &v;
    PseudoKeyReport report = find_pseudokeys(pub.x, *max, priv.q1);
    UniquenessTrial& rec = result.trials[t];
    rec.index = t;
    rec.seed = child.seed();
    rec.p = p;
    rec.unique = report.unique;
    rec.pseudo_key_count = report.candidates.size();
    rec.contains_true_key = report.contains_true_key;
  };

  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (workers > 1 && trials > 1) {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i)
      pool.emplace_back([&] {
        for (;;) {
          std::size_t t = next.fetch_add(1);
          if (t >= trials) return;
          run_trial(t);
        }
      });
    for (auto& th : pool) th.join();
  } else {
    for (std::size_t t = 0; t < trials; ++t) run_trial(t);
  }

  std::size_t unique_count = 0;
  for (const auto& t : result.trials)
    if (t.unique) ++unique_count;
  result.unique_fraction =
      static_cast<double>(unique_count) / static_cast<double>(trials);
  return result;
}

std::vector<Nat> rest_sum_counts(const Nat& q, std::size_t s) {
  if (q < 2) throw ParamError("rest_sum_counts: q must be >= 2");
  if (s < 1) throw ParamError("rest_sum_counts: s must be >= 1");
  if (!q.fits_ulong_p() || q.get_ui() > 1000000)
    throw ParamError("rest_sum_counts: q too large for the exact mode");
  std::size_t qs = q.get_ui();
  std::vector<Nat> counts(qs, Nat(1));  // s = 1: one tuple per value
  for (std::size_t level = 2; level <= s; ++level) {
    // N_{q,level,r} = sum_{k<=r} N_{q,level-1,k}: in-place prefix sums.
    for (std::size_t r = 1; r < qs; ++r) counts[r] += counts[r - 1];
  }
  return counts;
}

Rat rest_sum_probability(const Nat& q, std::size_t s, RestSumMode mode,
                         std::size_t trials, RandomSource* rng) {
  if (mode == RestSumMode::Exact) {
    std::vector<Nat> counts = rest_sum_counts(q, s);
    Nat total = 0;
    for (const Nat& c : counts) total += c;
    Nat denom;
    mpz_pow_ui(denom.get_mpz_t(), q.get_mpz_t(), s);
    Rat p(total, denom);
    p.canonicalize();
    return p;
  }
  if (trials < 10000)
    throw ParamError("rest_sum_probability: monte carlo needs >= 10^4 trials");
  if (rng == nullptr)
    throw ParamError("rest_sum_probability: monte carlo needs a rng");
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Nat sum = 0;
    for (std::size_t i = 0; i < s; ++i) sum += rng->uniform_nat(0, q - 1);
    if (sum <= q - 1) ++hits;
  }
  Rat p(static_cast<unsigned long>(hits), static_cast<unsigned long>(trials));
  p.canonicalize();
  return p;
}

std::pair<Nat, Nat> count_superincreasing(std::size_t s, const Nat& t) {
  if (s < 1) throw ParamError("count_superincreasing: s must be >= 1");
  if (t < 0) throw ParamError("count_superincreasing: t must be >= 0");
  if (!t.fits_ulong_p() || t.get_ui() > 50000000)
    throw ParamError("count_superincreasing: t too large");
  std::size_t tt = t.get_ui();

  // S_{1,u} = 1; S_{level,u} = sum_{v=0}^{ceil(u/2)-1} S_{level-1,v}, the
  // last element having to exceed the sum u - (last) of the others.
  std::vector<Nat> cur(tt + 1, Nat(1));
  for (std::size_t level = 2; level <= s; ++level) {
    std::vector<Nat> prefix(tt + 1);  // prefix[u] = sum_{v<=u} cur[v]
    prefix[0] = cur[0];
    for (std::size_t u = 1; u <= tt; ++u) prefix[u] = prefix[u - 1] + cur[u];
    std::vector<Nat> next(tt + 1);
    for (std::size_t u = 0; u <= tt; ++u) {
      std::size_t bound = (u + 1) / 2;  // ceil(u/2); summand range [0, bound-1]
      next[u] = bound == 0 ? Nat(0) : prefix[bound - 1];
    }
    cur = std::move(next);
  }

  Nat s_count = cur[tt];
  Nat c_count;
  mpz_bin_uiui(c_count.get_mpz_t(), tt + s - 1, s - 1);
  return {s_count, c_count};
}

}  // namespace knapforge
