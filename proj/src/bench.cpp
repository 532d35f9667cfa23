#include "knapforge/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "knapforge/cryptosystems.hpp"
#include "knapforge/keyfile.hpp"

namespace knapforge {

BenchMetric bench_metric_from_name(const std::string& name) {
  if (name == "encrypt_time") return BenchMetric::EncryptTime;
  if (name == "decrypt_time") return BenchMetric::DecryptTime;
  if (name == "keygen_time") return BenchMetric::KeygenTime;
  if (name == "key_size") return BenchMetric::KeySize;
  throw ParamError("unknown metric '" + name + "'");
}

std::string bench_metric_name(BenchMetric metric) {
  switch (metric) {
    case BenchMetric::EncryptTime: return "encrypt_time";
    case BenchMetric::DecryptTime: return "decrypt_time";
    case BenchMetric::KeygenTime: return "keygen_time";
    case BenchMetric::KeySize: return "key_size";
  }
  return "?";
}

double key_size_mb(const RowVec& key) {
  std::size_t bits = 0;
  for (const Int& v : key.e) {
    if (v < 0) throw ParamError("key_size_mb: negative entry");
    bits += bit_length(v);
  }
  return static_cast<double>(bits) / 8e6;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Message random_message(std::size_t s, unsigned alphabet, RandomSource& rng) {
  Message m(s);
  for (std::size_t i = 0; i < s; ++i)
    m[i] = Nat(rng.uniform_u64(0, alphabet - 1));
  return m;
}

// Median over an odd-ish number of samples; averages the middle pair when
// even.
double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// One op can be far below timer resolution; repeat it enough to make each
// sample measurable, then divide.
constexpr std::size_t kEncryptReps = 32;
constexpr std::size_t kDecryptReps = 8;

double measure_cell(BenchMetric metric, int system, int variant,
                    std::size_t s, const Nat& p, std::size_t trials,
                    RandomSource& rng) {
  Params params;
  params.s = s;
  params.p = p;
  params.system = system;
  params.variant = variant;
  params.seed = rng.next_u64();

  if (metric == BenchMetric::KeygenTime) {
    std::vector<double> samples;
    for (std::size_t t = 0; t <= trials; ++t) {  // first is warm-up
      Params pt = params;
      pt.seed = rng.next_u64();
      auto start = Clock::now();
      switch (system) {
        case 1: keygen1(pt); break;
        case 2: keygen2(pt); break;
        default: keygen3(pt); break;
      }
      double dt = seconds_since(start);
      if (t > 0) samples.push_back(dt);
    }
    return median(std::move(samples));
  }

  PublicKey pub;
  PrivateKey1 sk1;
  PrivateKey2 sk2;
  PrivateKey3 sk3;
  switch (system) {
    case 1: std::tie(pub, sk1) = keygen1(params); break;
    case 2: std::tie(pub, sk2) = keygen2(params); break;
    default: std::tie(pub, sk3) = keygen3(params); break;
  }

  if (metric == BenchMetric::KeySize) return key_size_mb(pub.x);

  std::vector<double> samples;
  for (std::size_t t = 0; t < trials + 1; ++t) {  // first is warm-up
    if (metric == BenchMetric::EncryptTime) {
      std::vector<Message> msgs;
      for (std::size_t r = 0; r < kEncryptReps; ++r)
        msgs.push_back(random_message(s, pub.alphabet, rng));
      auto start = Clock::now();
      for (const Message& m : msgs) encrypt(pub, m);
      double dt = seconds_since(start) / kEncryptReps;
      if (t > 0) samples.push_back(dt);
    } else {
      std::vector<Nat> cts;
      for (std::size_t r = 0; r < kDecryptReps; ++r)
        cts.push_back(encrypt(pub, random_message(s, pub.alphabet, rng)));
      auto start = Clock::now();
      for (const Nat& ct : cts) {
        switch (system) {
          case 1: decrypt1(sk1, ct); break;
          case 2: decrypt2(sk2, ct); break;
          default: decrypt3(sk3, ct); break;
        }
      }
      double dt = seconds_since(start) / kDecryptReps;
      if (t > 0) samples.push_back(dt);
    }
  }
  return median(std::move(samples));
}

std::string p_label(const Nat& p) {
  // Powers of ten render like the compact table headers.
  Nat v = p;
  std::size_t zeros = 0;
  while (v % 10 == 0 && v > 1) {
    v /= 10;
    ++zeros;
  }
  if (v == 1 && zeros >= 3) return "10^" + std::to_string(zeros);
  return p.get_str();
}

}  // namespace

std::string BenchTable::to_text() const {
  std::string out = bench_metric_name(metric);
  out += metric == BenchMetric::KeySize ? " in megabytes"
                                        : " in seconds";
  out += " (system " + std::to_string(system) + ", variant " +
         std::to_string(variant) + ")\n";

  std::vector<std::size_t> widths(p_values.size());
  std::vector<std::string> headers(p_values.size());
  for (std::size_t j = 0; j < p_values.size(); ++j) {
    headers[j] = p_label(p_values[j]);
    widths[j] = std::max<std::size_t>(headers[j].size(), 9);
  }

  char buf[64];
  out += "s\\p    ";
  for (std::size_t j = 0; j < p_values.size(); ++j) {
    std::snprintf(buf, sizeof buf, " %*s", static_cast<int>(widths[j]),
                  headers[j].c_str());
    out += buf;
  }
  out += '\n';
  for (std::size_t i = 0; i < s_values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%-7zu", s_values[i]);
    out += buf;
    for (std::size_t j = 0; j < p_values.size(); ++j) {
      std::snprintf(buf, sizeof buf, " %*.3f", static_cast<int>(widths[j]),
                    cell(i, j));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

BenchTable run_bench(BenchMetric metric, int system, int variant,
                     const std::vector<std::size_t>& s_list,
                     const std::vector<Nat>& p_list, std::size_t trials,
                     std::uint64_t seed) {
  if (s_list.empty() || p_list.empty())
    throw ParamError("run_bench: empty s or p list");
  if (metric != BenchMetric::KeySize && trials < 5)
    throw ParamError("run_bench: timing metrics need >= 5 trials");

  BenchTable table;
  table.metric = metric;
  table.system = system;
  table.variant = variant;
  table.s_values = s_list;
  table.p_values = p_list;
  table.cells.resize(s_list.size() * p_list.size());

  RandomSource root(seed);
  for (std::size_t i = 0; i < s_list.size(); ++i) {
    for (std::size_t j = 0; j < p_list.size(); ++j) {
      RandomSource rng = root.child(i * p_list.size() + j);
      table.cells[i * p_list.size() + j] = measure_cell(
          metric, system, variant, s_list[i], p_list[j], trials, rng);
    }
  }
  return table;
}

}  // namespace knapforge
