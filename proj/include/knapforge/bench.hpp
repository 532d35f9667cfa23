#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "knapforge/numeric.hpp"

namespace knapforge {

enum class BenchMetric { EncryptTime, DecryptTime, KeygenTime, KeySize };

BenchMetric bench_metric_from_name(const std::string& name);
std::string bench_metric_name(BenchMetric metric);

/// Raw bit size of a key row in decimal megabytes:
/// sum of ceil(log2(entry + 1)) over the entries, divided by 8e6. This is
/// the hardware-independent figure the size tables use; file headers and
/// decimal expansion do not count.
double key_size_mb(const RowVec& key);

struct BenchTable {
  BenchMetric metric = BenchMetric::KeySize;
  int system = 1;
  int variant = 1;
  std::vector<std::size_t> s_values;
  std::vector<Nat> p_values;
  std::vector<double> cells;  // row-major, seconds or megabytes

  double cell(std::size_t si, std::size_t pi) const {
    return cells[si * p_values.size() + pi];
  }
  std::string to_text() const;
};

/// Time cells are medians over `trials` samples after one warm-up; size
/// cells are exact bit counts. Deterministic given the seed.
BenchTable run_bench(BenchMetric metric, int system, int variant,
                     const std::vector<std::size_t>& s_list,
                     const std::vector<Nat>& p_list, std::size_t trials,
                     std::uint64_t seed);

}  // namespace knapforge
