// Copyright 2026 The dpne Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dpne/ngram.hpp"
#include "dpne/rng.hpp"

namespace dpne {

// Gram-keyed standard normal noise: a pure function of (key, gram content),
// so thresholding is reproducible regardless of iteration order or thread
// count, and levels are independent because grams of different lengths hash
// differently.
class GramNoise {
 public:
  explicit GramNoise(std::uint64_t key) : key_(key) {}

  double standard(const NGram& g) const;

 private:
  std::uint64_t key_;
};

inline GramNoise release_noise(std::uint64_t seed) {
  return GramNoise(derive_key({seed, streams::kRelease}));
}

// Weighted histogram over grams with strictly positive weights; zero-weight
// entries are never stored (the scalable extraction depends on this).
// Entries are sorted by gram content.
struct WeightedHistogram {
  int level = 0;
  std::vector<std::pair<NGram, double>> entries;

  std::size_t size() const { return entries.size(); }
  bool contains(const NGram& g) const;
  NGramSet support() const;
};

// Uniform random subset of `cap` items, sampled without replacement via a
// partial Fisher-Yates pass; returns the input unchanged when it fits.
// The result is re-sorted, so downstream behavior is independent of the
// sampling order.
NGramSet cap_contribution(NGramSet items, int cap, StreamRng& rng);

// Accumulates per-user contributions of weight 1/sqrt(|items|). Internally
// stores exact integer counts per (gram, |items|) group; weights are only
// synthesized during finalize() by summing count * 1/sqrt(d) in ascending d
// order. Integer merges commute, so the result is bit-identical for any
// user order, shard partition, or thread count.
class HistogramBuilder {
 public:
  HistogramBuilder(int level, int shards);

  // Thread-safe across distinct shard indices.
  void add_user(int shard, const NGramSet& items);

  WeightedHistogram finalize() &&;

 private:
  using GroupCounts = std::vector<std::pair<std::uint32_t, std::uint32_t>>;
  struct Shard {
    std::unordered_map<NGram, GroupCounts, NGramHash> counts;
  };

  int level_;
  std::vector<Shard> shards_;
};

// Releases every gram whose weight plus sigma * z(gram) strictly exceeds
// rho. rho = +infinity yields the empty set; sigma = 0 thresholds weights
// directly (non-private debug mode only).
NGramSet threshold_release(const WeightedHistogram& hist, double sigma,
                           double rho, const GramNoise& noise);

}  // namespace dpne
