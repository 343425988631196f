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

#include "dpne/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dpne/error.hpp"
#include "dpne/normal.hpp"

namespace dpne {

double GramNoise::standard(const NGram& g) const {
  const std::uint64_t h = g.hash_mix(key_);
  const double u = (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
  return std_normal_inv_cdf(u);
}

bool WeightedHistogram::contains(const NGram& g) const {
  auto it = std::lower_bound(
      entries.begin(), entries.end(), g,
      [](const auto& entry, const NGram& key) { return entry.first < key; });
  return it != entries.end() && it->first == g;
}

NGramSet WeightedHistogram::support() const {
  NGramSet out;
  out.reserve(entries.size());
  for (const auto& [gram, weight] : entries) {
    out.push_back(gram);
  }
  return out;
}

NGramSet cap_contribution(NGramSet items, int cap, StreamRng& rng) {
  if (cap < 1) {
    throw InvalidArgument("cap_contribution: cap must be >= 1");
  }
  if (items.size() <= static_cast<std::size_t>(cap)) {
    return items;
  }
  for (std::size_t i = 0; i < static_cast<std::size_t>(cap); ++i) {
    const std::size_t j = i + rng.next_below(items.size() - i);
    std::swap(items[i], items[j]);
  }
  items.resize(cap);
  sort_unique(items);
  return items;
}

HistogramBuilder::HistogramBuilder(int level, int shards) : level_(level) {
  if (shards < 1) {
    throw InvalidArgument("HistogramBuilder: need at least one shard");
  }
  shards_.resize(shards);
}

void HistogramBuilder::add_user(int shard, const NGramSet& items) {
  if (items.empty()) {
    return;
  }
  auto& counts = shards_[shard].counts;
  const auto group = static_cast<std::uint32_t>(items.size());
  for (const NGram& g : items) {
    GroupCounts& groups = counts[g];
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& p) { return p.first == group; });
    if (it == groups.end()) {
      groups.emplace_back(group, 1);
    } else {
      ++it->second;
    }
  }
}

WeightedHistogram HistogramBuilder::finalize() && {
  // Merge shard counts; integer addition commutes, so shard order is free.
  auto merged = std::move(shards_.front().counts);
  for (std::size_t s = 1; s < shards_.size(); ++s) {
    for (auto& [gram, groups] : shards_[s].counts) {
      GroupCounts& into = merged[gram];
      for (const auto& [group, count] : groups) {
        auto it = std::find_if(into.begin(), into.end(),
                               [&](const auto& p) { return p.first == group; });
        if (it == into.end()) {
          into.emplace_back(group, count);
        } else {
          it->second += count;
        }
      }
    }
    shards_[s].counts.clear();
  }

  WeightedHistogram hist;
  hist.level = level_;
  hist.entries.reserve(merged.size());
  for (auto& [gram, groups] : merged) {
    // Canonical reduction: ascending group size, one multiply per group.
    std::sort(groups.begin(), groups.end());
    double weight = 0.0;
    for (const auto& [group, count] : groups) {
      weight += static_cast<double>(count) /
                std::sqrt(static_cast<double>(group));
    }
    hist.entries.emplace_back(gram, weight);
  }
  std::sort(hist.entries.begin(), hist.entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return hist;
}

NGramSet threshold_release(const WeightedHistogram& hist, double sigma,
                           double rho, const GramNoise& noise) {
  if (!(sigma >= 0.0)) {
    throw InvalidArgument("threshold_release: sigma must be >= 0");
  }
  NGramSet released;
  if (rho == std::numeric_limits<double>::infinity()) {
    return released;
  }
  for (const auto& [gram, weight] : hist.entries) {
    const double noisy =
        sigma > 0.0 ? weight + sigma * noise.standard(gram) : weight;
    if (noisy > rho) {
      released.push_back(gram);
    }
  }
  // entries are sorted by gram, so `released` already is.
  return released;
}

}  // namespace dpne
