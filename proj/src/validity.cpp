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

#include "dpne/validity.hpp"

#include <cmath>
#include <string>

#include "dpne/error.hpp"

namespace dpne {

ValiditySets::ValiditySets(const NGramSet& s1, const NGramSet& s_prev) {
  s1_.reserve(s1.size());
  for (const NGram& g : s1) {
    s1_.insert(g.front());
  }
  prev_.reserve(s_prev.size());
  prev_.insert(s_prev.begin(), s_prev.end());
}

bool check_validity(const NGram& w, const ValiditySets& sets,
                    PruningRule rule) {
  const std::size_t k = w.size();
  if (k < 2) {
    throw InvalidArgument("check_validity: gram length must be >= 2");
  }
  if (rule == PruningRule::kSingleSide) {
    return sets.token_released(w.back()) && sets.prev_released(w.prefix(k - 1));
  }
  return sets.token_released(w.front()) && sets.token_released(w.back()) &&
         sets.prev_released(w.prefix(k - 1)) &&
         sets.prev_released(w.suffix(k - 1));
}

bool check_validity(const NGram& w, const NGramSet& s1, const NGramSet& s_prev,
                    PruningRule rule) {
  return check_validity(w, ValiditySets(s1, s_prev), rule);
}

NGramSet compute_valid_kgrams(const NGramSet& s1, const NGramSet& s_prev,
                              PruningRule rule,
                              std::uint64_t candidate_limit) {
  const std::uint64_t candidates =
      static_cast<std::uint64_t>(s1.size()) * s_prev.size();
  if (candidates > candidate_limit) {
    throw InvalidArgument(
        "compute_valid_kgrams: " + std::to_string(candidates) +
        " candidates exceed the explicit-enumeration limit; use the scalable "
        "path");
  }
  NGramSet out;
  if (s1.empty() || s_prev.empty()) {
    return out;
  }
  const ValiditySets sets(s1, s_prev);
  if (rule == PruningRule::kSingleSide) {
    // V_k = s_prev x s1: every concatenation w.z is valid by construction.
    out.reserve(candidates);
    for (const NGram& w : s_prev) {
      for (const NGram& z : s1) {
        out.push_back(concat(w, z.front()));
      }
    }
  } else {
    for (const NGram& x : s1) {
      for (const NGram& w : s_prev) {
        NGram candidate = concat(x.front(), w);
        if (check_validity(candidate, sets, rule)) {
          out.push_back(candidate);
        }
      }
    }
  }
  sort_unique(out);
  return out;
}

NGramSet prune_invalid(const NGramSet& items, const ValiditySets& sets,
                       PruningRule rule) {
  NGramSet out;
  if (items.empty()) {
    return out;
  }
  const std::size_t k = items.front().size();
  out.reserve(items.size());
  for (const NGram& w : items) {
    if (w.size() != k) {
      throw InvalidArgument("prune_invalid: items must share one length");
    }
    if (check_validity(w, sets, rule)) {
      out.push_back(w);
    }
  }
  return out;  // filtering preserves sortedness
}

NGramSet prune_invalid(const NGramSet& items, const NGramSet& s1,
                       const NGramSet& s_prev, PruningRule rule) {
  return prune_invalid(items, ValiditySets(s1, s_prev), rule);
}

std::uint64_t estimate_valid_kgrams(const NGramSet& s1, const NGramSet& s_prev,
                                    PruningRule rule, double p,
                                    StreamRng& rng) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw InvalidArgument("estimate_valid_kgrams: p must lie in (0, 1]");
  }
  if (s1.empty() || s_prev.empty()) {
    return 0;
  }
  const double pairs =
      static_cast<double>(s1.size()) * static_cast<double>(s_prev.size());
  const auto draws = static_cast<std::uint64_t>(std::ceil(p * pairs));
  const ValiditySets sets(s1, s_prev);
  std::uint64_t count = 0;
  for (std::uint64_t i = 0; i < draws; ++i) {
    const NGram& x = s1[rng.next_below(s1.size())];
    const NGram& w = s_prev[rng.next_below(s_prev.size())];
    if (check_validity(concat(x.front(), w), sets, rule)) {
      ++count;
    }
  }
  return static_cast<std::uint64_t>(
      std::ceil(static_cast<double>(count) / p));
}

NGramSet sample_spurious(const NGramSet& s1, const NGramSet& s_prev,
                         PruningRule rule, const NGramSet& support,
                         std::uint64_t count, StreamRng& rng,
                         std::uint64_t max_attempts) {
  NGramSet out;
  if (count == 0) {
    return out;
  }
  if (s1.empty() || s_prev.empty()) {
    throw InvalidArgument("sample_spurious: cannot sample from empty sets");
  }
  const ValiditySets sets(s1, s_prev);
  std::unordered_set<NGram, NGramHash> taken;
  std::uint64_t rejections = 0;
  std::uint64_t attempts = 0;
  while (taken.size() < count) {
    if (rejections >= max_attempts) {
      const double rate =
          attempts == 0
              ? 0.0
              : static_cast<double>(taken.size()) / static_cast<double>(attempts);
      throw InternalError(
          "sample_spurious: gave up after " + std::to_string(rejections) +
          " consecutive rejections (acceptance rate " + std::to_string(rate) +
          "); the valid-gram estimate was likely too high");
    }
    ++attempts;
    const NGram& x = s1[rng.next_below(s1.size())];
    const NGram& w = s_prev[rng.next_below(s_prev.size())];
    const NGram candidate = concat(x.front(), w);
    if (check_validity(candidate, sets, rule) &&
        !set_contains(support, candidate) && !taken.contains(candidate)) {
      taken.insert(candidate);
      rejections = 0;
    } else {
      ++rejections;
    }
  }
  out.assign(taken.begin(), taken.end());
  sort_unique(out);
  return out;
}

}  // namespace dpne
