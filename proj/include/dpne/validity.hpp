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
#include <unordered_set>

#include "dpne/ngram.hpp"
#include "dpne/rng.hpp"

namespace dpne {

// How the level-k candidate space V_k is built from the released sets:
//   both_side:   V_k = (S_1 x S_{k-1}) intersect (S_{k-1} x S_1)
//   single_side: V_k = S_{k-1} x S_1
enum class PruningRule {
  kBothSide,
  kSingleSide,
};

// Hashed membership views over S_1 and S_{k-1}, built once per level.
class ValiditySets {
 public:
  ValiditySets(const NGramSet& s1, const NGramSet& s_prev);

  bool token_released(TokenId t) const { return s1_.contains(t); }
  bool prev_released(const NGram& g) const { return prev_.contains(g); }

 private:
  std::unordered_set<TokenId> s1_;
  std::unordered_set<NGram, NGramHash> prev_;
};

// Membership test for V_k. With both_side: first and last token in S_1 and
// both length-(k-1) subgrams in S_{k-1}; with single_side: the prefix in
// S_{k-1} and the last token in S_1. Requires |w| >= 2.
bool check_validity(const NGram& w, const ValiditySets& sets, PruningRule rule);
bool check_validity(const NGram& w, const NGramSet& s1, const NGramSet& s_prev,
                    PruningRule rule);

// Explicit V_k enumeration for the reference path and small instances.
// Refuses (InvalidArgument) when |s1| * |s_prev| exceeds candidate_limit,
// pointing callers at the scalable path.
NGramSet compute_valid_kgrams(const NGramSet& s1, const NGramSet& s_prev,
                              PruningRule rule,
                              std::uint64_t candidate_limit = 50000000);

// items intersect V_k, i.e. the subset passing check_validity. All items
// must share one length k >= 2.
NGramSet prune_invalid(const NGramSet& items, const ValiditySets& sets,
                       PruningRule rule);
NGramSet prune_invalid(const NGramSet& items, const NGramSet& s1,
                       const NGramSet& s_prev, PruningRule rule);

// Estimates |V_k| by drawing ceil(p * |s1| * |s_prev|) uniform pairs (x, w)
// with replacement, counting how many concatenations x.w are valid, and
// scaling: ceil(count / p). Returns 0 when either input set is empty.
std::uint64_t estimate_valid_kgrams(const NGramSet& s1, const NGramSet& s_prev,
                                    PruningRule rule, double p, StreamRng& rng);

// Draws `count` distinct grams uniformly from V_k minus `support` by
// rejection: sample x from s1 and w from s_prev, accept x.w if it is valid
// and not yet taken. Throws InternalError with the observed acceptance rate
// after max_attempts consecutive rejections (the |V_k| estimate was likely
// too high).
NGramSet sample_spurious(const NGramSet& s1, const NGramSet& s_prev,
                         PruningRule rule, const NGramSet& support,
                         std::uint64_t count, StreamRng& rng,
                         std::uint64_t max_attempts);

}  // namespace dpne
