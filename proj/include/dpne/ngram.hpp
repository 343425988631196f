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

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dpne/error.hpp"
#include "dpne/rng.hpp"

namespace dpne {

using TokenId = std::uint32_t;

// A contiguous token sequence of length 1..kMaxLen, stored inline. Unused
// slots are kept zeroed so defaulted comparison over (tokens, length) is the
// lexicographic order on the used prefix.
class NGram {
 public:
  static constexpr std::size_t kMaxLen = 15;

  NGram() = default;

  explicit NGram(std::span<const TokenId> tokens) {
    if (tokens.empty() || tokens.size() > kMaxLen) {
      throw InvalidArgument("NGram: length must lie in [1, kMaxLen]");
    }
    len_ = static_cast<std::uint8_t>(tokens.size());
    std::copy(tokens.begin(), tokens.end(), tok_.begin());
  }

  static NGram single(TokenId t) {
    NGram g;
    g.len_ = 1;
    g.tok_[0] = t;
    return g;
  }

  std::size_t size() const { return len_; }
  TokenId operator[](std::size_t i) const { return tok_[i]; }
  TokenId front() const { return tok_[0]; }
  TokenId back() const { return tok_[len_ - 1]; }
  const TokenId* begin() const { return tok_.data(); }
  const TokenId* end() const { return tok_.data() + len_; }

  NGram subgram(std::size_t pos, std::size_t len) const {
    if (len == 0 || pos + len > len_) {
      throw InvalidArgument("NGram::subgram: range out of bounds");
    }
    return NGram(std::span<const TokenId>(tok_.data() + pos, len));
  }

  NGram prefix(std::size_t len) const { return subgram(0, len); }
  NGram suffix(std::size_t len) const { return subgram(len_ - len, len); }

  friend NGram concat(TokenId head, const NGram& tail) {
    if (tail.size() + 1 > kMaxLen) {
      throw InvalidArgument("NGram concat: length would exceed kMaxLen");
    }
    NGram g;
    g.len_ = static_cast<std::uint8_t>(tail.len_ + 1);
    g.tok_[0] = head;
    std::copy(tail.begin(), tail.end(), g.tok_.begin() + 1);
    return g;
  }

  friend NGram concat(const NGram& head, TokenId tail) {
    if (head.size() + 1 > kMaxLen) {
      throw InvalidArgument("NGram concat: length would exceed kMaxLen");
    }
    NGram g = head;
    g.tok_[g.len_] = tail;
    ++g.len_;
    return g;
  }

  bool operator==(const NGram&) const = default;
  auto operator<=>(const NGram&) const = default;

  // Keyed content hash; drives gram-keyed noise and hashed containers.
  std::uint64_t hash_mix(std::uint64_t key) const {
    std::uint64_t h = key ^ (static_cast<std::uint64_t>(len_) + kGolden);
    for (std::size_t i = 0; i < len_; ++i) {
      h = mix64(h ^ (tok_[i] + kGolden));
    }
    return h;
  }

 private:
  std::array<TokenId, kMaxLen> tok_{};
  std::uint8_t len_ = 0;
};

struct NGramHash {
  std::size_t operator()(const NGram& g) const {
    return static_cast<std::size_t>(g.hash_mix(0x243f6a8885a308d3ull));
  }
};

// A deterministic gram set: sorted, duplicate-free vector. All level outputs
// and per-user gram sets use this representation so iteration order never
// depends on hashing.
using NGramSet = std::vector<NGram>;

inline void sort_unique(NGramSet& set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
}

inline bool set_contains(const NGramSet& set, const NGram& g) {
  return std::binary_search(set.begin(), set.end(), g);
}

}  // namespace dpne
