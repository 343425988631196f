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
#include <initializer_list>
#include <string_view>

namespace dpne {

// SplitMix64 finalizer (Steele/Lea/Flood; Vigna's fixed-increment variant).
// Used both as the engine step and as a general 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// Folds a list of key parts into a well-mixed 64-bit stream key. All random
// streams in the library are derived from (seed, purpose, ...) tuples so
// that concurrent and reordered execution cannot change any draw.
constexpr std::uint64_t derive_key(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6a09e667f3bcc909ull;
  for (std::uint64_t p : parts) {
    h = mix64(h ^ (p + kGolden));
  }
  return h;
}

// 64-bit hash of a byte string (user ids, token text).
std::uint64_t hash_bytes(std::string_view bytes, std::uint64_t seed);

// Stream purposes. Values are arbitrary distinct constants.
namespace streams {
constexpr std::uint64_t kCap = 0x11c9dc5b1f9d3a01ull;
constexpr std::uint64_t kRelease = 0x22b7f43d9a51c203ull;
constexpr std::uint64_t kEstimate = 0x33a1e6872c19ee05ull;
constexpr std::uint64_t kBinomial = 0x44d39f01b3e7cc07ull;
constexpr std::uint64_t kSpurious = 0x55c45b23d8f1aa09ull;
constexpr std::uint64_t kSynth = 0x66e8a7452597880bull;
constexpr std::uint64_t kUserKey = 0x77f2c96733b5660dull;
}  // namespace streams

// Sequential SplitMix64 generator. Cheap to construct, so every independent
// piece of randomness gets its own keyed instance.
class StreamRng {
 public:
  explicit StreamRng(std::uint64_t state) : state_(state) {}

  std::uint64_t next() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform double strictly inside (0, 1).
  double next_unit() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, n), unbiased via rejection. n must be positive.
  std::uint64_t next_below(std::uint64_t n);

  // Standard normal draw via the inverse CDF.
  double next_gaussian();

 private:
  std::uint64_t state_;
};

inline StreamRng substream(std::initializer_list<std::uint64_t> parts) {
  return StreamRng(derive_key(parts));
}

// Binomial(n, q) sample. Exact inverse-transform for n <= 10^6 (the CDF walk
// starts where the pmf first becomes representable, so large means do not
// underflow); normal approximation with continuity correction above that.
// Consumes exactly one uniform draw; deterministic given the rng state.
std::uint64_t binomial_sample(std::uint64_t n, double q, StreamRng& rng);

}  // namespace dpne
