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

#include "dpne/rng.hpp"

#include <cmath>
#include <limits>

#include "dpne/error.hpp"
#include "dpne/normal.hpp"

namespace dpne {

std::uint64_t hash_bytes(std::string_view bytes, std::uint64_t seed) {
  // FNV-1a over the bytes, then a SplitMix64 finalize of the running state.
  std::uint64_t h = 0xcbf29ce484222325ull ^ seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return mix64(h ^ (bytes.size() + kGolden));
}

std::uint64_t StreamRng::next_below(std::uint64_t n) {
  if (n == 0) {
    throw InvalidArgument("StreamRng::next_below: n must be positive");
  }
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = next();
  while (x >= limit) {
    x = next();
  }
  return x % n;
}

double StreamRng::next_gaussian() {
  return std_normal_inv_cdf(next_unit());
}

std::uint64_t binomial_sample(std::uint64_t n, double q, StreamRng& rng) {
  if (n == 0 || q <= 0.0) {
    return 0;
  }
  if (q >= 1.0) {
    return n;
  }
  const double u = rng.next_unit();
  const double nd = static_cast<double>(n);
  const double mean = nd * q;
  const double sd = std::sqrt(mean * (1.0 - q));

  if (n > 1000000) {
    const double z = std_normal_inv_cdf(u);
    double x = std::floor(mean + z * sd + 0.5);
    if (x < 0.0) return 0;
    if (x >= nd) return n;
    return static_cast<std::uint64_t>(x);
  }

  // Inverse transform. Start the CDF walk 15 sd below the mean: the mass
  // below is under e^-112, unreachable by any representable u, while the
  // pmf there still fits in a double.
  std::uint64_t k0 = 0;
  const double lo = mean - 15.0 * sd - 10.0;
  if (lo > 0.0) {
    k0 = static_cast<std::uint64_t>(lo);
  }
  const double ratio = q / (1.0 - q);
  auto log_pmf = [&](std::uint64_t k) {
    const double kd = static_cast<double>(k);
    return std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) -
           std::lgamma(nd - kd + 1.0) + kd * std::log(q) +
           (nd - kd) * std::log1p(-q);
  };
  std::uint64_t k = k0;
  double pmf = std::exp(log_pmf(k0));
  double cdf = pmf;
  while (u > cdf && k < n) {
    ++k;
    pmf *= ratio * (nd - static_cast<double>(k) + 1.0) / static_cast<double>(k);
    cdf += pmf;
    if (pmf < 1e-18 && cdf > 0.999) {
      break;  // u sits beyond the representable right tail
    }
  }
  return k;
}

}  // namespace dpne
