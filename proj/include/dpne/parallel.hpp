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

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace dpne {

// Runs fn(begin, end, shard) over `threads` contiguous slices of [0, n).
// Exactly `threads` shards are created even when some end up empty, so a
// shard index is always < threads. The first exception thrown by any shard
// is rethrown on the calling thread.
inline void parallel_shards(
    std::size_t n, int threads,
    const std::function<void(std::size_t, std::size_t, int)>& fn) {
  if (threads <= 1) {
    fn(0, n, 0);
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t per =
      (n + static_cast<std::size_t>(threads) - 1) / threads;
  for (int s = 0; s < threads; ++s) {
    const std::size_t begin = std::min(n, per * static_cast<std::size_t>(s));
    const std::size_t end = std::min(n, begin + per);
    workers.emplace_back([&, begin, end, s] {
      try {
        fn(begin, end, s);
      } catch (...) {
        errors[s] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) {
    w.join();
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

}  // namespace dpne
