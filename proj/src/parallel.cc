// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sspi/parallel.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace sspi {

int WorkerCount() {
  if (const char* env = std::getenv("SSPI_WORKERS")) {
    try {
      int w = std::stoi(env);
      if (w >= 1) return w;
    } catch (const std::exception&) {
      // Fall through to the default on malformed values.
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void ParallelFor(int64_t count, const std::function<void(int64_t)>& fn,
                 int workers) {
  if (count <= 0) return;
  workers = static_cast<int>(std::min<int64_t>(std::max(1, workers), count));
  if (workers == 1) {
    for (int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int64_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  int64_t failed_index = count;
  std::exception_ptr failure;
  auto work = [&] {
    for (;;) {
      int64_t i = next.fetch_add(1);
      if (i >= count || stop.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
        stop.store(true);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace sspi
