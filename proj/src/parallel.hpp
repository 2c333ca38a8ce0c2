/*
   Copyright 2026 The cpa Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <atomic>
#include <cstdint>
#include <exception>

#include <omp.h>

namespace cpa::detail {

inline int thread_count(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

// Runs body(k) for k in [0, count) on the OpenMP pool. The first exception is
// rethrown on the calling thread; remaining iterations are skipped.
template <class Body>
void parallel_for(std::uint64_t count, int workers, Body&& body) {
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count(workers))
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(count); ++k) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      body(static_cast<std::uint64_t>(k));
    } catch (...) {
#pragma omp critical(cpa_parallel_failure)
      if (!failure) failure = std::current_exception();
      failed.store(true, std::memory_order_relaxed);
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace cpa::detail
