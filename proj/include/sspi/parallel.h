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

#ifndef SSPI_PARALLEL_H_
#define SSPI_PARALLEL_H_

#include <cstdint>
#include <functional>

namespace sspi {

// Worker count from SSPI_WORKERS, else the available parallelism.
int WorkerCount();

// Calls fn(i) for i in [0, count) on up to `workers` threads. Callers write
// results into per-index slots and merge them in index order, which keeps
// output independent of scheduling. The first exception (by index) is
// rethrown after all workers stop.
void ParallelFor(int64_t count, const std::function<void(int64_t)>& fn,
                 int workers = WorkerCount());

}  // namespace sspi

#endif  // SSPI_PARALLEL_H_
