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

#ifndef CAPFAC_PARALLEL_H_
#define CAPFAC_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace capfac {

// Maps a requested worker count to an effective one: values < 1 mean "use
// the hardware concurrency".
int ResolveThreadCount(int requested);

// Calls fn(begin, end) on contiguous chunks covering [0, count), using at
// most `threads` workers. Chunks are disjoint, so callers that write into
// per-index slots get deterministic results regardless of scheduling. The
// first exception thrown by a worker is rethrown on the calling thread.
void ParallelFor(std::size_t count, int threads,
                 const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace capfac

#endif  // CAPFAC_PARALLEL_H_
