// Copyright 2026 The hexsim Authors
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
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace hexsim {

/// Number of workers used when a caller passes 0.
inline std::size_t default_workers() {
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs body(begin, end) over contiguous chunks of [0, count). Chunk boundaries
/// depend only on `count` and `workers`, and every index is visited exactly once,
/// so bodies that write only to their own indices give worker-independent output.
template <typename Body>
void parallel_chunks(std::size_t count, std::size_t workers, Body &&body, std::size_t min_chunk = 4096) {
    if (workers == 0) {
        workers = default_workers();
    }
    std::size_t chunks = std::min(workers, (count + min_chunk - 1) / std::max<std::size_t>(min_chunk, 1));
    if (chunks <= 1) {
        if (count > 0) {
            body(std::size_t{0}, count);
        }
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(chunks);
    pool.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        std::size_t begin = count * c / chunks;
        std::size_t end = count * (c + 1) / chunks;
        pool.emplace_back([&, c, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

/// Runs body(i) for every i in [0, count), one task per index when work items are coarse.
template <typename Body>
void parallel_for_each_index(std::size_t count, std::size_t workers, Body &&body) {
    parallel_chunks(
        count, workers,
        [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                body(i);
            }
        },
        1);
}

}  // namespace hexsim
