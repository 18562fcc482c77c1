// Copyright 2026-present the torusdyn project
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

// Deterministic task-per-chunk parallelism: work is split into a fixed chunk
// grid independent of the worker count; every chunk writes only its own slot
// and the caller merges slots in chunk order, so results are bit-identical
// for any number of workers.

#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace torusdyn {

inline void parallel_chunks(int workers, size_t nchunks, const std::function<void(size_t)>& fn) {
    if (workers <= 0) workers = int(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (size_t(workers) > nchunks) workers = int(nchunks);
    if (workers <= 1) {
        for (size_t i = 0; i < nchunks; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    pool.reserve(size_t(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                size_t i = next.fetch_add(1);
                if (i >= nchunks) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> g(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace torusdyn
