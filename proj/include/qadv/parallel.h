// Copyright 2026 The qadv Authors
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

#ifndef QADV_PARALLEL_H
#define QADV_PARALLEL_H

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace qadv {

/// Runs body(worker, i) for i in [0, count) on up to `workers` threads.
/// Work is handed out one index at a time; callers that write results by
/// index get output independent of the worker count. The first exception
/// thrown by any task is rethrown after all threads join.
inline void parallel_for(size_t count, int workers, const std::function<void(int, size_t)>& body) {
    int n = std::max(1, std::min<int>(workers, static_cast<int>(count)));
    if (n == 1) {
        for (size_t i = 0; i < count; i++) {
            body(0, i);
        }
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&](int worker) {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            try {
                body(worker, i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                next.store(count);
            }
        }
    };
    std::vector<std::thread> threads;
    for (int w = 0; w < n; w++) {
        threads.emplace_back(run, w);
    }
    for (auto& t : threads) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace qadv

#endif  // QADV_PARALLEL_H
