/*
   Copyright 2026 The aslt Authors

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

#include <algorithm>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace aslt {

/// Computes produce(r) for r = 0..count-1 on up to `threads` workers, in
/// blocks, and hands each result to consume(r, value) strictly in index
/// order. Reductions built on top are therefore independent of the thread count.
template <class Produce, class Consume>
void ordered_parallel(std::size_t count, unsigned threads, Produce&& produce, Consume&& consume) {
    using Value = decltype(produce(std::size_t{0}));
    const std::size_t workers = std::max<std::size_t>(1, threads);
    if (workers == 1) {
        for (std::size_t r = 0; r < count; ++r) consume(r, produce(r));
        return;
    }
    const std::size_t block = workers * 4;
    std::vector<std::optional<Value>> slot(block);
    std::vector<std::exception_ptr> failure(workers);
    for (std::size_t start = 0; start < count; start += block) {
        const std::size_t len = std::min(block, count - start);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < len; i += workers) slot[i].emplace(produce(start + i));
                } catch (...) {
                    failure[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& f : failure) {
            if (f) std::rethrow_exception(f);
        }
        for (std::size_t i = 0; i < len; ++i) {
            consume(start + i, std::move(*slot[i]));
            slot[i].reset();
        }
    }
}

}  // namespace aslt
