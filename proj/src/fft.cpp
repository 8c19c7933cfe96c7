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

#include "fft.hpp"

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

#include <fftw3.h>

namespace aslt::detail {
namespace {

struct Buffer {
    explicit Buffer(std::size_t n) : data(fftw_alloc_complex(n)) {}
    ~Buffer() { fftw_free(data); }
    Buffer(const Buffer&) = delete;
    Buffer& operator=(const Buffer&) = delete;
    fftw_complex* data;
};

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_plan plan_for(std::size_t n) {
    static std::map<std::size_t, fftw_plan> plans;
    std::lock_guard lock(planner_mutex());
    auto it = plans.find(n);
    if (it != plans.end()) return it->second;
    Buffer scratch(n);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), scratch.data, scratch.data, FFTW_FORWARD, FFTW_ESTIMATE);
    plans.emplace(n, p);
    return p;
}

}  // namespace

void fft_forward(std::vector<std::complex<double>>& data) {
    const std::size_t n = data.size();
    if (n <= 1) return;
    fftw_plan p = plan_for(n);
    Buffer buf(n);
    std::memcpy(buf.data, data.data(), n * sizeof(fftw_complex));
    fftw_execute_dft(p, buf.data, buf.data);
    std::memcpy(static_cast<void*>(data.data()), buf.data, n * sizeof(fftw_complex));
}

}  // namespace aslt::detail
