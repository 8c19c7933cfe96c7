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

#include <complex>
#include <vector>

namespace aslt::detail {

/// In-place unnormalized forward DFT, X_k = sum_j x_j e^{-2 pi i jk/m}.
/// Plans are created once per size under a lock; execution is reentrant.
void fft_forward(std::vector<std::complex<double>>& data);

}  // namespace aslt::detail
