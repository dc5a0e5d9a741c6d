/*
   Copyright 2026 The Fedretail Authors

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

#include "kernels_internal.hpp"

namespace fedretail::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    // Four independent partial sums, the same lane layout the vector
    // backends use.
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        for (std::size_t l = 0; l < 4; ++l) {
            const double prod = a[i + l] * b[i + l];
            lane[l] = lane[l] + prod;
        }
    }
    double sum = (lane[0] + lane[1]) + (lane[2] + lane[3]);
    for (; i < n; ++i) {
        const double prod = a[i] * b[i];
        sum = sum + prod;
    }
    return sum;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double prod = alpha * x[i];
        y[i] = y[i] + prod;
    }
}

void clamp_scalar(double* v, double lo, double hi, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double raised = v[i] < lo ? lo : v[i];
        v[i] = raised > hi ? hi : raised;
    }
}

void leaky_relu_scalar(double* v, double slope, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (!(v[i] >= 0.0)) {
            v[i] = slope * v[i];
        }
    }
}

void field_add_scalar(std::uint64_t* acc, const std::uint64_t* x, std::uint64_t p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t s = acc[i] + x[i];
        acc[i] = s >= p ? s - p : s;
    }
}

void field_sub_scalar(std::uint64_t* acc, const std::uint64_t* x, std::uint64_t p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        acc[i] = acc[i] >= x[i] ? acc[i] - x[i] : acc[i] + (p - x[i]);
    }
}

}  // namespace fedretail::kernels::detail
