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

#pragma once

#include <cstdint>
#include <span>
#include <string_view>

// Data-parallel inner loops shared by the regressor and the secure
// aggregation layer. Every backend reduces in the same 4-lane order and never
// fuses multiply-adds, so all backends produce bit-identical results.

namespace fedretail::kernels {

enum class Backend {
    kScalar,
    kAvx2,
    kNeon,
};

struct KernelTable {
    Backend backend;
    // sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y[i] += alpha * x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // v[i] = min(hi, max(v[i], lo))
    void (*clamp)(double* v, double lo, double hi, std::size_t n);
    // v[i] = v[i] >= 0 ? v[i] : slope * v[i]
    void (*leaky_relu)(double* v, double slope, std::size_t n);
    // acc[i] = (acc[i] + x[i]) mod p, operands in [0, p), p < 2^62
    void (*field_add)(std::uint64_t* acc, const std::uint64_t* x, std::uint64_t p, std::size_t n);
    // acc[i] = (acc[i] - x[i]) mod p
    void (*field_sub)(std::uint64_t* acc, const std::uint64_t* x, std::uint64_t p, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

// nullptr when the backend was not compiled in or the CPU lacks it.
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;

// Best available backend, chosen once. FEDRETAIL_SIMD=scalar|avx2|neon
// overrides the choice when that backend is usable.
const KernelTable& active() noexcept;

std::string_view backend_name(Backend b) noexcept;

// Span conveniences over the active table.
inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
    return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
    active().axpy(alpha, x.data(), y.data(), x.size());
}

inline void clamp(std::span<double> v, double lo, double hi) noexcept {
    active().clamp(v.data(), lo, hi, v.size());
}

inline void leaky_relu(std::span<double> v, double slope) noexcept {
    active().leaky_relu(v.data(), slope, v.size());
}

inline void field_add(std::span<std::uint64_t> acc, std::span<const std::uint64_t> x, std::uint64_t p) noexcept {
    active().field_add(acc.data(), x.data(), p, acc.size());
}

inline void field_sub(std::span<std::uint64_t> acc, std::span<const std::uint64_t> x, std::uint64_t p) noexcept {
    active().field_sub(acc.data(), x.data(), p, acc.size());
}

}  // namespace fedretail::kernels
