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

#include <arm_neon.h>

#include "kernels_internal.hpp"

namespace fedretail::kernels::detail {

// NEON holds two doubles per register; two registers give the same four
// partial sums as the scalar and AVX2 paths.

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t lo = vdupq_n_f64(0.0);
    float64x2_t hi = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
    }
    double sum = (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) + (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
    for (; i < n; ++i) {
        const double prod = a[i] * b[i];
        sum = sum + prod;
    }
    return sum;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
    }
    axpy_scalar(alpha, x + i, y + i, n - i);
}

void clamp_neon(double* v, double lo, double hi, std::size_t n) {
    const float64x2_t vlo = vdupq_n_f64(lo);
    const float64x2_t vhi = vdupq_n_f64(hi);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t x = vld1q_f64(v + i);
        x = vbslq_f64(vcltq_f64(x, vlo), vlo, x);
        x = vbslq_f64(vcgtq_f64(x, vhi), vhi, x);
        vst1q_f64(v + i, x);
    }
    clamp_scalar(v + i, lo, hi, n - i);
}

void leaky_relu_neon(double* v, double slope, std::size_t n) {
    const float64x2_t vs = vdupq_n_f64(slope);
    const float64x2_t zero = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t x = vld1q_f64(v + i);
        vst1q_f64(v + i, vbslq_f64(vcgeq_f64(x, zero), x, vmulq_f64(vs, x)));
    }
    leaky_relu_scalar(v + i, slope, n - i);
}

void field_add_neon(std::uint64_t* acc, const std::uint64_t* x, std::uint64_t p, std::size_t n) {
    const uint64x2_t vp = vdupq_n_u64(p);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const uint64x2_t s = vaddq_u64(vld1q_u64(acc + i), vld1q_u64(x + i));
        const uint64x2_t wrap = vcgeq_u64(s, vp);
        vst1q_u64(acc + i, vsubq_u64(s, vandq_u64(wrap, vp)));
    }
    field_add_scalar(acc + i, x + i, p, n - i);
}

void field_sub_neon(std::uint64_t* acc, const std::uint64_t* x, std::uint64_t p, std::size_t n) {
    const uint64x2_t vp = vdupq_n_u64(p);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const uint64x2_t a = vld1q_u64(acc + i);
        const uint64x2_t b = vld1q_u64(x + i);
        const uint64x2_t borrow = vcgtq_u64(b, a);
        vst1q_u64(acc + i, vaddq_u64(vsubq_u64(a, b), vandq_u64(borrow, vp)));
    }
    field_sub_scalar(acc + i, x + i, p, n - i);
}

}  // namespace fedretail::kernels::detail
