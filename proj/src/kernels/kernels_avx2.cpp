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

#include <immintrin.h>

#include "kernels_internal.hpp"

namespace fedretail::kernels::detail {

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, prod);
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    double sum = (lane[0] + lane[1]) + (lane[2] + lane[3]);
    for (; i < n; ++i) {
        const double prod = a[i] * b[i];
        sum = sum + prod;
    }
    return sum;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
    }
    axpy_scalar(alpha, x + i, y + i, n - i);
}

void clamp_avx2(double* v, double lo, double hi, std::size_t n) {
    // compare+blend rather than min/max so signed zeros and NaN behave
    // exactly like the scalar ternaries.
    const __m256d vlo = _mm256_set1_pd(lo);
    const __m256d vhi = _mm256_set1_pd(hi);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d x = _mm256_loadu_pd(v + i);
        x = _mm256_blendv_pd(x, vlo, _mm256_cmp_pd(x, vlo, _CMP_LT_OQ));
        x = _mm256_blendv_pd(x, vhi, _mm256_cmp_pd(x, vhi, _CMP_GT_OQ));
        _mm256_storeu_pd(v + i, x);
    }
    clamp_scalar(v + i, lo, hi, n - i);
}

void leaky_relu_avx2(double* v, double slope, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(slope);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(v + i);
        const __m256d keep = _mm256_cmp_pd(x, zero, _CMP_GE_OQ);
        _mm256_storeu_pd(v + i, _mm256_blendv_pd(_mm256_mul_pd(vs, x), x, keep));
    }
    leaky_relu_scalar(v + i, slope, n - i);
}

void field_add_avx2(std::uint64_t* acc, const std::uint64_t* x, std::uint64_t p, std::size_t n) {
    // Sums stay below 2^63 for p < 2^62, so signed 64-bit compares are safe.
    const __m256i vp = _mm256_set1_epi64x(static_cast<long long>(p));
    const __m256i vpm1 = _mm256_set1_epi64x(static_cast<long long>(p - 1));
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc + i));
        const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + i));
        const __m256i s = _mm256_add_epi64(a, b);
        const __m256i wrap = _mm256_cmpgt_epi64(s, vpm1);
        const __m256i r = _mm256_sub_epi64(s, _mm256_and_si256(wrap, vp));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc + i), r);
    }
    field_add_scalar(acc + i, x + i, p, n - i);
}

void field_sub_avx2(std::uint64_t* acc, const std::uint64_t* x, std::uint64_t p, std::size_t n) {
    const __m256i vp = _mm256_set1_epi64x(static_cast<long long>(p));
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc + i));
        const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + i));
        const __m256i borrow = _mm256_cmpgt_epi64(b, a);
        const __m256i d = _mm256_sub_epi64(a, b);
        const __m256i r = _mm256_add_epi64(d, _mm256_and_si256(borrow, vp));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc + i), r);
    }
    field_sub_scalar(acc + i, x + i, p, n - i);
}

}  // namespace fedretail::kernels::detail
