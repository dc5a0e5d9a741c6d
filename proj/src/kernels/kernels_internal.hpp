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

#include <cstddef>
#include <cstdint>

#include <fedretail/kernels.hpp>

namespace fedretail::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
void clamp_scalar(double* v, double lo, double hi, std::size_t n);
void leaky_relu_scalar(double* v, double slope, std::size_t n);
void field_add_scalar(std::uint64_t* acc, const std::uint64_t* x, std::uint64_t p, std::size_t n);
void field_sub_scalar(std::uint64_t* acc, const std::uint64_t* x, std::uint64_t p, std::size_t n);

#if defined(FEDRETAIL_HAVE_AVX2)
double dot_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
void clamp_avx2(double* v, double lo, double hi, std::size_t n);
void leaky_relu_avx2(double* v, double slope, std::size_t n);
void field_add_avx2(std::uint64_t* acc, const std::uint64_t* x, std::uint64_t p, std::size_t n);
void field_sub_avx2(std::uint64_t* acc, const std::uint64_t* x, std::uint64_t p, std::size_t n);
#endif

#if defined(FEDRETAIL_HAVE_NEON)
double dot_neon(const double* a, const double* b, std::size_t n);
void axpy_neon(double alpha, const double* x, double* y, std::size_t n);
void clamp_neon(double* v, double lo, double hi, std::size_t n);
void leaky_relu_neon(double* v, double slope, std::size_t n);
void field_add_neon(std::uint64_t* acc, const std::uint64_t* x, std::uint64_t p, std::size_t n);
void field_sub_neon(std::uint64_t* acc, const std::uint64_t* x, std::uint64_t p, std::size_t n);
#endif

}  // namespace fedretail::kernels::detail
