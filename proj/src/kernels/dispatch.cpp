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

#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace fedretail::kernels {

namespace {

    constexpr KernelTable kScalar{
        Backend::kScalar,          detail::dot_scalar,       detail::axpy_scalar,      detail::clamp_scalar,
        detail::leaky_relu_scalar, detail::field_add_scalar, detail::field_sub_scalar,
    };

#if defined(FEDRETAIL_HAVE_AVX2)
    constexpr KernelTable kAvx2{
        Backend::kAvx2,          detail::dot_avx2,       detail::axpy_avx2,      detail::clamp_avx2,
        detail::leaky_relu_avx2, detail::field_add_avx2, detail::field_sub_avx2,
    };
#endif

#if defined(FEDRETAIL_HAVE_NEON)
    constexpr KernelTable kNeon{
        Backend::kNeon,          detail::dot_neon,       detail::axpy_neon,      detail::clamp_neon,
        detail::leaky_relu_neon, detail::field_add_neon, detail::field_sub_neon,
    };
#endif

    const KernelTable& select() noexcept {
        const KernelTable* best = &kScalar;
        if (const KernelTable* t = neon_table()) best = t;
        if (const KernelTable* t = avx2_table()) best = t;

        if (const char* env = std::getenv("FEDRETAIL_SIMD")) {
            const std::string_view want{env};
            if (want == "scalar") return kScalar;
            if (want == "avx2" && avx2_table()) return *avx2_table();
            if (want == "neon" && neon_table()) return *neon_table();
        }
        return *best;
    }

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(FEDRETAIL_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &kAvx2 : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable* neon_table() noexcept {
#if defined(FEDRETAIL_HAVE_NEON)
    return &kNeon;
#else
    return nullptr;
#endif
}

const KernelTable& active() noexcept {
    static const KernelTable& table = select();
    return table;
}

std::string_view backend_name(Backend b) noexcept {
    switch (b) {
        case Backend::kScalar:
            return "scalar";
        case Backend::kAvx2:
            return "avx2";
        case Backend::kNeon:
            return "neon";
    }
    return "unknown";
}

}  // namespace fedretail::kernels
