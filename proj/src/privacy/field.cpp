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

#include <array>
#include <cmath>

#include <fedretail/crypto.hpp>
#include <fedretail/privacy.hpp>

namespace fedretail::privacy {

FieldElement field_add(FieldElement a, FieldElement b, FieldElement p) {
    const FieldElement s = a + b;
    return s >= p ? s - p : s;
}

FieldElement field_sub(FieldElement a, FieldElement b, FieldElement p) { return a >= b ? a - b : a + (p - b); }

FieldElement field_mul(FieldElement a, FieldElement b, FieldElement p) {
    return static_cast<FieldElement>((static_cast<unsigned __int128>(a) * b) % p);
}

namespace {

    FieldElement pow_mod(FieldElement base, std::uint64_t exp, FieldElement p) {
        FieldElement result = 1 % p;
        base %= p;
        while (exp) {
            if (exp & 1) result = field_mul(result, base, p);
            base = field_mul(base, base, p);
            exp >>= 1;
        }
        return result;
    }

}  // namespace

FieldElement field_inv(FieldElement a, FieldElement p) {
    if (a % p == 0) throw Error{ErrorCode::kDuplicateIndex, "zero has no inverse"};
    return pow_mod(a, p - 2, p);
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (const std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // Deterministic for all 64-bit n with these witnesses.
    for (const std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = field_mul(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

void FixedPointCodec::validate() const {
    if (fractional_bits < 1 || fractional_bits > 40) throw Error{ErrorCode::kBadConfig, "fractional_bits must lie in [1, 40]"};
    if (modulus >= (FieldElement{1} << 62) || !is_prime(modulus)) {
        throw Error{ErrorCode::kBadConfig, "field modulus must be a prime below 2^62"};
    }
    if (!(clamp_range > 0.0)) throw Error{ErrorCode::kBadConfig, "clamp_range must be > 0"};
}

void FixedPointCodec::check_capacity(std::size_t n_summands) const {
    const double worst = static_cast<double>(n_summands) * clamp_range * std::ldexp(1.0, fractional_bits);
    if (worst >= static_cast<double>(modulus / 2)) {
        throw Error{ErrorCode::kModulusOverflowRisk, std::to_string(n_summands) + " summands can overflow the field"};
    }
}

double FixedPointCodec::resolution() const { return std::ldexp(1.0, -fractional_bits); }

std::vector<FieldElement> encode(std::span<const double> values, const FixedPointCodec& codec) {
    const double scale = std::ldexp(1.0, codec.fractional_bits);
    std::vector<FieldElement> out;
    out.reserve(values.size());
    for (const double v : values) {
        const double clamped = std::fmin(codec.clamp_range, std::fmax(-codec.clamp_range, v));
        const std::int64_t q = std::llround(clamped * scale);
        out.push_back(q >= 0 ? static_cast<FieldElement>(q) : codec.modulus - static_cast<FieldElement>(-q));
    }
    return out;
}

std::vector<double> decode(std::span<const FieldElement> values, const FixedPointCodec& codec, std::size_t n_summands) {
    codec.check_capacity(n_summands);
    const double scale = std::ldexp(1.0, -codec.fractional_bits);
    const FieldElement half = codec.modulus / 2;
    std::vector<double> out;
    out.reserve(values.size());
    for (const FieldElement x : values) {
        const std::int64_t signed_value =
            x > half ? -static_cast<std::int64_t>(codec.modulus - x) : static_cast<std::int64_t>(x);
        out.push_back(static_cast<double>(signed_value) * scale);
    }
    return out;
}

std::vector<FieldElement> derive_pairwise_mask(FieldElement seed, std::int64_t round, std::size_t length,
                                               const FixedPointCodec& codec) {
    std::array<std::uint8_t, 20> material{};
    for (int i = 0; i < 8; ++i) material[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(seed >> (8 * i));
    const auto r = static_cast<std::uint64_t>(round);
    for (int i = 0; i < 8; ++i) material[static_cast<std::size_t>(8 + i)] = static_cast<std::uint8_t>(r >> (8 * i));
    material[16] = 'm';
    material[17] = 'a';
    material[18] = 's';
    material[19] = 'k';
    const auto digest = crypto::sha256(material);
    const auto stream = crypto::aes_ctr_keystream(std::span<const std::uint8_t, 16>{digest.data(), 16}, 8 * length);

    std::vector<FieldElement> mask(length);
    for (std::size_t i = 0; i < length; ++i) {
        std::uint64_t word = 0;
        for (int b = 0; b < 8; ++b) word |= static_cast<std::uint64_t>(stream[8 * i + static_cast<std::size_t>(b)]) << (8 * b);
        mask[i] = word % codec.modulus;
    }
    return mask;
}

}  // namespace fedretail::privacy
