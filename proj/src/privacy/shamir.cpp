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

#include <set>

#include <fedretail/privacy.hpp>

namespace fedretail::privacy {

std::vector<ShamirShare> shamir_share(FieldElement secret, std::size_t n, std::size_t threshold, FieldElement p,
                                      Rng& rng) {
    if (threshold < 1 || threshold > n || n >= p) {
        throw Error{ErrorCode::kBadConfig, "shamir needs 1 <= t <= n < p"};
    }
    std::uniform_int_distribution<FieldElement> coeff{0, p - 1};
    std::vector<FieldElement> poly(threshold);
    poly[0] = secret % p;
    for (std::size_t i = 1; i < threshold; ++i) poly[i] = coeff(rng);

    std::vector<ShamirShare> shares;
    shares.reserve(n);
    for (std::uint64_t x = 1; x <= n; ++x) {
        // Horner
        FieldElement y = 0;
        for (std::size_t i = threshold; i-- > 0;) y = field_add(field_mul(y, x, p), poly[i], p);
        shares.push_back(ShamirShare{x, y});
    }
    return shares;
}

FieldElement shamir_reconstruct(std::span<const ShamirShare> shares, std::size_t threshold, FieldElement p) {
    if (shares.size() < threshold || threshold == 0) {
        throw Error{ErrorCode::kInsufficientShares,
                    "have " + std::to_string(shares.size()) + " shares, need " + std::to_string(threshold)};
    }
    std::set<std::uint64_t> seen;
    for (const auto& s : shares) {
        if (s.index % p == 0 || !seen.insert(s.index).second) {
            throw Error{ErrorCode::kDuplicateIndex, "share index " + std::to_string(s.index) + " repeated or zero"};
        }
    }
    const auto used = shares.first(threshold);
    FieldElement secret = 0;
    for (std::size_t i = 0; i < used.size(); ++i) {
        FieldElement num = 1;
        FieldElement den = 1;
        for (std::size_t j = 0; j < used.size(); ++j) {
            if (i == j) continue;
            num = field_mul(num, used[j].index % p, p);
            den = field_mul(den, field_sub(used[j].index % p, used[i].index % p, p), p);
        }
        const FieldElement basis = field_mul(num, field_inv(den, p), p);
        secret = field_add(secret, field_mul(used[i].value, basis, p), p);
    }
    return secret;
}

}  // namespace fedretail::privacy
