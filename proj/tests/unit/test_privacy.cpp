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

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <catch_amalgamated.hpp>

#include <fedretail/privacy.hpp>

namespace fedretail::privacy {

namespace {

    ErrorCode code_of(auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        FAIL("expected an error");
        return ErrorCode::kIo;
    }

    bool trial_division_prime(std::uint64_t n) {
        if (n < 2) return false;
        for (std::uint64_t d = 2; d * d <= n; ++d) {
            if (n % d == 0) return false;
        }
        return true;
    }

    std::vector<double> random_vector(std::size_t n, double range, Rng& rng) {
        std::uniform_real_distribution<double> u{-range, range};
        std::vector<double> v(n);
        for (auto& x : v) x = u(rng);
        return v;
    }

    std::vector<ClientId> ids(std::size_t n) {
        std::vector<ClientId> out(n);
        std::iota(out.begin(), out.end(), ClientId{0});
        return out;
    }

}  // namespace

TEST_CASE("element-wise clipping") {
    CHECK(clip_gradient(std::vector<double>{2.5, -0.3, -4.0}, 1.0) == std::vector<double>{1.0, -0.3, -1.0});
    CHECK(clip_gradient(std::vector<double>{0.5}, 0.5) == std::vector<double>{0.5});
    const std::vector<double> inside{0.1, -0.9, 1.0, -1.0};
    CHECK(clip_gradient(inside, 1.0) == inside);

    Rng rng{4};
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = random_vector(64, 10.0, rng);
        for (const double v : clip_gradient(g, 0.75)) REQUIRE(std::abs(v) <= 0.75);
    }

    const auto scaled = clip_gradient_norm(std::vector<double>{3.0, 4.0}, 1.0);
    CHECK(scaled[0] == Catch::Approx(0.6));
    CHECK(scaled[1] == Catch::Approx(0.8));

    DPConfig none;
    none.clip_mode = ClipMode::kNone;
    CHECK(apply_clipping(std::vector<double>{9.0}, none) == std::vector<double>{9.0});
    DPConfig bad;
    bad.clip_threshold = 0.0;
    CHECK(code_of([&] { bad.validate(); }) == ErrorCode::kBadConfig);
}

TEST_CASE("gaussian noise") {
    Rng rng{17};
    const std::vector<double> v{1.0, -2.0, 3.0};
    Rng before = rng;
    CHECK(add_gaussian_noise(v, 0.0, rng) == v);
    CHECK(rng == before);

    constexpr std::size_t kSamples = 100'000;
    const std::vector<double> zeros(kSamples, 0.0);
    const auto noisy = add_gaussian_noise(zeros, 1.0, rng);
    const double mean = std::accumulate(noisy.begin(), noisy.end(), 0.0) / kSamples;
    double ss = 0.0;
    for (const double x : noisy) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / kSamples);
    CHECK(std::abs(sd - 1.0) <= 0.05);
    CHECK(std::abs(mean) <= 3.0 / std::sqrt(static_cast<double>(kSamples)));
}

TEST_CASE("prime field") {
    for (std::uint64_t n = 0; n < 5000; ++n) REQUIRE(is_prime(n) == trial_division_prime(n));
    CHECK(is_prime(kMersenne61));
    CHECK_FALSE(is_prime(kMersenne61 + 2));  // 2^61 + 1 = 3 * ...
    CHECK_FALSE(is_prime(561));
    CHECK_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
    CHECK(is_prime(4294967291ULL));

    const FieldElement p = kMersenne61;
    CHECK(field_add(p - 1, 5, p) == 4);
    CHECK(field_sub(3, 5, p) == p - 2);
    CHECK(field_mul(p - 1, p - 1, p) == 1);
    Rng rng{2};
    std::uniform_int_distribution<FieldElement> d{1, p - 1};
    for (int i = 0; i < 200; ++i) {
        const auto a = d(rng);
        REQUIRE(field_mul(a, field_inv(a, p), p) == 1);
    }
    CHECK(code_of([&] { (void)field_inv(0, p); }) == ErrorCode::kDuplicateIndex);
}

TEST_CASE("fixed-point codec") {
    const FixedPointCodec codec;
    CHECK(encode(std::vector<double>{0.0}, codec) == std::vector<FieldElement>{0});
    CHECK(decode(std::vector<FieldElement>{0}, codec, 1) == std::vector<double>{0.0});
    CHECK(decode(encode(std::vector<double>{1.5}, codec), codec, 1) == std::vector<double>{1.5});
    CHECK(decode(encode(std::vector<double>{-1.5}, codec), codec, 1) == std::vector<double>{-1.5});
    CHECK(encode(std::vector<double>{-1.0}, codec)[0] == codec.modulus - 65536);
    CHECK(decode(encode(std::vector<double>{5e9}, codec), codec, 1)[0] == codec.clamp_range);

    const double tol = 2.0 * std::ldexp(1.0, -17);
    Rng rng{3};
    for (int i = 0; i < 10'000; ++i) {
        const auto ab = random_vector(2, 1000.0, rng);
        const auto ea = encode(std::span{ab}.first(1), codec);
        const auto eb = encode(std::span{ab}.last(1), codec);
        const std::vector<FieldElement> sum{field_add(ea[0], eb[0], codec.modulus)};
        REQUIRE(std::abs(decode(sum, codec, 2)[0] - (ab[0] + ab[1])) <= tol);
    }

    CHECK_NOTHROW(codec.check_capacity(45));
    CHECK(code_of([&] { codec.check_capacity(std::size_t{1} << 24); }) == ErrorCode::kModulusOverflowRisk);
    FixedPointCodec composite;
    composite.modulus = 1ULL << 40;
    CHECK(code_of([&] { composite.validate(); }) == ErrorCode::kBadConfig);
}

TEST_CASE("pairwise masks") {
    const FixedPointCodec codec;
    const auto a = derive_pairwise_mask(12345, 3, 64, codec);
    CHECK(a == derive_pairwise_mask(12345, 3, 64, codec));
    CHECK(a != derive_pairwise_mask(12345, 4, 64, codec));
    CHECK(a != derive_pairwise_mask(12346, 3, 64, codec));
    for (const auto v : a) CHECK(v < codec.modulus);
    for (const auto v : a) CHECK(field_add(v, field_sub(0, v, codec.modulus), codec.modulus) == 0);
    const auto prefix = derive_pairwise_mask(12345, 3, 10, codec);
    CHECK(std::equal(prefix.begin(), prefix.end(), a.begin()));
}

TEST_CASE("masked updates hide the plain vector") {
    // One client with a single unknown neighbor seed: coordinates should look
    // uniform over the field. 100 equal-width bins, chi-square at 1%.
    constexpr std::size_t kSamples = 10'000;
    constexpr std::size_t kBins = 100;
    constexpr double kCritical = 134.642;  // chi-square 0.99 quantile, 99 dof
    const FixedPointCodec codec;
    const std::vector<double> update(kSamples, 0.25);
    const std::map<ClientId, FieldElement> seeds{{1, 987654321}};
    const std::vector<ClientId> neighbors{1};
    const auto masked = mask_update(0, update, neighbors, seeds, 1, codec, 1);

    std::vector<double> counts(kBins, 0.0);
    for (const auto v : masked.masked) {
        const auto bin = static_cast<std::size_t>(static_cast<long double>(v) * kBins / codec.modulus);
        counts[std::min(bin, kBins - 1)] += 1.0;
    }
    const double expected = static_cast<double>(kSamples) / kBins;
    double chi2 = 0.0;
    for (const double c : counts) chi2 += (c - expected) * (c - expected) / expected;
    CHECK(chi2 < kCritical);

    CHECK(mask_update(0, update, {}, {}, 1, codec, 1).masked == encode(update, codec));
    const std::vector<ClientId> unknown{2};
    CHECK(code_of([&] { (void)mask_update(0, update, unknown, seeds, 1, codec, 1); }) == ErrorCode::kMissingSeed);
}

TEST_CASE("shamir sharing") {
    const FieldElement p = kMersenne61;
    Rng rng{11};

    const auto single = shamir_share(77, 4, 1, p, rng);
    for (const auto& s : single) CHECK(shamir_reconstruct(std::span{&s, 1}, 1, p) == 77);

    const auto three = shamir_share(5, 3, 2, p, rng);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i + 1; j < 3; ++j) {
            const std::vector<ShamirShare> pair{three[i], three[j]};
            CHECK(shamir_reconstruct(pair, 2, p) == 5);
        }
    }

    // Every subset of size >= t reconstructs, every smaller subset is refused.
    for (std::size_t n = 1; n <= 6; ++n) {
        for (std::size_t t = 1; t <= n; ++t) {
            const FieldElement secret = 1000 + 17 * n + t;
            const auto shares = shamir_share(secret, n, t, p, rng);
            for (unsigned mask = 1; mask < (1u << n); ++mask) {
                std::vector<ShamirShare> subset;
                for (std::size_t i = 0; i < n; ++i) {
                    if (mask & (1u << i)) subset.push_back(shares[i]);
                }
                if (subset.size() >= t) {
                    REQUIRE(shamir_reconstruct(subset, t, p) == secret);
                } else {
                    REQUIRE(code_of([&] { (void)shamir_reconstruct(subset, t, p); }) == ErrorCode::kInsufficientShares);
                }
            }
        }
    }

    const std::vector<ShamirShare> dup{three[0], three[0]};
    CHECK(code_of([&] { (void)shamir_reconstruct(dup, 2, p); }) == ErrorCode::kDuplicateIndex);
    CHECK(code_of([&] { (void)shamir_share(1, 2, 3, p, rng); }) == ErrorCode::kBadConfig);
}

TEST_CASE("neighbor graph") {
    for (const std::size_t n : {1u, 2u, 3u, 5u, 7u, 8u, 10u, 45u}) {
        const auto g = build_neighbor_graph(ids(n));
        const std::size_t k = std::min<std::size_t>(n - 1, 6);
        CHECK(g.degree == k);
        CHECK(g.threshold == k / 2 + 1);
        for (const auto id : g.members) {
            const auto& adj = g.of(id);
            CHECK(adj.size() == k);
            for (const auto j : adj) {
                CHECK(j != id);
                const auto& back = g.of(j);
                CHECK(std::find(back.begin(), back.end(), id) != back.end());
            }
        }
    }
    CHECK(code_of([] { (void)build_neighbor_graph(ids(3)).of(9); }) == ErrorCode::kNotFound);
}

TEST_CASE("secure aggregation sums without dropouts") {
    const FixedPointCodec codec;
    Rng rng{23};
    for (const std::size_t n : {2u, 3u, 5u, 10u, 45u}) {
        const SecureAggregationRound round{ids(n), 99, 4, codec};
        std::vector<MaskedUpdate> delivered;
        std::vector<double> plain(16, 0.0);
        for (ClientId i = 0; i < n; ++i) {
            const auto u = random_vector(16, 5.0, rng);
            for (std::size_t c = 0; c < u.size(); ++c) plain[c] += u[c];
            delivered.push_back(round.mask(i, u, 1));
        }
        const auto sum = round.aggregate(delivered);
        const double tol = static_cast<double>(n) * std::ldexp(1.0, -17);
        for (std::size_t c = 0; c < plain.size(); ++c) REQUIRE(std::abs(sum[c] - plain[c]) <= tol);
    }
}

TEST_CASE("secure aggregation recovers from dropouts") {
    const FixedPointCodec codec;
    Rng rng{29};
    const SecureAggregationRound round{ids(5), 7, 2, codec};
    REQUIRE(round.graph().threshold == 3);

    std::vector<std::vector<double>> updates;
    std::vector<MaskedUpdate> masked;
    for (ClientId i = 0; i < 5; ++i) {
        updates.push_back(random_vector(8, 3.0, rng));
        masked.push_back(round.mask(i, updates.back(), 1));
    }

    SECTION("one dropout") {
        const std::vector<MaskedUpdate> delivered{masked[0], masked[1], masked[3], masked[4]};
        const auto sum = round.aggregate(delivered);
        for (std::size_t c = 0; c < 8; ++c) {
            const double plain = updates[0][c] + updates[1][c] + updates[3][c] + updates[4][c];
            REQUIRE(std::abs(sum[c] - plain) <= 4.0 * std::ldexp(1.0, -17));
        }
    }

    SECTION("without recovery the masks do not cancel") {
        const std::vector<MaskedUpdate> delivered{masked[0], masked[1], masked[3], masked[4]};
        const std::set<ClientId> survivors{0, 1, 3, 4};
        CHECK(code_of([&] { (void)unmask_aggregate(delivered, survivors, {}, round.graph(), codec); }) ==
              ErrorCode::kUnrecoverableDropout);
    }

    SECTION("three dropouts leave too few shares") {
        const std::vector<MaskedUpdate> delivered{masked[0], masked[4]};
        CHECK(code_of([&] { (void)round.aggregate(delivered); }) == ErrorCode::kUnrecoverableDropout);
    }

    SECTION("larger graph, several dropouts") {
        const SecureAggregationRound big{ids(12), 5, 9, codec};
        std::vector<double> plain(8, 0.0);
        std::vector<MaskedUpdate> delivered;
        for (ClientId i = 0; i < 12; ++i) {
            const auto u = random_vector(8, 3.0, rng);
            if (i == 2 || i == 7) continue;
            for (std::size_t c = 0; c < 8; ++c) plain[c] += u[c];
            delivered.push_back(big.mask(i, u, 1));
        }
        const auto sum = big.aggregate(delivered);
        for (std::size_t c = 0; c < 8; ++c) REQUIRE(std::abs(sum[c] - plain[c]) <= 10.0 * std::ldexp(1.0, -17));
    }
}

}  // namespace fedretail::privacy
