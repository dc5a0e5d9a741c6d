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
#include <cstring>
#include <vector>

#include <catch_amalgamated.hpp>

#include <fedretail/model.hpp>

namespace fedretail::model {

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

    std::vector<data::FeatureRow> random_rows(std::size_t n, std::size_t width, std::uint64_t seed) {
        Rng rng{seed};
        std::normal_distribution<double> g{0.0, 1.0};
        std::vector<data::FeatureRow> rows(n);
        for (auto& r : rows) {
            r.x.resize(width);
            for (auto& v : r.x) v = g(rng);
            r.y = g(rng);
        }
        return rows;
    }

    // The objective differentiated by backward(), written out independently.
    double objective(const MLPParams& p, std::span<const data::FeatureRow> rows, const HyperParams& h) {
        double loss = 0.0;
        for (const auto& r : rows) {
            const double e = forward(p, r.x, h.leaky_slope) - r.y;
            loss += e * e;
        }
        loss /= static_cast<double>(rows.size());
        double w2 = 0.0;
        for (std::size_t l = 0; l < p.layer_count(); ++l) {
            for (const double w : p.weights(l)) w2 += w * w;
        }
        return loss + 0.5 * h.weight_decay * w2;
    }

    HyperParams no_dropout() {
        HyperParams h;
        h.dropout_p = 0.0;
        return h;
    }

}  // namespace

TEST_CASE("init_params") {
    const std::vector<std::size_t> arch{6, 5, 3, 1};
    const auto a = init_params(arch, 42);
    const auto b = init_params(arch, 42);
    CHECK(flatten(a) == flatten(b));
    CHECK(flatten(a) != flatten(init_params(arch, 43)));
    CHECK(a.size() == parameter_count(arch));

    for (std::size_t l = 0; l < a.layer_count(); ++l) {
        const double bound = std::sqrt(6.0 / static_cast<double>(arch[l] + arch[l + 1]));
        for (const double w : a.weights(l)) {
            CHECK(w >= -bound);
            CHECK(w <= bound);
        }
        for (const double bias : a.biases(l)) CHECK(bias == 0.0);
    }

    CHECK(code_of([] { (void)init_params({4, 0, 1}, 1); }) == ErrorCode::kBadArchitecture);
    CHECK(code_of([] { (void)init_params({4}, 1); }) == ErrorCode::kBadArchitecture);
    CHECK(code_of([] { (void)init_params({4, 2}, 1); }) == ErrorCode::kBadArchitecture);
}

TEST_CASE("forward") {
    CHECK(leaky_relu(-2.0, 0.01) == -0.02);
    CHECK(leaky_relu(3.0, 0.01) == 3.0);

    const MLPParams zero{{3, 4, 1}, std::vector<double>(parameter_count(std::vector<std::size_t>{3, 4, 1}), 0.0)};
    const std::vector<double> x{1.5, -2.0, 7.0};
    CHECK(forward(zero, x) == 0.0);

    // 1 -> 1 -> 1 by hand: hidden = leaky(2*x + 1), out = -3*h + 0.5
    const MLPParams tiny{{1, 1, 1}, {2.0, 1.0, -3.0, 0.5}};
    CHECK(forward(tiny, std::vector<double>{1.0}) == -3.0 * 3.0 + 0.5);
    CHECK(forward(tiny, std::vector<double>{-1.0}, 0.1) == Catch::Approx(-3.0 * -0.1 + 0.5).epsilon(1e-15));

    const auto p = init_params({3, 8, 1}, 5);
    Rng rng{9};
    const auto mask = sample_dropout_mask(p, 0.0, rng);
    CHECK(forward(p, x, 0.01, &mask) == forward(p, x, 0.01));

    const auto half = sample_dropout_mask(p, 0.5, rng);
    REQUIRE(half.hidden.size() == 1);
    for (const double m : half.hidden[0]) CHECK((m == 0.0 || m == 2.0));

    CHECK(code_of([&] { (void)forward(p, std::vector<double>{1.0}); }) == ErrorCode::kDimensionMismatch);
}

TEST_CASE("mse_loss") {
    CHECK(mse_loss(std::vector<double>{1, 2}, std::vector<double>{1, 2}) == 0.0);
    CHECK(mse_loss(std::vector<double>{3}, std::vector<double>{1}) == 4.0);
    const std::vector<double> a{0.5, -1.0, 2.0};
    const std::vector<double> b{1.5, 1.0, -2.0};
    CHECK(mse_loss(a, b) == mse_loss(b, a));
    CHECK(code_of([] { (void)mse_loss(std::vector<double>{}, std::vector<double>{}); }) == ErrorCode::kEmptyInput);
}

TEST_CASE("backward matches central finite differences") {
    constexpr double kStep = 1e-5;
    constexpr double kRelTol = 1e-4;
    constexpr double kFloor = 1e-7;  // coordinates below this are compared absolutely

    for (const std::uint64_t seed : {1u, 2u, 3u, 4u}) {
        const std::vector<std::size_t> arch{4, 5, 3, 1};
        const auto p = init_params(arch, seed);
        auto rows = random_rows(3, 4, seed + 100);
        auto h = no_dropout();
        h.weight_decay = 0.05;
        Rng rng{seed};
        const auto g = backward(p, rows, h, rng);
        CHECK(g.sample_count == 3);
        REQUIRE(g.values.size() == p.size());

        for (std::size_t i = 0; i < p.size(); ++i) {
            auto up = p;
            auto down = p;
            up.flat()[i] += kStep;
            down.flat()[i] -= kStep;
            const double numeric = (objective(up, rows, h) - objective(down, rows, h)) / (2.0 * kStep);
            const double scale = std::max({std::abs(numeric), std::abs(g.values[i]), kFloor});
            INFO("seed " << seed << " coordinate " << i);
            CHECK(std::abs(numeric - g.values[i]) / scale <= kRelTol);
        }
    }
}

TEST_CASE("backward edge cases") {
    const std::vector<std::size_t> arch{3, 4, 1};
    const MLPParams zero{arch, std::vector<double>(parameter_count(arch), 0.0)};
    auto rows = random_rows(5, 3, 7);
    for (auto& r : rows) r.y = 0.0;
    Rng rng{1};
    for (const double v : backward(zero, rows, no_dropout(), rng).values) CHECK(v == 0.0);

    const auto p = init_params(arch, 11);
    auto h = no_dropout();
    h.weight_decay = 0.0;
    const auto base = backward(p, rows, h, rng).values;
    h.weight_decay = 0.1;
    const auto one = backward(p, rows, h, rng).values;
    h.weight_decay = 0.2;
    const auto two = backward(p, rows, h, rng).values;
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(two[i] - base[i] == Catch::Approx(2.0 * (one[i] - base[i])).margin(1e-12));
    }

    CHECK(code_of([&] { (void)backward(p, std::span<const data::FeatureRow>{}, h, rng); }) == ErrorCode::kEmptyInput);
}

TEST_CASE("sgd_step") {
    const MLPParams one{{1, 1}, {1.0, 0.0}};
    const auto stepped = sgd_step(one, std::vector<double>{2.0, 0.0}, 0.5);
    CHECK(stepped.flat()[0] == 0.0);
    CHECK(one.flat()[0] == 1.0);

    const auto p = init_params({3, 4, 1}, 3);
    const std::vector<double> g(p.size(), 0.25);
    CHECK(sgd_step(p, std::vector<double>(p.size(), 0.0), 0.1) == p);
    CHECK(sgd_step(p, g, 0.0) == p);
    CHECK(code_of([&] { (void)sgd_step(p, std::vector<double>{1.0}, 0.1); }) == ErrorCode::kDimensionMismatch);
}

TEST_CASE("flatten and serialize") {
    const std::vector<std::size_t> arch{2, 2, 1};
    CHECK(parameter_count(arch) == 9);
    const auto p = init_params(arch, 8);
    const auto flat = flatten(p);
    CHECK(flat.size() == 9);
    CHECK(unflatten(flat, arch) == p);
    CHECK(code_of([&] { (void)unflatten(std::vector<double>(8), arch); }) == ErrorCode::kLengthMismatch);

    // Layer-major, weights row-major, then biases.
    const MLPParams q{arch, {1, 2, 3, 4, 5, 6, 7, 8, 9}};
    CHECK(std::vector<double>(q.weights(0).begin(), q.weights(0).end()) == std::vector<double>{1, 2, 3, 4});
    CHECK(std::vector<double>(q.biases(0).begin(), q.biases(0).end()) == std::vector<double>{5, 6});
    CHECK(std::vector<double>(q.weights(1).begin(), q.weights(1).end()) == std::vector<double>{7, 8});
    CHECK(q.biases(1)[0] == 9.0);

    const auto bytes = serialize_model(q);
    REQUIRE(bytes.size() == 4 + 3 * 4 + 9 * 8);
    CHECK(bytes[0] == 3);
    CHECK(bytes[4] == 2);
    CHECK(bytes[8] == 2);
    CHECK(bytes[12] == 1);
    double first = 0.0;
    std::memcpy(&first, bytes.data() + 16, 8);
    CHECK(first == 1.0);
    CHECK(deserialize_model(bytes) == q);

    auto truncated = bytes;
    truncated.pop_back();
    CHECK(code_of([&] { (void)deserialize_model(truncated); }) == ErrorCode::kLengthMismatch);
}

TEST_CASE("training") {
    const std::vector<std::size_t> arch{4, 6, 1};
    const auto rows = random_rows(24, 4, 21);

    SECTION("deterministic") {
        HyperParams h;
        Rng a{5};
        Rng b{5};
        CHECK(train_epochs(init_params(arch, 1), rows, h, 3, a) == train_epochs(init_params(arch, 1), rows, h, 3, b));
    }

    SECTION("one full batch epoch equals one gradient step") {
        auto h = no_dropout();
        h.weight_decay = 0.0;
        h.batch_size = rows.size();
        const auto p = init_params(arch, 2);
        Rng rng{3};
        const auto trained = train_epochs(p, rows, h, 1, rng);
        Rng unused{4};
        const auto stepped = sgd_step(p, backward(p, rows, h, unused).values, h.learning_rate);
        for (std::size_t i = 0; i < p.size(); ++i) CHECK(trained.flat()[i] == Catch::Approx(stepped.flat()[i]).margin(1e-12));
    }

    SECTION("small steps descend on a fixed batch") {
        auto h = no_dropout();
        auto p = init_params(arch, 6);
        double previous = objective(p, rows, h);
        Rng rng{1};
        for (int step = 0; step < 10; ++step) {
            p = sgd_step(p, backward(p, rows, h, rng).values, 1e-4);
            const double now = objective(p, rows, h);
            CHECK(now <= previous);
            previous = now;
        }
    }

    SECTION("training lowers the loss") {
        HyperParams h;
        h.learning_rate = 0.05;
        Rng rng{2};
        const auto p = init_params(arch, 3);
        CHECK(evaluate_mse(train_epochs(p, rows, h, 50, rng), rows) < evaluate_mse(p, rows));
    }

    SECTION("no rows") {
        Rng rng{1};
        CHECK(code_of([&] { (void)train_epochs(init_params(arch, 1), {}, HyperParams{}, 1, rng); }) ==
              ErrorCode::kEmptyClientData);
    }
}

}  // namespace fedretail::model
