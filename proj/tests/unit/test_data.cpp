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

#include <chrono>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <catch_amalgamated.hpp>

#include <fedretail/data.hpp>

namespace fedretail::data {

namespace {

    using namespace std::chrono;

    constexpr std::string_view kHeader = "Store,Date,Weekly_Sales,Holiday_Flag,Temperature,Fuel_Price,CPI,Unemployment\n";

    // Zeller's congruence, independent of <chrono>. Returns 0 = Monday.
    int zeller_weekday(int y, int m, int d) {
        if (m < 3) {
            m += 12;
            y -= 1;
        }
        const int k = y % 100;
        const int j = y / 100;
        const int h = (d + 13 * (m + 1) / 5 + k + k / 4 + j / 4 + 5 * j) % 7;  // 0 = Saturday
        return (h + 5) % 7;
    }

    ErrorCode code_of(auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        FAIL("expected an error");
        return ErrorCode::kIo;
    }

    std::vector<StoreRecord> tiny_store(int store_id, int weeks) {
        std::vector<StoreRecord> out;
        sys_days day = sys_days{2010y / February / 5};
        for (int w = 0; w < weeks; ++w) {
            StoreRecord r;
            r.store_id = store_id;
            r.date = year_month_day{day + days{7 * w}};
            r.weekly_sales = 1000.0 + 10.0 * w + (w % 3) * 7.0;
            r.holiday_flag = w % 5 == 0;
            r.temperature = 40.0 + w;
            r.fuel_price = 2.5 + 0.01 * w;
            r.cpi = 210.0 + 0.1 * w * w;
            r.unemployment = 8.0 - 0.02 * w;
            out.push_back(r);
        }
        return out;
    }

}  // namespace

TEST_CASE("parse_dataset reads the reference row") {
    const std::string csv = std::string{kHeader} + "1,05-02-2010,1643690.90,0,42.31,2.572,211.096,8.106\n";
    const auto rows = parse_dataset(csv);
    REQUIRE(rows.size() == 1);
    const auto& r = rows.front();
    CHECK(r.store_id == 1);
    CHECK(r.date == 2010y / February / 5);
    CHECK(r.weekly_sales == 1643690.90);
    CHECK_FALSE(r.holiday_flag);
    CHECK(r.temperature == 42.31);
    CHECK(r.fuel_price == 2.572);
    CHECK(r.cpi == 211.096);
    CHECK(r.unemployment == 8.106);
}

TEST_CASE("parse_dataset grouping, header order and errors") {
    SECTION("empty data section") { CHECK(parse_dataset(kHeader).empty()); }

    SECTION("columns in any order, rows sorted by store then date") {
        const std::string csv =
            "Date,Store,Holiday_Flag,Weekly_Sales,CPI,Fuel_Price,Temperature,Unemployment\n"
            "12-02-2010,2,1,5.0,1,2,3,4\n"
            "05-02-2010,2,0,6.0,1,2,3,4\n"
            "05-02-2010,1,0,7.0,1,2,3,4\n";
        const auto rows = parse_dataset(csv);
        REQUIRE(rows.size() == 3);
        CHECK(rows[0].store_id == 1);
        CHECK(rows[1].date == 2010y / February / 5);
        CHECK(rows[2].holiday_flag);
        CHECK(rows[2].weekly_sales == 5.0);
        CHECK(rows[2].temperature == 3.0);
    }

    SECTION("N/A temperature names its line") {
        const std::string csv = std::string{kHeader} + "1,05-02-2010,1.0,0,42,2.5,211,8\n" + "1,12-02-2010,1.0,0,N/A,2.5,211,8\n";
        try {
            (void)parse_dataset(csv);
            FAIL("expected MalformedRow");
        } catch (const MalformedRowError& e) {
            CHECK(e.line_no() == 3);
        }
    }

    SECTION("bad date and holiday flag") {
        CHECK(code_of([&] { (void)parse_dataset(std::string{kHeader} + "1,31-02-2010,1,0,1,1,1,1\n"); }) ==
              ErrorCode::kMalformedRow);
        CHECK(code_of([&] { (void)parse_dataset(std::string{kHeader} + "1,05-02-2010,1,2,1,1,1,1\n"); }) ==
              ErrorCode::kMalformedRow);
        CHECK(code_of([&] { (void)parse_dataset(std::string{kHeader} + "1,05-02-2010,1,0,1,1,1\n"); }) ==
              ErrorCode::kMalformedRow);
    }

    SECTION("missing column or no header") {
        CHECK(code_of([] { (void)parse_dataset("Store,Date,Weekly_Sales\n1,05-02-2010,3\n"); }) ==
              ErrorCode::kSchemaMismatch);
        CHECK(code_of([] { (void)parse_dataset(""); }) == ErrorCode::kSchemaMismatch);
    }

    SECTION("write then parse round-trips") {
        const auto records = tiny_store(3, 12);
        const auto text = write_dataset(records);
        const auto back = parse_dataset(text);
        REQUIRE(back.size() == records.size());
        for (std::size_t i = 0; i < back.size(); ++i) {
            CHECK(back[i].date == records[i].date);
            CHECK(back[i].weekly_sales == records[i].weekly_sales);
            CHECK(back[i].cpi == records[i].cpi);
            CHECK(back[i].holiday_flag == records[i].holiday_flag);
        }
        CHECK(write_dataset(back) == text);
    }
}

TEST_CASE("dates") {
    Date d;
    REQUIRE(parse_date("2012-01-01", "%Y-%m-%d", d));
    CHECK(d == 2012y / January / 1);
    CHECK(format_date(d) == "01-01-2012");
    CHECK_FALSE(parse_date("29-02-2011", kDefaultDateFormat, d));
    CHECK(parse_date("29-02-2012", kDefaultDateFormat, d));
    CHECK_FALSE(parse_date("5-2-2010x", kDefaultDateFormat, d));
}

TEST_CASE("expand_date agrees with an independent calendar") {
    const auto a = expand_date(2010y / February / 5);
    CHECK(a.weekday == 4);
    CHECK(a.month == 2);
    CHECK(a.year == 2010);
    CHECK(expand_date(2010y / December / 25).weekday == 5);
    const auto b = expand_date(2012y / January / 1);
    CHECK(b.month == 1);
    CHECK(b.year == 2012);

    // Every day from 2009 through 2013.
    for (sys_days day = sys_days{2009y / January / 1}; day <= sys_days{2013y / December / 31}; day += days{1}) {
        const year_month_day ymd{day};
        const int y = static_cast<int>(ymd.year());
        const int m = static_cast<int>(static_cast<unsigned>(ymd.month()));
        const int dd = static_cast<int>(static_cast<unsigned>(ymd.day()));
        REQUIRE(expand_date(ymd).weekday == zeller_weekday(y, m, dd));
    }
}

TEST_CASE("fit_normalizer") {
    const std::vector<double> v{1, 2, 3};
    const auto n = fit_normalizer(v);
    CHECK(n.mean == 2.0);
    CHECK(n.std == Catch::Approx(0.8165).margin(1e-4));
    CHECK(n.apply(2.0) == 0.0);
    for (const double x : {-7.5, 0.0, 3.25, 1e6}) CHECK(std::abs(n.invert(n.apply(x)) - x) <= 1e-9 * std::max(1.0, std::abs(x)));

    const std::vector<double> flat{5, 5, 5};
    CHECK(code_of([&] { (void)fit_normalizer(flat); }) == ErrorCode::kDegenerateColumn);
    CHECK(code_of([] { (void)fit_normalizer(std::vector<double>{}); }) == ErrorCode::kEmptyInput);
}

TEST_CASE("build_lag_features") {
    const std::vector<double> y{1, 2, 3, 4};

    SECTION("lags 1 and 2") {
        const std::vector<int> lags{2, 1};
        const auto rows = build_lag_features(y, lags);
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].index == 2);
        CHECK(rows[0].lag_values == std::vector<double>{2, 1});
        CHECK(rows[1].index == 3);
        CHECK(rows[1].lag_values == std::vector<double>{3, 2});
    }

    SECTION("no lags leaves the series as is") {
        const auto rows = build_lag_features(y, std::vector<int>{});
        REQUIRE(rows.size() == 4);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(rows[i].index == i);
            CHECK(rows[i].lag_values.empty());
        }
    }

    SECTION("too short") {
        const std::vector<double> three{1, 2, 3};
        CHECK(code_of([&] { (void)build_lag_features(three, std::vector<int>{5}); }) == ErrorCode::kInsufficientHistory);
        CHECK(code_of([&] { (void)build_lag_features(three, std::vector<int>{3}); }) == ErrorCode::kInsufficientHistory);
    }

    SECTION("non-positive lag") {
        CHECK(code_of([&] { (void)build_lag_features(y, std::vector<int>{0}); }) == ErrorCode::kBadConfig);
    }
}

TEST_CASE("split_train_test") {
    std::vector<int> ten(10);
    std::iota(ten.begin(), ten.end(), 0);
    const auto [train, test] = split_train_test<int>(ten, 0.7);
    CHECK(train.size() == 7);
    CHECK(test.size() == 3);
    CHECK(test.front() == 7);

    CHECK(split_point(143, 0.3) == 42);
    CHECK(code_of([] { (void)split_point(1, 0.7); }) == ErrorCode::kEmptySplit);
    CHECK(code_of([] { (void)split_point(10, 1.0); }) == ErrorCode::kBadConfig);
}

TEST_CASE("partition_by_store") {
    const auto records = generate_synthetic({});
    PipelineConfig config;

    SECTION("one dataset per store with default splits") {
        const auto clients = partition_by_store(records, config);
        REQUIRE(clients.size() == 45);
        const std::size_t rows_per_store = 143 - 4;
        for (const auto& c : clients) {
            CHECK(c.split_ratio == (c.store_id % 2 == 0 ? 0.7 : 0.3));
            CHECK(c.train.size() == split_point(rows_per_store, c.split_ratio));
            CHECK(c.train.size() + c.test.size() == rows_per_store);
            CHECK(sys_days{c.train.back().date} < sys_days{c.test.front().date});
            CHECK(c.test_sales.size() == c.test.size());
        }
    }

    SECTION("feature dimension is constant and follows the layout") {
        const auto stores = prepare_stores(records, config);
        const auto years = year_vocabulary(stores);
        CHECK(years == std::vector<int>{2010, 2011, 2012});
        const auto clients = partition_by_store(stores, years);
        const std::size_t expected = 5 + 7 + 12 + years.size() + config.lags.size();
        for (const auto& c : clients) {
            CHECK(c.encoder.dimension() == expected);
            for (const auto& r : c.train) REQUIRE(r.x.size() == expected);
            for (const auto& r : c.test) REQUIRE(r.x.size() == expected);
        }
    }

    SECTION("lag values match the raw earlier weeks") {
        const auto stores = prepare_stores(records, config);
        for (const auto& s : stores) {
            std::vector<const StoreRecord*> raw;
            for (const auto& r : records) {
                if (r.store_id == s.store_id) raw.push_back(&r);
            }
            auto check = [&](const PreparedRow& row) {
                const auto it = std::find_if(raw.begin(), raw.end(), [&](const StoreRecord* r) { return r->date == row.date; });
                REQUIRE(it != raw.end());
                const auto pos = static_cast<std::size_t>(it - raw.begin());
                for (std::size_t l = 0; l < config.lags.size(); ++l) {
                    REQUIRE(row.lag_sales[l] == raw[pos - static_cast<std::size_t>(config.lags[l])]->weekly_sales);
                }
            };
            for (const auto& row : s.train) check(row);
            for (const auto& row : s.test) check(row);
        }
    }

    SECTION("normalizers see training rows only") {
        const auto clients = partition_by_store(records, config);
        const auto stores = prepare_stores(records, config);
        for (std::size_t i = 0; i < stores.size(); ++i) {
            std::vector<double> train_sales;
            for (const auto& r : stores[i].train) train_sales.push_back(r.sales);
            const auto n = fit_normalizer(train_sales);
            CHECK(clients[i].encoder.target.mean == n.mean);
            CHECK(clients[i].encoder.target.std == n.std);
            for (std::size_t t = 0; t < clients[i].test.size(); ++t) {
                CHECK(clients[i].test[t].y == n.apply(clients[i].test_sales[t]));
            }
        }
    }

    SECTION("pipeline is deterministic") {
        const auto a = partition_by_store(records, config);
        const auto b = partition_by_store(records, config);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            for (std::size_t t = 0; t < a[i].train.size(); ++t) {
                REQUIRE(a[i].train[t].x == b[i].train[t].x);
                REQUIRE(a[i].train[t].y == b[i].train[t].y);
            }
        }
    }

    SECTION("a single store matches split_train_test") {
        const auto one = tiny_store(7, 20);
        const auto clients = partition_by_store(one, config);
        REQUIRE(clients.size() == 1);
        CHECK(clients[0].split_ratio == 0.3);
        CHECK(clients[0].train.size() == split_point(16, 0.3));
        CHECK(clients[0].test.size() == 16 - split_point(16, 0.3));
    }

    SECTION("short store surfaces its id") {
        auto mixed = tiny_store(2, 20);
        const auto short_store = tiny_store(9, 3);
        mixed.insert(mixed.end(), short_store.begin(), short_store.end());
        try {
            (void)partition_by_store(mixed, config);
            FAIL("expected InsufficientHistory");
        } catch (const InsufficientHistoryError& e) {
            CHECK(e.store_id() == 9);
        }
    }

    SECTION("split overrides") {
        config.fraction_overrides[3] = 0.5;
        CHECK(config.fraction_for(3) == 0.5);
        CHECK(config.fraction_for(4) == 0.7);
        CHECK(config.fraction_for(5) == 0.3);
    }
}

TEST_CASE("pool_stores shares one encoder fit on pooled training rows") {
    const auto records = generate_synthetic({.stores = 6, .weeks = 60, .seed = 3});
    PipelineConfig config;
    const auto stores = prepare_stores(records, config);
    const auto years = year_vocabulary(stores);
    const auto pooled = pool_stores(stores, years);

    std::vector<double> train_sales;
    std::size_t train_rows = 0;
    for (const auto& s : stores) {
        for (const auto& r : s.train) train_sales.push_back(r.sales);
        train_rows += s.train.size();
    }
    CHECK(pooled.train.size() == train_rows);
    const auto n = fit_normalizer(train_sales);
    CHECK(pooled.encoder.target.mean == Catch::Approx(n.mean).epsilon(1e-12));
    CHECK(pooled.encoder.target.std == Catch::Approx(n.std).epsilon(1e-12));
    REQUIRE(pooled.stores.size() == stores.size());
    for (const auto& c : pooled.stores) {
        CHECK(c.encoder.target.mean == pooled.encoder.target.mean);
        CHECK(c.encoder.dimension() == pooled.encoder.dimension());
    }
}

TEST_CASE("synthetic data has the reference shape") {
    const auto records = generate_synthetic({});
    REQUIRE(records.size() == 45u * 143u);
    CHECK(records.front().date == 2010y / February / 5);
    CHECK(records[142].date == 2012y / October / 26);
    for (const auto& r : records) {
        REQUIRE(r.weekly_sales > 0.0);
        REQUIRE(expand_date(r.date).weekday == 4);
    }
    CHECK(write_dataset(generate_synthetic({})) == write_dataset(records));
    CHECK(write_dataset(generate_synthetic({.seed = 2})) != write_dataset(records));
}

}  // namespace fedretail::data
