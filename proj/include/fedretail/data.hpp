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

#include <array>
#include <chrono>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <fedretail/errors.hpp>

namespace fedretail::data {

using Date = std::chrono::year_month_day;

// Day-first, matching the reference sales export.
inline constexpr std::string_view kDefaultDateFormat = "%d-%m-%Y";

inline constexpr std::array<std::string_view, 8> kSchemaColumns = {
    "Store", "Date", "Weekly_Sales", "Holiday_Flag", "Temperature", "Fuel_Price", "CPI", "Unemployment",
};

struct StoreRecord {
    int store_id{0};
    Date date{};
    double weekly_sales{0.0};
    bool holiday_flag{false};
    double temperature{0.0};
    double fuel_price{0.0};
    double cpi{0.0};
    double unemployment{0.0};
};

// Accepts %d, %m and %Y plus literal separators. Returns false on any
// mismatch or an invalid calendar date.
bool parse_date(std::string_view text, std::string_view format, Date& out);
std::string format_date(const Date& date, std::string_view format = kDefaultDateFormat);

// Rows are returned grouped and sorted by (store_id, date). Column order in
// the header is free; names are matched exactly.
std::vector<StoreRecord> parse_dataset(std::string_view csv_text, std::string_view date_format = kDefaultDateFormat);
std::string write_dataset(std::span<const StoreRecord> records, std::string_view date_format = kDefaultDateFormat);

// z-score with the population standard deviation.
struct Normalizer {
    double mean{0.0};
    double std{1.0};

    [[nodiscard]] double apply(double v) const { return (v - mean) / std; }
    [[nodiscard]] double invert(double z) const { return z * std + mean; }
};

Normalizer fit_normalizer(std::span<const double> values);

struct DateParts {
    int weekday{0};  // 0 = Monday
    unsigned month{1};
    int year{0};
};

DateParts expand_date(const Date& date);

struct LagRow {
    std::size_t index{0};             // position in the source series
    std::vector<double> lag_values;  // one per lag, ascending lag order
};

// Lags are treated as a set: duplicates collapse and values come back in
// ascending lag order. The first max(lags) positions are dropped.
std::vector<LagRow> build_lag_features(std::span<const double> targets, std::span<const int> lags);

// Index of the first test row: floor(n * train_fraction).
std::size_t split_point(std::size_t n, double train_fraction);

template <typename T>
std::pair<std::vector<T>, std::vector<T>> split_train_test(std::span<const T> rows, double train_fraction) {
    const std::size_t cut = split_point(rows.size(), train_fraction);
    return {std::vector<T>(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(cut)),
            std::vector<T>(rows.begin() + static_cast<std::ptrdiff_t>(cut), rows.end())};
}

struct FeatureRow {
    std::vector<double> x;
    double y{0.0};
    int store_id{0};
    Date date{};
};

struct PipelineConfig {
    std::string date_format{kDefaultDateFormat};
    std::vector<int> lags{1, 2, 3, 4};
    double even_store_fraction{0.7};
    double odd_store_fraction{0.3};
    std::map<int, double> fraction_overrides;

    [[nodiscard]] double fraction_for(int store_id) const;
};

// One week with lags resolved, still in raw units.
struct PreparedRow {
    Date date{};
    double sales{0.0};
    bool holiday{false};
    std::array<double, 4> covariates{};  // temperature, fuel price, CPI, unemployment
    std::vector<double> lag_sales;
};

struct PreparedStore {
    int store_id{0};
    double split_ratio{0.0};
    std::vector<PreparedRow> train;
    std::vector<PreparedRow> test;
};

inline constexpr std::size_t kNumericFeatureCount = 5;  // holiday flag + four covariates

// Maps prepared rows onto the model's input layout:
//   [holiday, 4 z-scored covariates, weekday one-hot(7), month one-hot(12),
//    year one-hot(|years|), z-scored lags]
struct FeatureEncoder {
    Normalizer target;
    std::array<Normalizer, 4> covariates;
    std::vector<int> years;
    std::size_t lag_count{0};

    [[nodiscard]] std::size_t dimension() const;
    [[nodiscard]] FeatureRow encode(const PreparedRow& row, int store_id) const;
    [[nodiscard]] double to_sales(double normalized) const { return target.invert(normalized); }
};

// Fits every normalizer on the given training rows only.
FeatureEncoder fit_encoder(std::span<const PreparedRow* const> train_rows, std::vector<int> years,
                           std::size_t lag_count);

struct ClientDataset {
    int store_id{0};
    double split_ratio{0.0};
    std::vector<FeatureRow> train;
    std::vector<FeatureRow> test;
    std::vector<double> test_sales;  // raw targets of the test rows
    FeatureEncoder encoder;
};

std::vector<PreparedStore> prepare_stores(std::span<const StoreRecord> records, const PipelineConfig& config);

// Sorted set of years that appear in any store's training rows. Shared by
// all clients so the feature dimension is constant within an experiment.
std::vector<int> year_vocabulary(std::span<const PreparedStore> stores);

std::vector<ClientDataset> partition_by_store(std::span<const PreparedStore> stores, const std::vector<int>& years);
std::vector<ClientDataset> partition_by_store(std::span<const StoreRecord> records, const PipelineConfig& config);

// Centralized view: one encoder fit on the pooled training rows, applied to
// every store. `train` is the concatenation of the stores' train portions.
struct PooledDataset {
    FeatureEncoder encoder;
    std::vector<FeatureRow> train;
    std::vector<ClientDataset> stores;
};

PooledDataset pool_stores(std::span<const PreparedStore> stores, const std::vector<int>& years);

struct SyntheticSpec {
    int stores{45};
    int weeks{143};
    std::uint64_t seed{1};
};

// Walmart-shaped weekly sales: store level, trend, shared yearly seasonality,
// holiday spikes and multiplicative noise, starting 2010-02-05.
std::vector<StoreRecord> generate_synthetic(const SyntheticSpec& spec);

}  // namespace fedretail::data
