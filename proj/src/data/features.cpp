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

#include <algorithm>
#include <cmath>

#include <fedretail/data.hpp>

namespace fedretail::data {

Normalizer fit_normalizer(std::span<const double> values) {
    if (values.empty()) throw Error{ErrorCode::kEmptyInput, "cannot fit a normalizer on no values"};
    double sum = 0.0;
    for (const double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (const double v : values) ss += (v - mean) * (v - mean);
    const double std = std::sqrt(ss / static_cast<double>(values.size()));
    if (!(std > 0.0)) throw Error{ErrorCode::kDegenerateColumn, "column has zero variance"};
    return Normalizer{mean, std};
}

DateParts expand_date(const Date& date) {
    const std::chrono::weekday wd{std::chrono::sys_days{date}};
    return DateParts{
        static_cast<int>(wd.iso_encoding()) - 1,
        static_cast<unsigned>(date.month()),
        static_cast<int>(date.year()),
    };
}

std::vector<LagRow> build_lag_features(std::span<const double> targets, std::span<const int> lags) {
    std::vector<int> sorted(lags.begin(), lags.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (!sorted.empty() && sorted.front() < 1) {
        throw Error{ErrorCode::kBadConfig, "lags must be positive"};
    }
    const std::size_t max_lag = sorted.empty() ? 0 : static_cast<std::size_t>(sorted.back());
    if (!sorted.empty() && targets.size() <= max_lag) {
        throw InsufficientHistoryError{0, targets.size(), max_lag};
    }

    std::vector<LagRow> rows;
    rows.reserve(targets.size() - max_lag);
    for (std::size_t t = max_lag; t < targets.size(); ++t) {
        LagRow row{t, {}};
        row.lag_values.reserve(sorted.size());
        for (const int lag : sorted) row.lag_values.push_back(targets[t - static_cast<std::size_t>(lag)]);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::size_t split_point(std::size_t n, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw Error{ErrorCode::kBadConfig, "train fraction must lie in (0, 1)"};
    }
    const auto cut = static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_fraction));
    if (cut == 0 || cut == n) {
        throw Error{ErrorCode::kEmptySplit, std::to_string(n) + " rows cannot be split at " + std::to_string(train_fraction)};
    }
    return cut;
}

std::size_t FeatureEncoder::dimension() const { return kNumericFeatureCount + 7 + 12 + years.size() + lag_count; }

FeatureRow FeatureEncoder::encode(const PreparedRow& row, int store_id) const {
    FeatureRow out;
    out.store_id = store_id;
    out.date = row.date;
    out.y = target.apply(row.sales);
    out.x.assign(dimension(), 0.0);

    std::size_t at = 0;
    out.x[at++] = row.holiday ? 1.0 : 0.0;
    for (std::size_t c = 0; c < covariates.size(); ++c) out.x[at++] = covariates[c].apply(row.covariates[c]);

    const DateParts parts = expand_date(row.date);
    out.x[at + static_cast<std::size_t>(parts.weekday)] = 1.0;
    at += 7;
    out.x[at + parts.month - 1] = 1.0;
    at += 12;
    // unseen years stay all-zero
    if (const auto it = std::find(years.begin(), years.end(), parts.year); it != years.end()) {
        out.x[at + static_cast<std::size_t>(it - years.begin())] = 1.0;
    }
    at += years.size();

    for (std::size_t l = 0; l < lag_count; ++l) out.x[at++] = target.apply(row.lag_sales[l]);
    return out;
}

FeatureEncoder fit_encoder(std::span<const PreparedRow* const> train_rows, std::vector<int> years,
                           std::size_t lag_count) {
    std::vector<double> column(train_rows.size());
    auto fit_column = [&](auto&& pick) {
        for (std::size_t i = 0; i < train_rows.size(); ++i) column[i] = pick(*train_rows[i]);
        return fit_normalizer(column);
    };

    FeatureEncoder enc;
    enc.target = fit_column([](const PreparedRow& r) { return r.sales; });
    for (std::size_t c = 0; c < enc.covariates.size(); ++c) {
        enc.covariates[c] = fit_column([c](const PreparedRow& r) { return r.covariates[c]; });
    }
    enc.years = std::move(years);
    enc.lag_count = lag_count;
    return enc;
}

}  // namespace fedretail::data
