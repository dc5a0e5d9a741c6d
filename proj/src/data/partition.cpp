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
#include <set>

#include <fedretail/data.hpp>

namespace fedretail::data {

double PipelineConfig::fraction_for(int store_id) const {
    if (const auto it = fraction_overrides.find(store_id); it != fraction_overrides.end()) return it->second;
    return store_id % 2 == 0 ? even_store_fraction : odd_store_fraction;
}

std::vector<PreparedStore> prepare_stores(std::span<const StoreRecord> records, const PipelineConfig& config) {
    std::vector<PreparedStore> stores;
    std::size_t begin = 0;
    while (begin < records.size()) {
        std::size_t end = begin;
        while (end < records.size() && records[end].store_id == records[begin].store_id) ++end;
        const auto series = records.subspan(begin, end - begin);
        const int store_id = series.front().store_id;

        std::vector<double> sales(series.size());
        std::transform(series.begin(), series.end(), sales.begin(), [](const StoreRecord& r) { return r.weekly_sales; });

        std::vector<LagRow> lagged;
        try {
            lagged = build_lag_features(sales, config.lags);
        } catch (const InsufficientHistoryError&) {
            const auto max_lag = static_cast<std::size_t>(*std::max_element(config.lags.begin(), config.lags.end()));
            throw InsufficientHistoryError{store_id, series.size(), max_lag};
        }

        std::vector<PreparedRow> rows;
        rows.reserve(lagged.size());
        for (auto& lag : lagged) {
            const StoreRecord& r = series[lag.index];
            rows.push_back(PreparedRow{r.date, r.weekly_sales, r.holiday_flag,
                                       {r.temperature, r.fuel_price, r.cpi, r.unemployment}, std::move(lag.lag_values)});
        }

        PreparedStore store;
        store.store_id = store_id;
        store.split_ratio = config.fraction_for(store_id);
        std::size_t cut = 0;
        try {
            cut = split_point(rows.size(), store.split_ratio);
        } catch (const Error& e) {
            throw Error{e.code(), "store " + std::to_string(store_id) + ": " + e.what()};
        }
        store.train.assign(std::make_move_iterator(rows.begin()),
                           std::make_move_iterator(rows.begin() + static_cast<std::ptrdiff_t>(cut)));
        store.test.assign(std::make_move_iterator(rows.begin() + static_cast<std::ptrdiff_t>(cut)),
                          std::make_move_iterator(rows.end()));
        stores.push_back(std::move(store));
        begin = end;
    }
    return stores;
}

std::vector<int> year_vocabulary(std::span<const PreparedStore> stores) {
    std::set<int> years;
    for (const auto& s : stores) {
        for (const auto& r : s.train) years.insert(static_cast<int>(r.date.year()));
    }
    return {years.begin(), years.end()};
}

namespace {

    std::size_t lag_count_of(std::span<const PreparedStore> stores) {
        for (const auto& s : stores) {
            if (!s.train.empty()) return s.train.front().lag_sales.size();
        }
        return 0;
    }

    ClientDataset encode_store(const PreparedStore& store, const FeatureEncoder& encoder) {
        ClientDataset ds;
        ds.store_id = store.store_id;
        ds.split_ratio = store.split_ratio;
        ds.encoder = encoder;
        ds.train.reserve(store.train.size());
        for (const auto& r : store.train) ds.train.push_back(encoder.encode(r, store.store_id));
        ds.test.reserve(store.test.size());
        for (const auto& r : store.test) {
            ds.test.push_back(encoder.encode(r, store.store_id));
            ds.test_sales.push_back(r.sales);
        }
        return ds;
    }

}  // namespace

std::vector<ClientDataset> partition_by_store(std::span<const PreparedStore> stores, const std::vector<int>& years) {
    const std::size_t lag_count = lag_count_of(stores);
    std::vector<ClientDataset> clients;
    clients.reserve(stores.size());
    for (const auto& store : stores) {
        std::vector<const PreparedRow*> train;
        for (const auto& r : store.train) train.push_back(&r);
        FeatureEncoder encoder;
        try {
            encoder = fit_encoder(train, years, lag_count);
        } catch (const Error& e) {
            throw Error{e.code(), "store " + std::to_string(store.store_id) + ": " + e.what()};
        }
        clients.push_back(encode_store(store, encoder));
    }
    return clients;
}

std::vector<ClientDataset> partition_by_store(std::span<const StoreRecord> records, const PipelineConfig& config) {
    const auto stores = prepare_stores(records, config);
    return partition_by_store(stores, year_vocabulary(stores));
}

PooledDataset pool_stores(std::span<const PreparedStore> stores, const std::vector<int>& years) {
    std::vector<const PreparedRow*> train;
    for (const auto& s : stores) {
        for (const auto& r : s.train) train.push_back(&r);
    }
    PooledDataset pooled;
    pooled.encoder = fit_encoder(train, years, lag_count_of(stores));
    for (const auto& s : stores) {
        pooled.stores.push_back(encode_store(s, pooled.encoder));
        const auto& encoded = pooled.stores.back().train;
        pooled.train.insert(pooled.train.end(), encoded.begin(), encoded.end());
    }
    return pooled;
}

}  // namespace fedretail::data
