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
#include <fstream>
#include <iterator>

#include <fedretail/orchestrator.hpp>

#include "internal.hpp"

namespace fedretail::orchestrator {

double compute_oe(std::span<const double> preds, std::span<const double> actuals, OeMode mode) {
    if (preds.empty() || actuals.empty()) throw Error{ErrorCode::kEmptyInput, "OE needs at least one forecast"};
    if (preds.size() != actuals.size()) throw Error{ErrorCode::kLengthMismatch, "forecasts and actuals differ in length"};
    double excess = 0.0;
    double demand = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        excess += std::max(0.0, preds[i] - actuals[i]);
        demand += actuals[i];
    }
    if (mode == OeMode::kAbsolute) return excess / static_cast<double>(preds.size());
    if (!(demand > 0.0)) throw Error{ErrorCode::kZeroDemand, "total demand is zero"};
    return excess / demand;
}

double waste_reduction(double oe_baseline, double oe_treatment) {
    if (!(oe_baseline > 0.0)) throw Error{ErrorCode::kZeroBaseline, "baseline OE must be positive"};
    return (oe_baseline - oe_treatment) / oe_baseline;
}

StoreResult evaluate_store(const model::MLPParams& params, const data::ClientDataset& evaluated,
                           const data::ClientDataset& local, const ExperimentConfig& config) {
    if (evaluated.test.size() != local.test.size()) {
        throw Error{ErrorCode::kLengthMismatch, "evaluated and local test sets differ"};
    }
    const auto preds = model::predict(params, evaluated.test, config.hyper.leaky_slope);
    std::vector<double> sales(preds.size());
    double sq = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        sales[i] = evaluated.encoder.to_sales(preds[i]);
        const double local_pred = &evaluated == &local ? preds[i] : local.encoder.target.apply(sales[i]);
        const double err = local_pred - local.test[i].y;
        sq += err * err;
    }
    if (preds.empty()) throw Error{ErrorCode::kEmptySplit, "store " + std::to_string(local.store_id) + " has no test rows"};
    return StoreResult{local.store_id, local.split_ratio, sq / static_cast<double>(preds.size()),
                       compute_oe(sales, evaluated.test_sales, config.oe_mode)};
}

std::vector<data::StoreRecord> load_records(const ExperimentConfig& config) {
    if (config.data_path.empty()) return data::generate_synthetic(config.synthetic);
    std::ifstream in{config.data_path, std::ios::binary};
    if (!in) throw Error{ErrorCode::kIo, "cannot read " + config.data_path};
    const std::string text{std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
    return data::parse_dataset(text, config.pipeline.date_format);
}

Partitions make_partitions(std::span<const data::StoreRecord> records, const ExperimentConfig& config) {
    const auto stores = data::prepare_stores(records, config.pipeline);
    const auto years = data::year_vocabulary(stores);
    Partitions parts;
    parts.local = data::partition_by_store(stores, years);
    parts.pooled = data::pool_stores(stores, years);
    return parts;
}

namespace {

    void summarize(ModeResult& r) {
        double mse = 0.0;
        double oe = 0.0;
        for (const auto& s : r.stores) {
            mse += s.mse;
            oe += s.oe;
        }
        const auto n = static_cast<double>(r.stores.size());
        r.mean_mse = r.stores.empty() ? 0.0 : mse / n;
        r.mean_oe = r.stores.empty() ? 0.0 : oe / n;
    }

}  // namespace

ModeResult run_standalone(const ExperimentConfig& config, const Partitions& parts) {
    const auto models = run_standalone_models(config, parts.local);
    ModeResult r{Mode::kStandalone, {}, 0.0, 0.0, std::nullopt, {}};
    for (std::size_t i = 0; i < models.size(); ++i) {
        r.stores.push_back(evaluate_store(models[i], parts.local[i], parts.local[i], config));
    }
    summarize(r);
    return r;
}

ModeResult run_centralized(const ExperimentConfig& config, const Partitions& parts) {
    const std::size_t width = parts.pooled.encoder.dimension();
    const auto params = run_centralized_model(config, parts.pooled.train, width);
    ModeResult r{Mode::kCentralized, {}, 0.0, 0.0, std::nullopt, {}};
    std::vector<data::FeatureRow> pooled_test;
    for (std::size_t i = 0; i < parts.pooled.stores.size(); ++i) {
        const auto& store = parts.pooled.stores[i];
        r.stores.push_back(evaluate_store(params, store, parts.local[i], config));
        pooled_test.insert(pooled_test.end(), store.test.begin(), store.test.end());
    }
    r.pooled_test_mse = model::evaluate_mse(params, pooled_test, config.hyper.leaky_slope);
    summarize(r);
    return r;
}

ModeResult run_federated_mode(const ExperimentConfig& config, const Partitions& parts, FederatedRun* run_out) {
    auto run = run_federated(config, parts.local);
    ModeResult r{Mode::kFederated, {}, 0.0, 0.0, std::nullopt, run.rounds};
    for (const auto& client : parts.local) r.stores.push_back(evaluate_store(run.model, client, client, config));
    summarize(r);
    if (run_out != nullptr) *run_out = std::move(run);
    return r;
}

ModeResult run_mode(const ExperimentConfig& config, const Partitions& parts, FederatedRun* run_out) {
    switch (config.mode) {
        case Mode::kStandalone: return run_standalone(config, parts);
        case Mode::kCentralized: return run_centralized(config, parts);
        case Mode::kFederated: return run_federated_mode(config, parts, run_out);
    }
    throw Error{ErrorCode::kBadConfig, "unknown mode"};
}

namespace {

    ledger::GasReport gas_for(const ExperimentConfig& config, const ledger::Chain* chain) {
        const double n_tx = chain != nullptr ? static_cast<double>(chain->transaction_count()) : 0.0;
        return ledger::gas_report(n_tx, ledger::bundled_tariffs(), config.complex_factor);
    }

}  // namespace

ExperimentReport single_mode_report(const ExperimentConfig& config, ModeResult result, const ledger::Chain* chain) {
    ExperimentReport report;
    report.modes.push_back(std::move(result));
    report.gas = gas_for(config, chain);
    return report;
}

ExperimentReport compare_modes(const ExperimentConfig& config, const Partitions& parts, FederatedRun* run_out) {
    ExperimentReport report;
    FederatedRun run;
    report.modes.push_back(run_standalone(config, parts));
    report.modes.push_back(run_centralized(config, parts));
    report.modes.push_back(run_federated_mode(config, parts, &run));

    const auto& standalone = report.modes[0];
    const auto& federated = report.modes[2];
    if (standalone.mean_oe > 0.0) report.waste_reduction = waste_reduction(standalone.mean_oe, federated.mean_oe);
    for (std::size_t i = 0; i < standalone.stores.size(); ++i) {
        StoreWaste w{standalone.stores[i].store_id, standalone.stores[i].split_ratio, std::nullopt};
        if (standalone.stores[i].oe > 0.0) w.reduction = waste_reduction(standalone.stores[i].oe, federated.stores[i].oe);
        report.store_waste.push_back(w);
    }
    report.gas = gas_for(config, config.ledger_enabled ? &run.chain : nullptr);
    if (run_out != nullptr) *run_out = std::move(run);
    return report;
}

}  // namespace fedretail::orchestrator
