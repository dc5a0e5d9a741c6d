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

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <fedretail/config.hpp>
#include <fedretail/data.hpp>
#include <fedretail/ledger.hpp>
#include <fedretail/model.hpp>
#include <fedretail/privacy.hpp>

namespace fedretail::orchestrator {

enum class Mode {
    kStandalone,
    kCentralized,
    kFederated,
};

enum class Weighting {
    kUniform,
    kSampleWeighted,
};

enum class OeMode {
    kRelative,  // sum max(0, pred - actual) / sum actual
    kAbsolute,  // sum max(0, pred - actual) / n
};

enum class LedgerClock {
    kLogical,
    kWallClock,
};

const char* to_string(Mode mode);
Mode parse_mode(std::string_view text);

struct ExperimentConfig {
    Mode mode{Mode::kFederated};
    int rounds{100};
    double client_fraction{1.0};
    privacy::DPConfig dp;
    bool secagg_enabled{true};
    privacy::FixedPointCodec codec;
    int secagg_dropouts{0};  // sampled clients that vanish after masking, per round
    Weighting weighting{Weighting::kUniform};
    model::HyperParams hyper;
    std::vector<std::size_t> hidden{32, 16};
    std::uint64_t seed{1};

    bool ledger_enabled{true};
    std::string tariff{"Ethereum"};
    double complex_factor{ledger::kDefaultComplexFactor};
    LedgerClock clock{LedgerClock::kLogical};
    std::optional<int> tamper_round;  // server corrupts the blob it sends in this round

    OeMode oe_mode{OeMode::kRelative};

    std::string data_path;  // empty selects the synthetic generator
    data::SyntheticSpec synthetic;
    data::PipelineConfig pipeline;

    void validate() const;
    [[nodiscard]] std::vector<std::size_t> architecture(std::size_t input_width) const;

    static ExperimentConfig from(const KeyValueConfig& kv);
    [[nodiscard]] KeyValueConfig snapshot() const;
};

struct RoundReport {
    int round{0};
    std::vector<int> participants;
    std::vector<int> dropped;
    std::optional<std::string> cid;
    std::map<int, double> train_loss;  // per participant, after local training
    double update_norm{0.0};
    bool dp_applied{false};
    std::optional<privacy::FixedPointCodec> codec;  // set when the round was masked
    double gas_gwei{0.0};
};

struct StoreResult {
    int store_id{0};
    double split_ratio{0.0};
    double mse{0.0};
    double oe{0.0};
};

struct ModeResult {
    Mode mode{Mode::kFederated};
    std::vector<StoreResult> stores;
    double mean_mse{0.0};
    double mean_oe{0.0};
    std::optional<double> pooled_test_mse;  // centralized only
    std::vector<RoundReport> rounds;
};

struct FederatedRun {
    model::MLPParams model;
    std::vector<RoundReport> rounds;
    ledger::Chain chain;
    ledger::ContentStore cas;
};

// ---------------------------------------------------------------------------
// Protocol pieces

// Uniform sample without replacement of max(1, round-half-up(fraction * K))
// indices, returned sorted.
std::vector<std::size_t> sample_clients(std::size_t k, double fraction, Rng& rng);

// Local SGD from the global model; values = (global - local) / lr.
model::Gradient local_update(const data::ClientDataset& client, const model::MLPParams& global,
                             const model::HyperParams& hyper, Rng& rng);

std::vector<double> aggregate(std::span<const model::Gradient> updates, Weighting weighting);

FederatedRun run_federated(const ExperimentConfig& config, std::span<const data::ClientDataset> clients);

// Trains one model per store; entry i belongs to clients[i].
std::vector<model::MLPParams> run_standalone_models(const ExperimentConfig& config,
                                                   std::span<const data::ClientDataset> clients);

model::MLPParams run_centralized_model(const ExperimentConfig& config, std::span<const data::FeatureRow> pooled_train,
                                       std::size_t input_width);

// ---------------------------------------------------------------------------
// Metrics

double compute_oe(std::span<const double> preds, std::span<const double> actuals, OeMode mode = OeMode::kRelative);
double waste_reduction(double oe_baseline, double oe_treatment);

// Test MSE in the store's own normalized target units and OE in sales units.
// `evaluated` holds the store's rows encoded for the model; `local` is the
// store's own encoding.
StoreResult evaluate_store(const model::MLPParams& params, const data::ClientDataset& evaluated,
                           const data::ClientDataset& local, const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Experiments

std::vector<data::StoreRecord> load_records(const ExperimentConfig& config);

struct Partitions {
    std::vector<data::ClientDataset> local;
    data::PooledDataset pooled;
};

Partitions make_partitions(std::span<const data::StoreRecord> records, const ExperimentConfig& config);

ModeResult run_standalone(const ExperimentConfig& config, const Partitions& parts);
ModeResult run_centralized(const ExperimentConfig& config, const Partitions& parts);
ModeResult run_federated_mode(const ExperimentConfig& config, const Partitions& parts, FederatedRun* run_out = nullptr);
ModeResult run_mode(const ExperimentConfig& config, const Partitions& parts, FederatedRun* run_out = nullptr);

struct StoreWaste {
    int store_id{0};
    double split_ratio{0.0};
    std::optional<double> reduction;  // absent when the standalone OE is zero
};

struct ExperimentReport {
    std::vector<ModeResult> modes;
    std::optional<double> waste_reduction;  // federated vs standalone mean OE
    std::vector<StoreWaste> store_waste;
    ledger::GasReport gas;
};

ExperimentReport compare_modes(const ExperimentConfig& config, const Partitions& parts,
                               FederatedRun* run_out = nullptr);
ExperimentReport single_mode_report(const ExperimentConfig& config, ModeResult result,
                                    const ledger::Chain* chain);

// ---------------------------------------------------------------------------
// Report files

std::string report_json(const ExperimentReport& report, const ExperimentConfig& config);
std::string report_csv(const ExperimentReport& report);
std::string rounds_log(std::span<const RoundReport> rounds);

}  // namespace fedretail::orchestrator
