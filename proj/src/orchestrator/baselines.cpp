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

#include <fedretail/orchestrator.hpp>

#include "internal.hpp"

namespace fedretail::orchestrator {

namespace {

    // Same per-round commit as a one-client federation: local epochs from M,
    // then M <- M - lr * (M - L) / lr.
    model::MLPParams train_alone(const ExperimentConfig& config, std::span<const data::FeatureRow> rows,
                                 std::size_t input_width, std::uint64_t slot) {
        auto params = model::init_params(config.architecture(input_width), config.seed);
        for (int t = 1; t <= config.rounds; ++t) {
            auto rng = make_stream(config.seed, {stream::kLocalTraining, static_cast<std::uint64_t>(t), slot});
            const auto local = detail::train_local(rows, params, config.hyper, rng);
            params = model::sgd_step(params, local.update.values, config.hyper.learning_rate);
        }
        return params;
    }

}  // namespace

std::vector<model::MLPParams> run_standalone_models(const ExperimentConfig& config,
                                                   std::span<const data::ClientDataset> clients) {
    config.validate();
    const std::size_t width = detail::common_input_width(clients);
    std::vector<model::MLPParams> models;
    models.reserve(clients.size());
    for (std::size_t i = 0; i < clients.size(); ++i) {
        if (clients[i].train.empty()) {
            throw Error{ErrorCode::kEmptyClientData,
                        "store " + std::to_string(clients[i].store_id) + " has no training rows"};
        }
        models.push_back(train_alone(config, clients[i].train, width, i));
    }
    return models;
}

model::MLPParams run_centralized_model(const ExperimentConfig& config, std::span<const data::FeatureRow> pooled_train,
                                       std::size_t input_width) {
    config.validate();
    if (pooled_train.empty()) throw Error{ErrorCode::kEmptyClientData, "pooled training set is empty"};
    return train_alone(config, pooled_train, input_width, 0);
}

}  // namespace fedretail::orchestrator
