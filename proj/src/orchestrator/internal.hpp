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

#include <fedretail/orchestrator.hpp>

namespace fedretail::orchestrator::detail {

struct LocalResult {
    model::Gradient update;
    model::MLPParams local;
};

// local_epochs of SGD on `rows` from `global`, reported as a model delta.
LocalResult train_local(std::span<const data::FeatureRow> rows, const model::MLPParams& global,
                        const model::HyperParams& hyper, Rng& rng);

std::size_t common_input_width(std::span<const data::ClientDataset> clients);

}  // namespace fedretail::orchestrator::detail
