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
#include <span>
#include <vector>

#include <fedretail/data.hpp>
#include <fedretail/rng.hpp>

namespace fedretail::model {

inline constexpr double kDefaultLeakySlope = 0.01;

struct HyperParams {
    double learning_rate{0.01};
    double weight_decay{1e-4};
    double dropout_p{0.2};
    double leaky_slope{kDefaultLeakySlope};
    int local_epochs{1};
    std::size_t batch_size{32};
    std::uint64_t seed{1};

    void validate() const;
};

std::size_t parameter_count(std::span<const std::size_t> widths);

// Feed-forward regressor stored as one flat buffer. Layer l maps
// widths[l] -> widths[l+1]; its weights are row-major (one row per output
// unit) and are followed by its biases.
class MLPParams {
  public:
    MLPParams() = default;
    MLPParams(std::vector<std::size_t> widths, std::vector<double> flat);

    [[nodiscard]] const std::vector<std::size_t>& architecture() const noexcept { return widths_; }
    [[nodiscard]] std::size_t layer_count() const noexcept { return widths_.empty() ? 0 : widths_.size() - 1; }
    [[nodiscard]] std::size_t input_width() const noexcept { return widths_.empty() ? 0 : widths_.front(); }

    [[nodiscard]] std::span<const double> weights(std::size_t layer) const;
    [[nodiscard]] std::span<double> weights(std::size_t layer);
    [[nodiscard]] std::span<const double> biases(std::size_t layer) const;
    [[nodiscard]] std::span<double> biases(std::size_t layer);

    [[nodiscard]] std::span<const double> flat() const noexcept { return flat_; }
    [[nodiscard]] std::span<double> flat() noexcept { return flat_; }
    [[nodiscard]] std::size_t size() const noexcept { return flat_.size(); }

    bool operator==(const MLPParams&) const = default;

  private:
    [[nodiscard]] std::size_t weight_offset(std::size_t layer) const;

    std::vector<std::size_t> widths_;
    std::vector<double> flat_;
    std::vector<std::size_t> offsets_;
};

// Glorot-uniform weights, zero biases. Throws BadArchitecture.
MLPParams init_params(std::vector<std::size_t> widths, std::uint64_t seed);

std::vector<double> flatten(const MLPParams& params);
MLPParams unflatten(std::span<const double> flat, std::vector<std::size_t> widths);

// Canonical snapshot bytes: u32 LE width count, u32 LE widths, then the flat
// parameters as f64 LE. This is what the ledger hashes.
std::vector<std::uint8_t> serialize_model(const MLPParams& params);
MLPParams deserialize_model(std::span<const std::uint8_t> bytes);

// Inverted dropout: one vector per hidden layer holding 0 or 1/(1-p).
struct DropoutMask {
    std::vector<std::vector<double>> hidden;
};

DropoutMask sample_dropout_mask(const MLPParams& params, double dropout_p, Rng& rng);

inline double leaky_relu(double z, double slope) { return z >= 0.0 ? z : slope * z; }

double forward(const MLPParams& params, std::span<const double> x, double leaky_slope = kDefaultLeakySlope,
               const DropoutMask* mask = nullptr);

std::vector<double> predict(const MLPParams& params, std::span<const data::FeatureRow> rows,
                            double leaky_slope = kDefaultLeakySlope);

double mse_loss(std::span<const double> preds, std::span<const double> targets);

// Mean squared error of the model over rows, dropout off.
double evaluate_mse(const MLPParams& params, std::span<const data::FeatureRow> rows,
                    double leaky_slope = kDefaultLeakySlope);

struct Gradient {
    std::vector<double> values;
    std::size_t sample_count{0};
};

// Exact gradient of mean squared error over the batch plus
// weight_decay * |W|^2 / 2 (biases excluded), under freshly sampled dropout
// masks when dropout_p > 0.
Gradient backward(const MLPParams& params, std::span<const data::FeatureRow> batch, const HyperParams& hyper,
                  Rng& rng);

MLPParams sgd_step(const MLPParams& params, std::span<const double> grad, double learning_rate);

// Mini-batch SGD, reshuffling every epoch.
MLPParams train_epochs(MLPParams params, std::span<const data::FeatureRow> rows, const HyperParams& hyper,
                       int epochs, Rng& rng);

}  // namespace fedretail::model
