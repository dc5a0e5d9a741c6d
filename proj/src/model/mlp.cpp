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

#include <fedretail/kernels.hpp>
#include <fedretail/model.hpp>

namespace fedretail::model {

void HyperParams::validate() const {
    if (!(learning_rate >= 0.0)) throw Error{ErrorCode::kBadConfig, "learning_rate must be >= 0"};
    if (!(weight_decay >= 0.0)) throw Error{ErrorCode::kBadConfig, "weight_decay must be >= 0"};
    if (!(dropout_p >= 0.0 && dropout_p < 1.0)) throw Error{ErrorCode::kBadConfig, "dropout_p must lie in [0, 1)"};
    if (!(leaky_slope > 0.0 && leaky_slope < 1.0)) throw Error{ErrorCode::kBadConfig, "leaky_slope must lie in (0, 1)"};
    if (local_epochs < 1) throw Error{ErrorCode::kBadConfig, "local_epochs must be positive"};
    if (batch_size < 1) throw Error{ErrorCode::kBadConfig, "batch_size must be positive"};
}

namespace {

    void check_architecture(std::span<const std::size_t> widths) {
        if (widths.size() < 2) throw Error{ErrorCode::kBadArchitecture, "need at least input and output widths"};
        for (const auto w : widths) {
            if (w < 1) throw Error{ErrorCode::kBadArchitecture, "layer width must be >= 1"};
        }
        if (widths.back() != 1) throw Error{ErrorCode::kBadArchitecture, "output width must be 1"};
    }

}  // namespace

std::size_t parameter_count(std::span<const std::size_t> widths) {
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) n += widths[l] * widths[l + 1] + widths[l + 1];
    return n;
}

MLPParams::MLPParams(std::vector<std::size_t> widths, std::vector<double> flat)
    : widths_{std::move(widths)}, flat_{std::move(flat)} {
    check_architecture(widths_);
    if (flat_.size() != parameter_count(widths_)) {
        throw Error{ErrorCode::kLengthMismatch, "expected " + std::to_string(parameter_count(widths_)) +
                                                    " parameters, got " + std::to_string(flat_.size())};
    }
    offsets_.reserve(layer_count());
    std::size_t at = 0;
    for (std::size_t l = 0; l < layer_count(); ++l) {
        offsets_.push_back(at);
        at += widths_[l] * widths_[l + 1] + widths_[l + 1];
    }
}

std::size_t MLPParams::weight_offset(std::size_t layer) const { return offsets_.at(layer); }

std::span<const double> MLPParams::weights(std::size_t layer) const {
    return std::span<const double>{flat_}.subspan(weight_offset(layer), widths_[layer] * widths_[layer + 1]);
}

std::span<double> MLPParams::weights(std::size_t layer) {
    return std::span<double>{flat_}.subspan(weight_offset(layer), widths_[layer] * widths_[layer + 1]);
}

std::span<const double> MLPParams::biases(std::size_t layer) const {
    return std::span<const double>{flat_}.subspan(weight_offset(layer) + widths_[layer] * widths_[layer + 1],
                                                  widths_[layer + 1]);
}

std::span<double> MLPParams::biases(std::size_t layer) {
    return std::span<double>{flat_}.subspan(weight_offset(layer) + widths_[layer] * widths_[layer + 1],
                                            widths_[layer + 1]);
}

MLPParams init_params(std::vector<std::size_t> widths, std::uint64_t seed) {
    check_architecture(widths);
    std::vector<double> flat(parameter_count(widths), 0.0);
    MLPParams params{std::move(widths), std::move(flat)};
    Rng rng{seed};
    const auto& arch = params.architecture();
    for (std::size_t l = 0; l < params.layer_count(); ++l) {
        const double limit = std::sqrt(6.0 / static_cast<double>(arch[l] + arch[l + 1]));
        std::uniform_real_distribution<double> dist{-limit, limit};
        for (double& w : params.weights(l)) w = dist(rng);
    }
    return params;
}

std::vector<double> flatten(const MLPParams& params) { return {params.flat().begin(), params.flat().end()}; }

MLPParams unflatten(std::span<const double> flat, std::vector<std::size_t> widths) {
    return MLPParams{std::move(widths), std::vector<double>(flat.begin(), flat.end())};
}

DropoutMask sample_dropout_mask(const MLPParams& params, double dropout_p, Rng& rng) {
    DropoutMask mask;
    const auto& arch = params.architecture();
    const double keep_scale = 1.0 / (1.0 - dropout_p);
    std::bernoulli_distribution drop{dropout_p};
    for (std::size_t l = 1; l + 1 < arch.size(); ++l) {
        std::vector<double> m(arch[l]);
        for (double& v : m) v = drop(rng) ? 0.0 : keep_scale;
        mask.hidden.push_back(std::move(m));
    }
    return mask;
}

double forward(const MLPParams& params, std::span<const double> x, double leaky_slope, const DropoutMask* mask) {
    if (x.size() != params.input_width()) {
        throw Error{ErrorCode::kDimensionMismatch, "input has " + std::to_string(x.size()) + " features, model expects " +
                                                       std::to_string(params.input_width())};
    }
    const auto& arch = params.architecture();
    std::vector<double> current(x.begin(), x.end());
    std::vector<double> next;
    for (std::size_t l = 0; l < params.layer_count(); ++l) {
        const std::size_t in = arch[l];
        const std::size_t out = arch[l + 1];
        const auto w = params.weights(l);
        const auto b = params.biases(l);
        next.assign(out, 0.0);
        for (std::size_t r = 0; r < out; ++r) next[r] = kernels::dot(w.subspan(r * in, in), current) + b[r];
        if (l + 1 < params.layer_count()) {
            kernels::leaky_relu(next, leaky_slope);
            if (mask) {
                const auto& m = mask->hidden.at(l);
                for (std::size_t r = 0; r < out; ++r) next[r] *= m[r];
            }
        }
        current.swap(next);
    }
    return current.front();
}

std::vector<double> predict(const MLPParams& params, std::span<const data::FeatureRow> rows, double leaky_slope) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(forward(params, row.x, leaky_slope));
    return out;
}

double mse_loss(std::span<const double> preds, std::span<const double> targets) {
    if (preds.empty()) throw Error{ErrorCode::kEmptyInput, "mse of empty vectors"};
    if (preds.size() != targets.size()) throw Error{ErrorCode::kDimensionMismatch, "preds and targets differ in length"};
    double sum = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const double r = preds[i] - targets[i];
        sum += r * r;
    }
    return sum / static_cast<double>(preds.size());
}

double evaluate_mse(const MLPParams& params, std::span<const data::FeatureRow> rows, double leaky_slope) {
    const auto preds = predict(params, rows, leaky_slope);
    std::vector<double> targets;
    targets.reserve(rows.size());
    for (const auto& r : rows) targets.push_back(r.y);
    return mse_loss(preds, targets);
}

}  // namespace fedretail::model
