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
#include <numeric>

#include <fedretail/kernels.hpp>
#include <fedretail/model.hpp>

namespace fedretail::model {

namespace {

    // Per-sample activations kept for the backward pass.
    struct Workspace {
        std::vector<std::vector<double>> activations;  // a_0 = x, a_l after activation/dropout
        std::vector<std::vector<double>> slopes;       // d a_l / d z_l for hidden layers, dropout folded in
        std::vector<double> delta;
        std::vector<double> delta_prev;
    };

    // Accumulates the data term of the gradient for one sample into `grad`
    // (same layout as the flat parameters), scaled by `scale`.
    void accumulate_sample(const MLPParams& params, const data::FeatureRow& row, double scale, double leaky_slope,
                           const DropoutMask* mask, Workspace& ws, std::span<double> grad) {
        const auto& arch = params.architecture();
        const std::size_t layers = params.layer_count();
        if (row.x.size() != params.input_width()) {
            throw Error{ErrorCode::kDimensionMismatch, "input has " + std::to_string(row.x.size()) +
                                                           " features, model expects " +
                                                           std::to_string(params.input_width())};
        }

        ws.activations.resize(layers + 1);
        ws.slopes.resize(layers);
        ws.activations[0].assign(row.x.begin(), row.x.end());
        for (std::size_t l = 0; l < layers; ++l) {
            const std::size_t in = arch[l];
            const std::size_t out = arch[l + 1];
            const auto w = params.weights(l);
            const auto b = params.biases(l);
            auto& z = ws.activations[l + 1];
            z.resize(out);
            for (std::size_t r = 0; r < out; ++r) z[r] = kernels::dot(w.subspan(r * in, in), ws.activations[l]) + b[r];
            if (l + 1 < layers) {
                auto& s = ws.slopes[l];
                s.resize(out);
                for (std::size_t r = 0; r < out; ++r) s[r] = z[r] >= 0.0 ? 1.0 : leaky_slope;
                kernels::leaky_relu(z, leaky_slope);
                if (mask) {
                    const auto& m = mask->hidden[l];
                    for (std::size_t r = 0; r < out; ++r) {
                        z[r] *= m[r];
                        s[r] *= m[r];
                    }
                }
            }
        }

        const double pred = ws.activations[layers][0];
        ws.delta.assign(1, 2.0 * (pred - row.y) * scale);

        // grad layout mirrors MLPParams::flat()
        std::size_t offset = params.flat().size();
        for (std::size_t l = layers; l-- > 0;) {
            const std::size_t in = arch[l];
            const std::size_t out = arch[l + 1];
            offset -= in * out + out;
            auto gw = grad.subspan(offset, in * out);
            auto gb = grad.subspan(offset + in * out, out);
            const auto& a = ws.activations[l];
            for (std::size_t r = 0; r < out; ++r) {
                kernels::axpy(ws.delta[r], a, gw.subspan(r * in, in));
                gb[r] += ws.delta[r];
            }
            if (l == 0) break;
            const auto w = params.weights(l);
            ws.delta_prev.assign(in, 0.0);
            for (std::size_t r = 0; r < out; ++r) kernels::axpy(ws.delta[r], w.subspan(r * in, in), ws.delta_prev);
            const auto& s = ws.slopes[l - 1];
            for (std::size_t j = 0; j < in; ++j) ws.delta_prev[j] *= s[j];
            ws.delta.swap(ws.delta_prev);
        }
    }

    Gradient batch_gradient(const MLPParams& params, std::span<const data::FeatureRow> rows,
                            std::span<const std::size_t> indices, const HyperParams& hyper, Rng& rng,
                            Workspace& ws) {
        if (indices.empty()) throw Error{ErrorCode::kEmptyInput, "gradient of an empty batch"};
        Gradient g;
        g.values.assign(params.size(), 0.0);
        g.sample_count = indices.size();
        const double scale = 1.0 / static_cast<double>(indices.size());
        const bool use_dropout = hyper.dropout_p > 0.0;
        for (const std::size_t i : indices) {
            if (use_dropout) {
                const DropoutMask mask = sample_dropout_mask(params, hyper.dropout_p, rng);
                accumulate_sample(params, rows[i], scale, hyper.leaky_slope, &mask, ws, g.values);
            } else {
                accumulate_sample(params, rows[i], scale, hyper.leaky_slope, nullptr, ws, g.values);
            }
        }
        if (hyper.weight_decay > 0.0) {
            std::span<double> out{g.values};
            for (std::size_t l = 0; l < params.layer_count(); ++l) {
                const auto w = params.weights(l);
                const auto offset = static_cast<std::size_t>(w.data() - params.flat().data());
                kernels::axpy(hyper.weight_decay, w, out.subspan(offset, w.size()));
            }
        }
        return g;
    }

}  // namespace

Gradient backward(const MLPParams& params, std::span<const data::FeatureRow> batch, const HyperParams& hyper,
                  Rng& rng) {
    std::vector<std::size_t> indices(batch.size());
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    Workspace ws;
    return batch_gradient(params, batch, indices, hyper, rng, ws);
}

MLPParams sgd_step(const MLPParams& params, std::span<const double> grad, double learning_rate) {
    if (grad.size() != params.size()) {
        throw Error{ErrorCode::kDimensionMismatch, "gradient has " + std::to_string(grad.size()) +
                                                       " entries, model has " + std::to_string(params.size())};
    }
    MLPParams next = params;
    kernels::axpy(-learning_rate, grad, next.flat());
    return next;
}

MLPParams train_epochs(MLPParams params, std::span<const data::FeatureRow> rows, const HyperParams& hyper,
                       int epochs, Rng& rng) {
    if (rows.empty()) throw Error{ErrorCode::kEmptyClientData, "no training rows"};
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Workspace ws;
    for (int e = 0; e < epochs; ++e) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += hyper.batch_size) {
            const std::size_t len = std::min(hyper.batch_size, order.size() - start);
            const Gradient g =
                batch_gradient(params, rows, std::span<const std::size_t>{order}.subspan(start, len), hyper, rng, ws);
            kernels::axpy(-hyper.learning_rate, g.values, params.flat());
        }
    }
    return params;
}

}  // namespace fedretail::model
