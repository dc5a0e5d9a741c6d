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
#include <chrono>
#include <cmath>
#include <numeric>

#include <fedretail/kernels.hpp>

#include "internal.hpp"

namespace fedretail::orchestrator {

namespace detail {

    LocalResult train_local(std::span<const data::FeatureRow> rows, const model::MLPParams& global,
                            const model::HyperParams& hyper, Rng& rng) {
        if (rows.empty()) throw Error{ErrorCode::kEmptyClientData, "client has no training rows"};
        LocalResult out;
        out.local = model::train_epochs(global, rows, hyper, hyper.local_epochs, rng);
        out.update.sample_count = rows.size();
        out.update.values.assign(global.size(), 0.0);
        if (hyper.learning_rate == 0.0) return out;
        const auto g = global.flat();
        const auto l = out.local.flat();
        for (std::size_t i = 0; i < g.size(); ++i) out.update.values[i] = (g[i] - l[i]) / hyper.learning_rate;
        return out;
    }

    std::size_t common_input_width(std::span<const data::ClientDataset> clients) {
        if (clients.empty()) throw Error{ErrorCode::kEmptyClientData, "no clients"};
        const std::size_t width = clients.front().encoder.dimension();
        for (const auto& c : clients) {
            if (c.encoder.dimension() != width) {
                throw Error{ErrorCode::kDimensionMismatch, "store " + std::to_string(c.store_id) +
                                                               " has a different feature dimension"};
            }
        }
        return width;
    }

}  // namespace detail

std::vector<std::size_t> sample_clients(std::size_t k, double fraction, Rng& rng) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw Error{ErrorCode::kBadConfig, "client_fraction must lie in (0, 1]"};
    const auto wanted = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(k) + 0.5));
    const std::size_t m = std::min(k, std::max<std::size_t>(1, wanted));
    std::vector<std::size_t> all(k);
    std::iota(all.begin(), all.end(), std::size_t{0});
    if (m == k) return all;
    // partial Fisher-Yates
    for (std::size_t i = 0; i < m; ++i) {
        std::uniform_int_distribution<std::size_t> pick{i, k - 1};
        std::swap(all[i], all[pick(rng)]);
    }
    all.resize(m);
    std::sort(all.begin(), all.end());
    return all;
}

model::Gradient local_update(const data::ClientDataset& client, const model::MLPParams& global,
                             const model::HyperParams& hyper, Rng& rng) {
    if (client.train.empty()) {
        throw Error{ErrorCode::kEmptyClientData, "store " + std::to_string(client.store_id) + " has no training rows"};
    }
    return detail::train_local(client.train, global, hyper, rng).update;
}

std::vector<double> aggregate(std::span<const model::Gradient> updates, Weighting weighting) {
    if (updates.empty()) throw Error{ErrorCode::kEmptyAggregation, "no updates to aggregate"};
    const std::size_t length = updates.front().values.size();
    std::vector<double> sum(length, 0.0);
    double denominator = 0.0;
    for (const auto& u : updates) {
        if (u.values.size() != length) throw Error{ErrorCode::kLengthMismatch, "updates differ in length"};
        const double weight = weighting == Weighting::kUniform ? 1.0 : static_cast<double>(u.sample_count);
        kernels::axpy(weight, u.values, sum);
        denominator += weight;
    }
    if (denominator <= 0.0) throw Error{ErrorCode::kEmptyAggregation, "aggregate weights sum to zero"};
    for (double& v : sum) v /= denominator;
    return sum;
}

namespace {

    std::int64_t now_seconds() {
        return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
            .count();
    }

    std::vector<double> masked_aggregate(const ExperimentConfig& config, std::span<const data::ClientDataset> clients,
                                         std::span<const std::size_t> sampled,
                                         std::span<const model::Gradient> updates, int round, RoundReport& report) {
        std::vector<privacy::ClientId> ids;
        for (const auto slot : sampled) ids.push_back(static_cast<privacy::ClientId>(clients[slot].store_id));
        config.codec.check_capacity(ids.size());
        const privacy::SecureAggregationRound protocol{ids, config.seed, round, config.codec};

        std::vector<std::size_t> vanish;
        if (config.secagg_dropouts > 0) {
            auto rng = make_stream(config.seed, {stream::kDropouts, static_cast<std::uint64_t>(round)});
            const double frac = std::min(1.0, static_cast<double>(config.secagg_dropouts) / static_cast<double>(ids.size()));
            vanish = sample_clients(ids.size(), frac, rng);
        }

        std::vector<privacy::MaskedUpdate> delivered;
        double denominator = 0.0;
        for (std::size_t i = 0; i < sampled.size(); ++i) {
            const auto& u = updates[i];
            // Sample weighting is folded in by the client so the server
            // still only sees one sum.
            const double weight = config.weighting == Weighting::kUniform ? 1.0 : static_cast<double>(u.sample_count);
            std::vector<double> payload = u.values;
            if (weight != 1.0) {
                for (double& v : payload) v *= weight;
            }
            auto masked = protocol.mask(ids[i], payload, u.sample_count);
            if (std::binary_search(vanish.begin(), vanish.end(), i)) {
                report.dropped.push_back(static_cast<int>(ids[i]));
                continue;
            }
            delivered.push_back(std::move(masked));
            denominator += weight;
        }
        if (delivered.empty()) throw Error{ErrorCode::kEmptyAggregation, "every sampled client dropped"};
        auto sum = protocol.aggregate(delivered);
        for (double& v : sum) v /= denominator;
        report.codec = config.codec;
        return sum;
    }

}  // namespace

FederatedRun run_federated(const ExperimentConfig& config, std::span<const data::ClientDataset> clients) {
    config.validate();
    const std::size_t width = detail::common_input_width(clients);
    for (std::size_t i = 1; i < clients.size(); ++i) {
        if (clients[i].store_id <= clients[i - 1].store_id) {
            throw Error{ErrorCode::kBadConfig, "clients must be sorted by distinct store id"};
        }
    }

    const ledger::GasTariff* tariff = nullptr;
    if (config.ledger_enabled) tariff = &ledger::find_tariff(ledger::bundled_tariffs(), config.tariff);

    FederatedRun run;
    run.model = model::init_params(config.architecture(width), config.seed);
    const double lr = config.hyper.learning_rate;
    const bool dp_applied = config.dp.clip_mode != privacy::ClipMode::kNone || config.dp.noise_std > 0.0;

    for (int t = 1; t <= config.rounds; ++t) {
        const auto round = static_cast<std::uint64_t>(t);
        auto sampling = make_stream(config.seed, {stream::kSampling, round});
        const auto sampled = sample_clients(clients.size(), config.client_fraction, sampling);

        RoundReport report;
        report.round = t;
        report.dp_applied = dp_applied;

        std::vector<model::Gradient> updates;
        updates.reserve(sampled.size());
        for (const auto slot : sampled) {
            const auto& client = clients[slot];
            if (client.train.empty()) {
                throw Error{ErrorCode::kEmptyClientData,
                            "store " + std::to_string(client.store_id) + " has no training rows"};
            }
            auto rng = make_stream(config.seed, {stream::kLocalTraining, round, slot});
            auto local = detail::train_local(client.train, run.model, config.hyper, rng);
            report.participants.push_back(client.store_id);
            report.train_loss[client.store_id] = model::evaluate_mse(local.local, client.train, config.hyper.leaky_slope);

            local.update.values = privacy::apply_clipping(local.update.values, config.dp);
            if (config.dp.noise_point == privacy::NoisePoint::kPerClient && config.dp.noise_std > 0.0) {
                auto noise = make_stream(config.seed, {stream::kClientNoise, round, slot});
                local.update.values = privacy::add_gaussian_noise(local.update.values, config.dp.noise_std, noise);
            }
            updates.push_back(std::move(local.update));
        }

        std::vector<double> delta = config.secagg_enabled
                                        ? masked_aggregate(config, clients, sampled, updates, t, report)
                                        : aggregate(updates, config.weighting);

        if (config.dp.noise_point == privacy::NoisePoint::kGlobal && config.dp.noise_std > 0.0) {
            auto noise = make_stream(config.seed, {stream::kGlobalNoise, round});
            delta = privacy::add_gaussian_noise(delta, config.dp.noise_std, noise);
        }
        report.update_norm = std::sqrt(kernels::dot(delta, delta));
        run.model = model::sgd_step(run.model, delta, lr);

        if (tariff != nullptr) {
            const auto blob = model::serialize_model(run.model);
            const auto cid = run.cas.put(blob);
            const std::int64_t timestamp = config.clock == LedgerClock::kLogical ? t : now_seconds();
            const std::string meta = "participants=" + std::to_string(report.participants.size());
            run.chain.append_block(cid, t, timestamp, meta);
            report.cid = cid.hex();
            report.gas_gwei = tariff->tx_gwei;

            ledger::Bytes sent = run.cas.get(cid);
            if (config.tamper_round && *config.tamper_round == t && !sent.empty()) sent[sent.size() / 2] ^= 0x01;
            // Clients check the delivered snapshot against the anchor
            // before adopting it.
            const auto verdict = ledger::verify_model(sent, t, run.chain);
            if (verdict != ledger::ModelVerdict::kValid) {
                throw AlertInconsistencyError{t, "delivered model does not match anchored cid " + cid.hex()};
            }
            run.model = model::deserialize_model(sent);
        }
        run.rounds.push_back(std::move(report));
    }
    return run;
}

}  // namespace fedretail::orchestrator
