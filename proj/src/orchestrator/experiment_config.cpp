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

#include <charconv>
#include <sstream>

#include <fedretail/orchestrator.hpp>

namespace fedretail::orchestrator {

const char* to_string(Mode mode) {
    switch (mode) {
        case Mode::kStandalone: return "standalone";
        case Mode::kCentralized: return "centralized";
        case Mode::kFederated: return "federated";
    }
    return "unknown";
}

Mode parse_mode(std::string_view text) {
    if (text == "standalone") return Mode::kStandalone;
    if (text == "centralized") return Mode::kCentralized;
    if (text == "federated") return Mode::kFederated;
    throw Error{ErrorCode::kBadConfig, "unknown mode '" + std::string{text} + "'"};
}

namespace {

    std::string num(double v) {
        char buf[64];
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, ptr);
    }

    template <typename T>
    std::string join(const std::vector<T>& values) {
        std::string out;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(values[i]);
        }
        return out;
    }

    privacy::ClipMode parse_clip(const std::string& s) {
        if (s == "none") return privacy::ClipMode::kNone;
        if (s == "elementwise") return privacy::ClipMode::kElementwise;
        if (s == "norm") return privacy::ClipMode::kNorm;
        throw Error{ErrorCode::kBadConfig, "clip_mode must be none, elementwise or norm"};
    }

    const char* clip_name(privacy::ClipMode m) {
        switch (m) {
            case privacy::ClipMode::kNone: return "none";
            case privacy::ClipMode::kElementwise: return "elementwise";
            case privacy::ClipMode::kNorm: return "norm";
        }
        return "none";
    }

    std::map<int, double> parse_overrides(const std::string& text) {
        // "3:0.5,7:0.9"
        std::map<int, double> out;
        std::stringstream ss{text};
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) throw Error{ErrorCode::kBadConfig, "split_overrides entry '" + item + "'"};
            try {
                out[std::stoi(item.substr(0, colon))] = std::stod(item.substr(colon + 1));
            } catch (const std::logic_error&) {
                throw Error{ErrorCode::kBadConfig, "split_overrides entry '" + item + "'"};
            }
        }
        return out;
    }

}  // namespace

void ExperimentConfig::validate() const {
    if (rounds < 1) throw Error{ErrorCode::kBadConfig, "rounds must be >= 1"};
    if (!(client_fraction > 0.0 && client_fraction <= 1.0)) {
        throw Error{ErrorCode::kBadConfig, "client_fraction must lie in (0, 1]"};
    }
    if (secagg_dropouts < 0) throw Error{ErrorCode::kBadConfig, "secagg_dropouts must be >= 0"};
    if (!(complex_factor >= 0.0)) throw Error{ErrorCode::kBadConfig, "complex_factor must be >= 0"};
    for (const auto w : hidden) {
        if (w < 1) throw Error{ErrorCode::kBadConfig, "hidden widths must be positive"};
    }
    if (tamper_round && *tamper_round < 1) throw Error{ErrorCode::kBadConfig, "tamper_round must be >= 1"};
    if (pipeline.lags.empty()) throw Error{ErrorCode::kBadConfig, "at least one lag is required"};
    for (const int lag : pipeline.lags) {
        if (lag < 1) throw Error{ErrorCode::kBadConfig, "lags must be positive"};
    }
    if (synthetic.stores < 1 || synthetic.weeks < 1) throw Error{ErrorCode::kBadConfig, "synthetic size must be positive"};
    dp.validate();
    hyper.validate();
    if (secagg_enabled) codec.validate();
}

std::vector<std::size_t> ExperimentConfig::architecture(std::size_t input_width) const {
    std::vector<std::size_t> widths{input_width};
    widths.insert(widths.end(), hidden.begin(), hidden.end());
    widths.push_back(1);
    return widths;
}

ExperimentConfig ExperimentConfig::from(const KeyValueConfig& kv) {
    ExperimentConfig c;
    c.mode = parse_mode(kv.get_string("mode", to_string(c.mode)));
    c.rounds = static_cast<int>(kv.get_int("rounds", c.rounds));
    c.client_fraction = kv.get_double("client_fraction", c.client_fraction);

    c.dp.clip_mode = parse_clip(kv.get_string("clip_mode", clip_name(c.dp.clip_mode)));
    c.dp.clip_threshold = kv.get_double("clip_threshold", c.dp.clip_threshold);
    c.dp.noise_std = kv.get_double("noise_std", c.dp.noise_std);
    const auto point = kv.get_string("noise_point", "global");
    if (point == "global") {
        c.dp.noise_point = privacy::NoisePoint::kGlobal;
    } else if (point == "per_client") {
        c.dp.noise_point = privacy::NoisePoint::kPerClient;
    } else {
        throw Error{ErrorCode::kBadConfig, "noise_point must be global or per_client"};
    }

    c.secagg_enabled = kv.get_bool("secagg", c.secagg_enabled);
    c.secagg_dropouts = static_cast<int>(kv.get_int("secagg_dropouts", c.secagg_dropouts));
    c.codec.fractional_bits = static_cast<int>(kv.get_int("fractional_bits", c.codec.fractional_bits));
    c.codec.modulus = kv.get_u64("field_modulus", c.codec.modulus);
    c.codec.clamp_range = kv.get_double("clamp_range", c.codec.clamp_range);

    const auto weighting = kv.get_string("weighting", "uniform");
    if (weighting == "uniform") {
        c.weighting = Weighting::kUniform;
    } else if (weighting == "sample_weighted") {
        c.weighting = Weighting::kSampleWeighted;
    } else {
        throw Error{ErrorCode::kBadConfig, "weighting must be uniform or sample_weighted"};
    }

    c.hyper.learning_rate = kv.get_double("learning_rate", c.hyper.learning_rate);
    c.hyper.weight_decay = kv.get_double("weight_decay", c.hyper.weight_decay);
    c.hyper.dropout_p = kv.get_double("dropout", c.hyper.dropout_p);
    c.hyper.leaky_slope = kv.get_double("leaky_slope", c.hyper.leaky_slope);
    c.hyper.local_epochs = static_cast<int>(kv.get_int("local_epochs", c.hyper.local_epochs));
    const auto batch = kv.get_int("batch_size", static_cast<std::int64_t>(c.hyper.batch_size));
    if (batch < 1) throw Error{ErrorCode::kBadConfig, "batch_size must be positive"};
    c.hyper.batch_size = static_cast<std::size_t>(batch);

    c.seed = kv.get_u64("seed", c.seed);
    c.hyper.seed = c.seed;

    const auto hidden = kv.get_int_list("hidden", {32, 16});
    c.hidden.clear();
    for (const auto h : hidden) {
        if (h < 1) throw Error{ErrorCode::kBadConfig, "hidden widths must be positive"};
        c.hidden.push_back(static_cast<std::size_t>(h));
    }

    c.ledger_enabled = kv.get_bool("ledger", c.ledger_enabled);
    c.tariff = kv.get_string("tariff", c.tariff);
    c.complex_factor = kv.get_double("complex_factor", c.complex_factor);
    const auto clock = kv.get_string("ledger_clock", "logical");
    if (clock == "logical") {
        c.clock = LedgerClock::kLogical;
    } else if (clock == "wall") {
        c.clock = LedgerClock::kWallClock;
    } else {
        throw Error{ErrorCode::kBadConfig, "ledger_clock must be logical or wall"};
    }
    if (kv.has("tamper_round")) c.tamper_round = static_cast<int>(kv.get_int("tamper_round", 0));

    const auto oe = kv.get_string("oe_mode", "relative");
    if (oe == "relative") {
        c.oe_mode = OeMode::kRelative;
    } else if (oe == "absolute") {
        c.oe_mode = OeMode::kAbsolute;
    } else {
        throw Error{ErrorCode::kBadConfig, "oe_mode must be relative or absolute"};
    }

    c.data_path = kv.get_string("data_path", "");
    c.synthetic.stores = static_cast<int>(kv.get_int("synthetic_stores", c.synthetic.stores));
    c.synthetic.weeks = static_cast<int>(kv.get_int("synthetic_weeks", c.synthetic.weeks));
    c.synthetic.seed = kv.get_u64("synthetic_seed", c.seed);

    c.pipeline.date_format = kv.get_string("date_format", c.pipeline.date_format);
    const auto lags = kv.get_int_list("lags", {1, 2, 3, 4});
    c.pipeline.lags.assign(lags.begin(), lags.end());
    c.pipeline.even_store_fraction = kv.get_double("split_even", c.pipeline.even_store_fraction);
    c.pipeline.odd_store_fraction = kv.get_double("split_odd", c.pipeline.odd_store_fraction);
    if (kv.has("split_overrides")) c.pipeline.fraction_overrides = parse_overrides(kv.get_string("split_overrides", ""));

    c.validate();
    return c;
}

KeyValueConfig ExperimentConfig::snapshot() const {
    KeyValueConfig kv;
    kv.set("mode", to_string(mode));
    kv.set("rounds", std::to_string(rounds));
    kv.set("client_fraction", num(client_fraction));
    kv.set("clip_mode", clip_name(dp.clip_mode));
    kv.set("clip_threshold", num(dp.clip_threshold));
    kv.set("noise_std", num(dp.noise_std));
    kv.set("noise_point", dp.noise_point == privacy::NoisePoint::kGlobal ? "global" : "per_client");
    kv.set("secagg", secagg_enabled ? "true" : "false");
    kv.set("secagg_dropouts", std::to_string(secagg_dropouts));
    kv.set("fractional_bits", std::to_string(codec.fractional_bits));
    kv.set("field_modulus", std::to_string(codec.modulus));
    kv.set("clamp_range", num(codec.clamp_range));
    kv.set("weighting", weighting == Weighting::kUniform ? "uniform" : "sample_weighted");
    kv.set("learning_rate", num(hyper.learning_rate));
    kv.set("weight_decay", num(hyper.weight_decay));
    kv.set("dropout", num(hyper.dropout_p));
    kv.set("leaky_slope", num(hyper.leaky_slope));
    kv.set("local_epochs", std::to_string(hyper.local_epochs));
    kv.set("batch_size", std::to_string(hyper.batch_size));
    kv.set("seed", std::to_string(seed));
    kv.set("hidden", join(hidden));
    kv.set("ledger", ledger_enabled ? "true" : "false");
    kv.set("tariff", tariff);
    kv.set("complex_factor", num(complex_factor));
    kv.set("ledger_clock", clock == LedgerClock::kLogical ? "logical" : "wall");
    if (tamper_round) kv.set("tamper_round", std::to_string(*tamper_round));
    kv.set("oe_mode", oe_mode == OeMode::kRelative ? "relative" : "absolute");
    kv.set("data_path", data_path);
    kv.set("synthetic_stores", std::to_string(synthetic.stores));
    kv.set("synthetic_weeks", std::to_string(synthetic.weeks));
    kv.set("synthetic_seed", std::to_string(synthetic.seed));
    kv.set("date_format", pipeline.date_format);
    kv.set("lags", join(pipeline.lags));
    kv.set("split_even", num(pipeline.even_store_fraction));
    kv.set("split_odd", num(pipeline.odd_store_fraction));
    if (!pipeline.fraction_overrides.empty()) {
        std::string overrides;
        for (const auto& [store, fraction] : pipeline.fraction_overrides) {
            if (!overrides.empty()) overrides += ',';
            overrides += std::to_string(store) + ':' + num(fraction);
        }
        kv.set("split_overrides", overrides);
    }
    return kv;
}

}  // namespace fedretail::orchestrator
