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

#include <json.hpp>

#include <fedretail/orchestrator.hpp>

namespace fedretail::orchestrator {

namespace {

    using Json = nlohmann::ordered_json;

    // Stores above this reduction are flagged in the summary.
    constexpr double kHighlightReduction = 0.40;

    std::string num(double v) {
        char buf[64];
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, ptr);
    }

    Json cost_json(const ledger::CostEstimate& c) { return Json{{"gwei", c.total_gwei}, {"eth", c.total_eth}}; }

}  // namespace

std::string report_json(const ExperimentReport& report, const ExperimentConfig& config) {
    Json j;
    j["mse_units"] = "store-local normalized target";
    j["oe_definition"] = config.oe_mode == OeMode::kRelative ? "sum(max(0, pred - actual)) / sum(actual)"
                                                             : "sum(max(0, pred - actual)) / n";
    Json cfg = Json::object();
    const auto snapshot = config.snapshot();
    for (const auto& [k, v] : snapshot.entries()) cfg[k] = v;
    j["config"] = cfg;

    Json modes = Json::array();
    for (const auto& m : report.modes) {
        Json mj;
        mj["mode"] = to_string(m.mode);
        mj["mean_mse"] = m.mean_mse;
        mj["mean_oe"] = m.mean_oe;
        if (m.pooled_test_mse) mj["pooled_test_mse"] = *m.pooled_test_mse;
        Json stores = Json::array();
        for (const auto& s : m.stores) {
            stores.push_back(Json{{"store_id", s.store_id}, {"split_ratio", s.split_ratio}, {"mse", s.mse}, {"oe", s.oe}});
        }
        mj["stores"] = stores;
        modes.push_back(mj);
    }
    j["modes"] = modes;

    if (!report.store_waste.empty() || report.waste_reduction) {
        Json w;
        w["overall"] = report.waste_reduction ? Json(*report.waste_reduction) : Json(nullptr);
        Json stores = Json::array();
        for (const auto& s : report.store_waste) {
            Json sj{{"store_id", s.store_id}, {"split_ratio", s.split_ratio}};
            sj["reduction"] = s.reduction ? Json(*s.reduction) : Json(nullptr);
            sj["exceeds_40pct"] = s.reduction.has_value() && *s.reduction > kHighlightReduction;
            stores.push_back(sj);
        }
        w["stores"] = stores;
        j["waste_reduction"] = w;
    }

    Json gas;
    gas["n_tx"] = report.gas.n_tx;
    gas["complex_factor"] = report.gas.complex_factor;
    Json rows = Json::array();
    for (const auto& r : report.gas.rows) {
        rows.push_back(Json{{"platform", r.platform}, {"baseline", cost_json(r.baseline)}, {"complex", cost_json(r.complex)}});
    }
    gas["platforms"] = rows;
    j["gas"] = gas;
    return j.dump(2) + "\n";
}

std::string report_csv(const ExperimentReport& report) {
    std::string out = "mode,store_id,mse,oe\n";
    for (const auto& m : report.modes) {
        for (const auto& s : m.stores) {
            out += std::string{to_string(m.mode)} + ',' + std::to_string(s.store_id) + ',' + num(s.mse) + ',' + num(s.oe) + '\n';
        }
    }
    for (const auto& m : report.modes) {
        out += std::string{to_string(m.mode)} + ",mean," + num(m.mean_mse) + ',' + num(m.mean_oe) + '\n';
    }
    return out;
}

std::string rounds_log(std::span<const RoundReport> rounds) {
    std::string out;
    for (const auto& r : rounds) {
        Json j;
        j["round"] = r.round;
        j["participants"] = r.participants;
        j["dropped"] = r.dropped;
        j["cid"] = r.cid ? Json(*r.cid) : Json(nullptr);
        Json loss = Json::object();
        for (const auto& [id, v] : r.train_loss) loss[std::to_string(id)] = v;
        j["train_loss"] = loss;
        j["update_norm"] = r.update_norm;
        j["dp_applied"] = r.dp_applied;
        if (r.codec) {
            j["codec"] = Json{{"fractional_bits", r.codec->fractional_bits},
                              {"modulus", r.codec->modulus},
                              {"clamp_range", r.codec->clamp_range}};
        }
        j["gas_gwei"] = r.gas_gwei;
        out += j.dump();
        out.push_back('\n');
    }
    return out;
}

}  // namespace fedretail::orchestrator
