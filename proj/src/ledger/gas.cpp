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

#include <fedretail/ledger.hpp>
#include <fedretail/tariff_presets.hpp>

namespace fedretail::ledger {

CostEstimate estimate_cost(const GasTariff& tariff, double n_tx, std::int64_t n_deploys, std::int64_t n_validations) {
    if (n_tx < 0.0 || n_deploys < 0 || n_validations < 0) {
        throw Error{ErrorCode::kBadConfig, "transaction, deploy and validation counts must be nonnegative"};
    }
    const double gwei = static_cast<double>(n_deploys) * tariff.deploy_gwei + n_tx * tariff.tx_gwei +
                        static_cast<double>(n_validations) * tariff.validation_gwei;
    return CostEstimate{gwei, gwei * kEthPerGwei};
}

namespace {

    std::string_view trim(std::string_view s) {
        const auto first = s.find_first_not_of(" \t\r");
        if (first == std::string_view::npos) return {};
        const auto last = s.find_last_not_of(" \t\r");
        return s.substr(first, last - first + 1);
    }

    double to_double(std::string_view s) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0.0) {
            throw Error{ErrorCode::kBadConfig, "bad tariff value '" + std::string{s} + "'"};
        }
        return v;
    }

}  // namespace

std::vector<GasTariff> parse_tariffs(std::string_view csv_text) {
    std::vector<GasTariff> tariffs;
    bool header = true;
    while (!csv_text.empty()) {
        const auto nl = csv_text.find('\n');
        const std::string_view line = trim(csv_text.substr(0, nl));
        csv_text = nl == std::string_view::npos ? std::string_view{} : csv_text.substr(nl + 1);
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string_view> f;
        std::string_view rest = line;
        while (true) {
            const auto comma = rest.find(',');
            f.push_back(trim(rest.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        if (f.size() != 6 && f.size() != 7) throw Error{ErrorCode::kBadConfig, "tariff row needs 6 or 7 fields"};
        GasTariff t{std::string{f[0]}, std::string{f[1]}, std::string{f[2]}, to_double(f[3]), to_double(f[4]),
                    to_double(f[5]), std::nullopt};
        if (f.size() == 7 && !f[6].empty()) t.reported_eth = to_double(f[6]);
        tariffs.push_back(std::move(t));
    }
    return tariffs;
}

const std::vector<GasTariff>& bundled_tariffs() {
    static const std::vector<GasTariff> tariffs = parse_tariffs(detail::kBundledTariffCsv);
    return tariffs;
}

const GasTariff& find_tariff(std::span<const GasTariff> tariffs, std::string_view name) {
    for (const auto& t : tariffs) {
        if (t.name == name) return t;
    }
    throw Error{ErrorCode::kNotFound, "no tariff named '" + std::string{name} + "'"};
}

GasReport gas_report(double n_tx, std::span<const GasTariff> tariffs, double complex_factor) {
    GasReport report{n_tx, complex_factor, {}};
    for (const auto& t : tariffs) {
        const CostEstimate base = estimate_cost(t, n_tx);
        report.rows.push_back(GasReportRow{
            t.name, base, CostEstimate{base.total_gwei * complex_factor, base.total_eth * complex_factor}});
    }
    return report;
}

GasReport gas_report(const Chain& chain, std::span<const GasTariff> tariffs, double complex_factor) {
    return gas_report(static_cast<double>(chain.transaction_count()), tariffs, complex_factor);
}

}  // namespace fedretail::ledger
