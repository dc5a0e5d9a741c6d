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
#include <fstream>
#include <sstream>

#include <fedretail/config.hpp>
#include <fedretail/errors.hpp>

namespace fedretail {

namespace {

    std::string_view trim(std::string_view s) {
        const auto first = s.find_first_not_of(" \t\r");
        if (first == std::string_view::npos) return {};
        const auto last = s.find_last_not_of(" \t\r");
        return s.substr(first, last - first + 1);
    }

    [[noreturn]] void bad_value(const std::string& key, const std::string& value) {
        throw Error{ErrorCode::kBadConfig, "key '" + key + "' has invalid value '" + value + "'"};
    }

    template <typename T>
    T parse_number(const std::string& key, const std::string& value) {
        T out{};
        const auto* end = value.data() + value.size();
        const auto [ptr, ec] = std::from_chars(value.data(), end, out);
        if (ec != std::errc{} || ptr != end) bad_value(key, value);
        return out;
    }

}  // namespace

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::kMalformedRow: return "MalformedRow";
        case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
        case ErrorCode::kDegenerateColumn: return "DegenerateColumn";
        case ErrorCode::kInsufficientHistory: return "InsufficientHistory";
        case ErrorCode::kEmptySplit: return "EmptySplit";
        case ErrorCode::kBadArchitecture: return "BadArchitecture";
        case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
        case ErrorCode::kEmptyInput: return "EmptyInput";
        case ErrorCode::kLengthMismatch: return "LengthMismatch";
        case ErrorCode::kModulusOverflowRisk: return "ModulusOverflowRisk";
        case ErrorCode::kMissingSeed: return "MissingSeed";
        case ErrorCode::kInsufficientShares: return "InsufficientShares";
        case ErrorCode::kDuplicateIndex: return "DuplicateIndex";
        case ErrorCode::kUnrecoverableDropout: return "UnrecoverableDropout";
        case ErrorCode::kNotFound: return "NotFound";
        case ErrorCode::kNonMonotoneRound: return "NonMonotoneRound";
        case ErrorCode::kNonMonotoneTimestamp: return "NonMonotoneTimestamp";
        case ErrorCode::kRoundNotAnchored: return "RoundNotAnchored";
        case ErrorCode::kEmptyClientData: return "EmptyClientData";
        case ErrorCode::kEmptyAggregation: return "EmptyAggregation";
        case ErrorCode::kZeroDemand: return "ZeroDemand";
        case ErrorCode::kZeroBaseline: return "ZeroBaseline";
        case ErrorCode::kAlertInconsistency: return "AlertInconsistency";
        case ErrorCode::kBadConfig: return "BadConfig";
        case ErrorCode::kIo: return "Io";
    }
    return "Unknown";
}

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
    KeyValueConfig cfg;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error{ErrorCode::kBadConfig, "line " + std::to_string(line_no) + ": expected key = value"};
        }
        const std::string key{trim(line.substr(0, eq))};
        if (key.empty()) {
            throw Error{ErrorCode::kBadConfig, "line " + std::to_string(line_no) + ": empty key"};
        }
        cfg.values_[key] = std::string{trim(line.substr(eq + 1))};
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
    std::ifstream in{path, std::ios::binary};
    if (!in) throw Error{ErrorCode::kIo, "cannot read config " + path};
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    const auto v = get(key);
    return v ? parse_number<double>(key, *v) : fallback;
}

std::int64_t KeyValueConfig::get_int(const std::string& key, std::int64_t fallback) const {
    const auto v = get(key);
    return v ? parse_number<std::int64_t>(key, *v) : fallback;
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto v = get(key);
    return v ? parse_number<std::uint64_t>(key, *v) : fallback;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
    if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
    bad_value(key, *v);
}

std::vector<std::int64_t> KeyValueConfig::get_int_list(const std::string& key,
                                                       const std::vector<std::int64_t>& fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    std::vector<std::int64_t> out;
    std::string_view rest{*v};
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string item{trim(rest.substr(0, comma))};
        if (!item.empty()) out.push_back(parse_number<std::int64_t>(key, item));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    return out;
}

}  // namespace fedretail
