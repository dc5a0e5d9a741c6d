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
#include <charconv>
#include <cmath>
#include <type_traits>
#include <string>

#include <fedretail/data.hpp>

namespace fedretail::data {

namespace {

    std::string_view trim(std::string_view s) {
        const auto first = s.find_first_not_of(" \t\r");
        if (first == std::string_view::npos) return {};
        const auto last = s.find_last_not_of(" \t\r");
        return s.substr(first, last - first + 1);
    }

    std::vector<std::string_view> split_fields(std::string_view line) {
        std::vector<std::string_view> out;
        while (true) {
            const auto comma = line.find(',');
            out.push_back(trim(line.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            line = line.substr(comma + 1);
        }
        return out;
    }

    bool parse_fixed_int(std::string_view text, std::size_t& pos, std::size_t max_digits, int& out) {
        std::size_t digits = 0;
        int value = 0;
        while (pos < text.size() && digits < max_digits && text[pos] >= '0' && text[pos] <= '9') {
            value = value * 10 + (text[pos] - '0');
            ++pos;
            ++digits;
        }
        out = value;
        return digits > 0;
    }

    template <typename T>
    bool parse_number(std::string_view text, T& out) {
        if (text.empty()) return false;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
        if (ec != std::errc{} || ptr != text.data() + text.size()) return false;
        if constexpr (std::is_floating_point_v<T>) return std::isfinite(out);
        return true;
    }

    void append_number(std::string& out, double v) {
        char buf[64];
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        out.append(buf, ptr);
    }

}  // namespace

bool parse_date(std::string_view text, std::string_view format, Date& out) {
    int day = -1;
    int month = -1;
    int year = -1;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < format.size(); ++f) {
        if (format[f] == '%' && f + 1 < format.size()) {
            const char spec = format[++f];
            bool ok = false;
            switch (spec) {
                case 'd': ok = parse_fixed_int(text, pos, 2, day); break;
                case 'm': ok = parse_fixed_int(text, pos, 2, month); break;
                case 'Y': ok = parse_fixed_int(text, pos, 4, year); break;
                default: return false;
            }
            if (!ok) return false;
        } else {
            if (pos >= text.size() || text[pos] != format[f]) return false;
            ++pos;
        }
    }
    if (pos != text.size() || day < 0 || month < 0 || year < 0) return false;
    const Date d{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                 std::chrono::day{static_cast<unsigned>(day)}};
    if (!d.ok()) return false;
    out = d;
    return true;
}

std::string format_date(const Date& date, std::string_view format) {
    std::string out;
    auto put = [&out](int v, int width) {
        std::string digits = std::to_string(v);
        if (static_cast<int>(digits.size()) < width) out.append(static_cast<std::size_t>(width) - digits.size(), '0');
        out += digits;
    };
    for (std::size_t f = 0; f < format.size(); ++f) {
        if (format[f] == '%' && f + 1 < format.size()) {
            switch (format[++f]) {
                case 'd': put(static_cast<int>(static_cast<unsigned>(date.day())), 2); break;
                case 'm': put(static_cast<int>(static_cast<unsigned>(date.month())), 2); break;
                case 'Y': put(static_cast<int>(date.year()), 4); break;
                default: out.push_back(format[f]); break;
            }
        } else {
            out.push_back(format[f]);
        }
    }
    return out;
}

std::vector<StoreRecord> parse_dataset(std::string_view csv_text, std::string_view date_format) {
    std::vector<StoreRecord> records;
    std::array<std::size_t, kSchemaColumns.size()> column_of{};
    bool have_header = false;
    std::size_t width = 0;
    std::size_t line_no = 0;

    std::string_view rest = csv_text;
    if (rest.starts_with("\xEF\xBB\xBF")) rest.remove_prefix(3);

    while (!rest.empty()) {
        const auto nl = rest.find('\n');
        const std::string_view line = trim(rest.substr(0, nl));
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
        ++line_no;
        if (line.empty()) continue;

        const auto fields = split_fields(line);
        if (!have_header) {
            for (std::size_t c = 0; c < kSchemaColumns.size(); ++c) {
                const auto it = std::find(fields.begin(), fields.end(), kSchemaColumns[c]);
                if (it == fields.end()) {
                    throw Error{ErrorCode::kSchemaMismatch, "missing column " + std::string{kSchemaColumns[c]}};
                }
                column_of[c] = static_cast<std::size_t>(it - fields.begin());
            }
            width = fields.size();
            have_header = true;
            continue;
        }

        if (fields.size() != width) {
            throw MalformedRowError{line_no, "expected " + std::to_string(width) + " fields, got " +
                                                 std::to_string(fields.size())};
        }
        auto field = [&](std::size_t c) { return fields[column_of[c]]; };

        StoreRecord r;
        int holiday = 0;
        if (!parse_number(field(0), r.store_id) || r.store_id < 1) throw MalformedRowError{line_no, "bad Store"};
        if (!parse_date(field(1), date_format, r.date)) throw MalformedRowError{line_no, "bad Date"};
        if (!parse_number(field(2), r.weekly_sales) || !(r.weekly_sales >= 0.0)) {
            throw MalformedRowError{line_no, "bad Weekly_Sales"};
        }
        if (!parse_number(field(3), holiday) || (holiday != 0 && holiday != 1)) {
            throw MalformedRowError{line_no, "bad Holiday_Flag"};
        }
        r.holiday_flag = holiday == 1;
        if (!parse_number(field(4), r.temperature)) throw MalformedRowError{line_no, "bad Temperature"};
        if (!parse_number(field(5), r.fuel_price)) throw MalformedRowError{line_no, "bad Fuel_Price"};
        if (!parse_number(field(6), r.cpi)) throw MalformedRowError{line_no, "bad CPI"};
        if (!parse_number(field(7), r.unemployment)) throw MalformedRowError{line_no, "bad Unemployment"};
        records.push_back(r);
    }
    if (!have_header) throw Error{ErrorCode::kSchemaMismatch, "no header row"};

    std::stable_sort(records.begin(), records.end(), [](const StoreRecord& a, const StoreRecord& b) {
        if (a.store_id != b.store_id) return a.store_id < b.store_id;
        return std::chrono::sys_days{a.date} < std::chrono::sys_days{b.date};
    });
    return records;
}

std::string write_dataset(std::span<const StoreRecord> records, std::string_view date_format) {
    std::string out;
    for (std::size_t c = 0; c < kSchemaColumns.size(); ++c) {
        if (c) out.push_back(',');
        out += kSchemaColumns[c];
    }
    out.push_back('\n');
    for (const auto& r : records) {
        out += std::to_string(r.store_id);
        out.push_back(',');
        out += format_date(r.date, date_format);
        out.push_back(',');
        append_number(out, r.weekly_sales);
        out += r.holiday_flag ? ",1," : ",0,";
        append_number(out, r.temperature);
        out.push_back(',');
        append_number(out, r.fuel_price);
        out.push_back(',');
        append_number(out, r.cpi);
        out.push_back(',');
        append_number(out, r.unemployment);
        out.push_back('\n');
    }
    return out;
}

}  // namespace fedretail::data
