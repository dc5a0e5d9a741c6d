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
#include <numbers>
#include <random>

#include <fedretail/data.hpp>

namespace fedretail::data {

namespace {

    using std::chrono::days;
    using std::chrono::sys_days;

    // Friday week-ending dates the reference data flags as holiday weeks
    // (Super Bowl, Labor Day, Thanksgiving, Christmas).
    bool is_holiday_week(const Date& d) {
        const unsigned m = static_cast<unsigned>(d.month());
        const unsigned day = static_cast<unsigned>(d.day());
        switch (m) {
            case 2: return day >= 8 && day <= 14;
            case 9: return day >= 7 && day <= 13;
            case 11: return day >= 22 && day <= 28;
            case 12: return day >= 27;
            default: return false;
        }
    }

    // Shared retail calendar effect, as a relative deviation from 1: a
    // monthly profile plus bumps on the flagged holiday weeks.
    double calendar_effect(const Date& d) {
        static constexpr double kMonthly[12] = {-0.10, -0.03, 0.00, 0.01, 0.02, 0.03,
                                                0.01,  0.02,  -0.04, -0.02, 0.08, 0.32};
        const unsigned m = static_cast<unsigned>(d.month());
        double effect = kMonthly[m - 1];
        if (is_holiday_week(d)) {
            switch (m) {
                case 2: effect += 0.05; break;   // Super Bowl
                case 9: effect += 0.02; break;   // Labor Day
                case 11: effect += 0.30; break;  // Thanksgiving
                case 12: effect -= 0.30; break;  // week after Christmas
                default: break;
            }
        }
        return effect;
    }

}  // namespace

std::vector<StoreRecord> generate_synthetic(const SyntheticSpec& spec) {
    const sys_days start{std::chrono::year{2010} / std::chrono::February / 5};

    // Regional fuel price: one random walk shared by every store.
    std::seed_seq shared_seq{spec.seed, std::uint64_t{0}};
    std::mt19937_64 shared_rng{shared_seq};
    std::normal_distribution<double> fuel_step{0.004, 0.035};
    std::vector<double> fuel(static_cast<std::size_t>(spec.weeks));
    double price = 2.6;
    for (auto& f : fuel) {
        price = std::max(1.5, price + fuel_step(shared_rng));
        f = price;
    }

    std::vector<StoreRecord> records;
    records.reserve(static_cast<std::size_t>(spec.stores * spec.weeks));
    for (int s = 1; s <= spec.stores; ++s) {
        std::seed_seq seq{spec.seed, static_cast<std::uint64_t>(s)};
        std::mt19937_64 rng{seq};
        std::uniform_real_distribution<double> unit{0.0, 1.0};
        std::normal_distribution<double> gauss{0.0, 1.0};

        const double level = std::exp(std::log(3.0e5) + unit(rng) * (std::log(2.5e6) - std::log(3.0e5)));
        const double trend_per_year = 0.06 * gauss(rng);
        const double amplitude = 0.7 + 0.6 * unit(rng);
        const double noise = 0.025 + 0.02 * unit(rng);
        const double temp_mean = 40.0 + 35.0 * unit(rng);
        const double fuel_offset = -0.2 + 0.4 * unit(rng);
        const double cpi_base = 126.0 + 94.0 * unit(rng);
        double unemployment = 4.0 + 8.0 * unit(rng);

        for (int w = 0; w < spec.weeks; ++w) {
            const Date date{start + days{7 * w}};
            const double years = w / 52.0;
            const double doy = static_cast<double>(
                (sys_days{date} - sys_days{date.year() / std::chrono::January / 1}).count());

            if (w > 0 && w % 13 == 0) unemployment = std::max(2.0, unemployment + 0.15 * gauss(rng));

            StoreRecord r;
            r.store_id = s;
            r.date = date;
            r.holiday_flag = is_holiday_week(date);
            r.temperature = temp_mean - 20.0 * std::cos(2.0 * std::numbers::pi * (doy - 15.0) / 365.25) + 4.0 * gauss(rng);
            r.fuel_price = fuel[static_cast<std::size_t>(w)] + fuel_offset;
            r.cpi = cpi_base * (1.0 + 0.018 * years) + 0.05 * gauss(rng);
            r.unemployment = unemployment;

            const double seasonal = 1.0 + amplitude * calendar_effect(date);
            const double fuel_drag = 1.0 - 0.02 * (r.fuel_price - 3.0);
            const double sales = level * (1.0 + trend_per_year * years) * seasonal * fuel_drag * (1.0 + noise * gauss(rng));
            r.weekly_sales = std::max(0.0, std::round(sales * 100.0) / 100.0);
            records.push_back(r);
        }
    }
    return records;
}

}  // namespace fedretail::data
