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
#include <initializer_list>
#include <random>
#include <vector>

namespace fedretail {

using Rng = std::mt19937_64;

// Independent, reproducible stream for (seed, tag...). Each tag names a
// purpose or owner (client slot, round, ...), so streams never depend on the
// order in which other streams were consumed.
inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    std::vector<std::uint32_t> words;
    words.reserve(2 * (tags.size() + 1));
    auto push = [&words](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(seed);
    for (const auto t : tags) push(t);
    std::seed_seq seq(words.begin(), words.end());
    return Rng{seq};
}

// Stream purposes.
namespace stream {
    inline constexpr std::uint64_t kLocalTraining = 1;
    inline constexpr std::uint64_t kSampling = 2;
    inline constexpr std::uint64_t kClientNoise = 3;
    inline constexpr std::uint64_t kGlobalNoise = 4;
    inline constexpr std::uint64_t kPairSeeds = 5;
    inline constexpr std::uint64_t kShamir = 6;
    inline constexpr std::uint64_t kDropouts = 7;
}  // namespace stream

}  // namespace fedretail
