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

#include <bit>
#include <cstring>

#include <fedretail/model.hpp>

namespace fedretail::model {

namespace {

    template <typename T>
    void put_le(std::vector<std::uint8_t>& out, T value) {
        for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
    }

    template <typename T>
    T get_le(std::span<const std::uint8_t> bytes, std::size_t& at) {
        if (at + sizeof(T) > bytes.size()) throw Error{ErrorCode::kLengthMismatch, "truncated model snapshot"};
        T value = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[at + i]) << (8 * i);
        at += sizeof(T);
        return value;
    }

}  // namespace

std::vector<std::uint8_t> serialize_model(const MLPParams& params) {
    std::vector<std::uint8_t> out;
    const auto& arch = params.architecture();
    out.reserve(4 + 4 * arch.size() + 8 * params.size());
    put_le(out, static_cast<std::uint32_t>(arch.size()));
    for (const auto w : arch) put_le(out, static_cast<std::uint32_t>(w));
    for (const double v : params.flat()) put_le(out, std::bit_cast<std::uint64_t>(v));
    return out;
}

MLPParams deserialize_model(std::span<const std::uint8_t> bytes) {
    std::size_t at = 0;
    const auto count = get_le<std::uint32_t>(bytes, at);
    if (count > (bytes.size() - at) / 4) throw Error{ErrorCode::kLengthMismatch, "width count exceeds snapshot"};
    std::vector<std::size_t> widths;
    for (std::uint32_t i = 0; i < count; ++i) widths.push_back(get_le<std::uint32_t>(bytes, at));
    const std::size_t expected = parameter_count(widths);
    if ((bytes.size() - at) != expected * 8) {
        throw Error{ErrorCode::kLengthMismatch, "snapshot carries " + std::to_string((bytes.size() - at) / 8) +
                                                    " parameters, architecture needs " + std::to_string(expected)};
    }
    std::vector<double> flat(expected);
    for (auto& v : flat) v = std::bit_cast<double>(get_le<std::uint64_t>(bytes, at));
    return MLPParams{std::move(widths), std::move(flat)};
}

}  // namespace fedretail::model
