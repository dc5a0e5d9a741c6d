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

#include <json.hpp>

#include <fedretail/crypto.hpp>
#include <fedretail/ledger.hpp>

namespace fedretail::ledger {

namespace {

    template <typename T>
    void put_le(std::vector<std::uint8_t>& out, T value) {
        const auto u = static_cast<std::make_unsigned_t<T>>(value);
        for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
    }

    void put_text(std::vector<std::uint8_t>& out, std::string_view s) { out.insert(out.end(), s.begin(), s.end()); }

}  // namespace

std::string compute_block_hash(std::uint64_t height, std::string_view prev_hash, const BlockPayload& payload) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(8 + 64 + 64 + 8 + 8 + 4 + payload.meta.size());
    put_le(bytes, height);
    put_text(bytes, prev_hash);
    put_text(bytes, payload.cid.hex());
    put_le(bytes, payload.round);
    put_le(bytes, payload.timestamp);
    put_le(bytes, static_cast<std::uint32_t>(payload.meta.size()));
    put_text(bytes, payload.meta);
    return crypto::to_hex(crypto::sha256(bytes));
}

const Block& Chain::append_block(const Cid& cid, std::int64_t round, std::int64_t timestamp, std::string meta) {
    if (!blocks_.empty()) {
        const Block& head = blocks_.back();
        if (round <= head.payload.round) {
            throw Error{ErrorCode::kNonMonotoneRound, "round " + std::to_string(round) + " after round " +
                                                          std::to_string(head.payload.round)};
        }
        if (timestamp < head.payload.timestamp) {
            throw Error{ErrorCode::kNonMonotoneTimestamp, "timestamp " + std::to_string(timestamp) + " before " +
                                                              std::to_string(head.payload.timestamp)};
        }
    }
    Block block;
    block.height = blocks_.size();
    block.prev_hash = blocks_.empty() ? kZeroHash : blocks_.back().block_hash;
    block.payload = BlockPayload{cid, round, timestamp, std::move(meta)};
    block.block_hash = compute_block_hash(block.height, block.prev_hash, block.payload);
    blocks_.push_back(std::move(block));
    return blocks_.back();
}

std::optional<Cid> Chain::anchor_for(std::int64_t round) const {
    for (const auto& b : blocks_) {
        if (b.payload.round == round) return b.payload.cid;
    }
    return std::nullopt;
}

ModelVerdict verify_model(std::span<const std::uint8_t> blob, std::int64_t round, const Chain& chain) {
    const auto anchored = chain.anchor_for(round);
    if (!anchored) throw Error{ErrorCode::kRoundNotAnchored, "round " + std::to_string(round) + " has no anchor"};
    return cid_of(blob) == *anchored ? ModelVerdict::kValid : ModelVerdict::kAlertInconsistency;
}

ChainStatus verify_chain(const Chain& chain) {
    std::string expected_prev = kZeroHash;
    for (std::size_t i = 0; i < chain.blocks().size(); ++i) {
        const Block& b = chain.blocks()[i];
        auto corrupt = [&](std::string reason) { return ChainStatus{false, static_cast<std::uint64_t>(i), std::move(reason)}; };
        if (b.height != i) return corrupt("height is not contiguous");
        if (b.prev_hash != expected_prev) return corrupt("prev_hash does not link to the previous block");
        if (compute_block_hash(b.height, b.prev_hash, b.payload) != b.block_hash) return corrupt("block_hash mismatch");
        if (i > 0) {
            const Block& prev = chain.blocks()[i - 1];
            if (b.payload.round <= prev.payload.round) return corrupt("round is not increasing");
            if (b.payload.timestamp < prev.payload.timestamp) return corrupt("timestamp goes backwards");
        }
        expected_prev = b.block_hash;
    }
    return ChainStatus{};
}

std::string serialize_block(const Block& block) {
    nlohmann::ordered_json j;
    j["height"] = block.height;
    j["prev_hash"] = block.prev_hash;
    j["cid"] = block.payload.cid.hex();
    j["round"] = block.payload.round;
    j["timestamp"] = block.payload.timestamp;
    j["meta"] = block.payload.meta;
    j["block_hash"] = block.block_hash;
    return j.dump();
}

std::string serialize_chain(const Chain& chain) {
    std::string out;
    for (const auto& b : chain.blocks()) {
        out += serialize_block(b);
        out.push_back('\n');
    }
    return out;
}

ParsedChain parse_chain(std::string_view text) {
    ParsedChain parsed;
    std::vector<Block> blocks;
    std::uint64_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        if (nl == std::string_view::npos) {
            // every record must be newline terminated
            parsed.malformed_at = line_no;
            break;
        }
        const std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl + 1);
        try {
            const auto j = nlohmann::ordered_json::parse(line);
            Block b;
            b.height = j.at("height").get<std::uint64_t>();
            b.prev_hash = j.at("prev_hash").get<std::string>();
            b.payload.cid = Cid{j.at("cid").get<std::string>()};
            b.payload.round = j.at("round").get<std::int64_t>();
            b.payload.timestamp = j.at("timestamp").get<std::int64_t>();
            b.payload.meta = j.at("meta").get<std::string>();
            b.block_hash = j.at("block_hash").get<std::string>();
            // Only the canonical byte form is accepted, so any edit to a
            // record is visible even where JSON would tolerate it.
            if (serialize_block(b) != line) throw std::runtime_error{"non-canonical record"};
            blocks.push_back(std::move(b));
        } catch (const std::exception&) {
            parsed.malformed_at = line_no;
            break;
        }
        ++line_no;
    }
    parsed.chain = Chain{std::move(blocks)};
    return parsed;
}

}  // namespace fedretail::ledger
