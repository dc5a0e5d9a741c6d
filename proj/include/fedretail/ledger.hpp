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

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <fedretail/errors.hpp>

namespace fedretail::ledger {

using Bytes = std::vector<std::uint8_t>;

// SHA-256 content identifier, 64 lowercase hex characters.
class Cid {
  public:
    Cid() = default;
    // Throws BadConfig unless `hex` is 64 lowercase hex characters.
    explicit Cid(std::string hex);

    [[nodiscard]] const std::string& hex() const noexcept { return hex_; }
    [[nodiscard]] bool empty() const noexcept { return hex_.empty(); }

    auto operator<=>(const Cid&) const = default;

  private:
    std::string hex_;
};

Cid cid_of(std::span<const std::uint8_t> blob);
bool is_hex_digest(std::string_view s);

// In-process stand-in for IPFS. Blobs are immutable and deduplicated by CID.
class ContentStore {
  public:
    Cid put(std::span<const std::uint8_t> blob);
    [[nodiscard]] const Bytes& get(const Cid& cid) const;  // throws NotFound
    [[nodiscard]] bool contains(const Cid& cid) const { return blobs_.contains(cid); }
    [[nodiscard]] std::size_t size() const noexcept { return blobs_.size(); }

    // Writes every blob as <dir>/<first-2-hex>/<full-hex>.
    void save(const std::filesystem::path& dir) const;

  private:
    std::map<Cid, Bytes> blobs_;
};

std::filesystem::path blob_path(const std::filesystem::path& cas_dir, const Cid& cid);
std::optional<Bytes> read_blob(const std::filesystem::path& cas_dir, const Cid& cid);

inline const std::string kZeroHash(64, '0');

struct BlockPayload {
    Cid cid;
    std::int64_t round{0};
    std::int64_t timestamp{0};
    std::string meta;
};

struct Block {
    std::uint64_t height{0};
    std::string prev_hash;
    BlockPayload payload;
    std::string block_hash;
};

// SHA-256 over u64 LE height, prev_hash, cid hex, i64 LE round, i64 LE
// timestamp, u32 LE meta length, meta bytes.
std::string compute_block_hash(std::uint64_t height, std::string_view prev_hash, const BlockPayload& payload);

// Append-only hash-linked chain anchoring one model CID per round.
class Chain {
  public:
    Chain() = default;
    explicit Chain(std::vector<Block> blocks) : blocks_{std::move(blocks)} {}

    // Throws NonMonotoneRound / NonMonotoneTimestamp.
    const Block& append_block(const Cid& cid, std::int64_t round, std::int64_t timestamp, std::string meta);

    [[nodiscard]] const std::vector<Block>& blocks() const noexcept { return blocks_; }
    [[nodiscard]] std::vector<Block>& mutable_blocks() noexcept { return blocks_; }
    [[nodiscard]] std::size_t size() const noexcept { return blocks_.size(); }
    [[nodiscard]] std::size_t transaction_count() const noexcept { return blocks_.size(); }
    [[nodiscard]] std::optional<Cid> anchor_for(std::int64_t round) const;

  private:
    std::vector<Block> blocks_;
};

enum class ModelVerdict {
    kValid,
    kAlertInconsistency,
};

// Throws RoundNotAnchored.
ModelVerdict verify_model(std::span<const std::uint8_t> blob, std::int64_t round, const Chain& chain);

struct ChainStatus {
    bool ok{true};
    std::uint64_t corrupt_at{0};
    std::string reason;
};

ChainStatus verify_chain(const Chain& chain);

// Line-delimited chain file: one compact JSON record per block with keys in
// the order height, prev_hash, cid, round, timestamp, meta, block_hash.
std::string serialize_block(const Block& block);
std::string serialize_chain(const Chain& chain);

struct ParsedChain {
    Chain chain;
    std::optional<std::uint64_t> malformed_at;  // first line that is not a canonical record
};

ParsedChain parse_chain(std::string_view text);

// ---------------------------------------------------------------------------
// Gas / cost meter

struct GasTariff {
    std::string name;
    std::string policy;
    std::string type;
    double deploy_gwei{0.0};
    double tx_gwei{0.0};
    double validation_gwei{0.0};
    std::optional<double> reported_eth;  // published overall cost, for reference
};

struct CostEstimate {
    double total_gwei{0.0};
    double total_eth{0.0};
};

inline constexpr double kEthPerGwei = 1e-9;
inline constexpr double kDefaultComplexFactor = 5.0;

CostEstimate estimate_cost(const GasTariff& tariff, double n_tx, std::int64_t n_deploys = 1,
                           std::int64_t n_validations = 1);

std::vector<GasTariff> parse_tariffs(std::string_view csv_text);
const std::vector<GasTariff>& bundled_tariffs();
const GasTariff& find_tariff(std::span<const GasTariff> tariffs, std::string_view name);

struct GasReportRow {
    std::string platform;
    CostEstimate baseline;
    CostEstimate complex;
};

struct GasReport {
    double n_tx{0.0};
    double complex_factor{kDefaultComplexFactor};
    std::vector<GasReportRow> rows;
};

GasReport gas_report(double n_tx, std::span<const GasTariff> tariffs, double complex_factor = kDefaultComplexFactor);
GasReport gas_report(const Chain& chain, std::span<const GasTariff> tariffs,
                     double complex_factor = kDefaultComplexFactor);

}  // namespace fedretail::ledger
