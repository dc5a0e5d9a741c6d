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
#include <map>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include <fedretail/errors.hpp>
#include <fedretail/rng.hpp>

namespace fedretail::privacy {

// ---------------------------------------------------------------------------
// Clipping and Gaussian noise

enum class ClipMode {
    kNone,
    kElementwise,  // clamp every coordinate into [-C, C]
    kNorm,         // rescale so the L2 norm is at most C
};

enum class NoisePoint {
    kPerClient,
    kGlobal,
};

struct DPConfig {
    ClipMode clip_mode{ClipMode::kElementwise};
    double clip_threshold{1.0};
    double noise_std{0.01};
    NoisePoint noise_point{NoisePoint::kGlobal};

    void validate() const;
};

std::vector<double> clip_gradient(std::span<const double> grad, double threshold);
std::vector<double> clip_gradient_norm(std::span<const double> grad, double threshold);
std::vector<double> apply_clipping(std::span<const double> grad, const DPConfig& config);

// i.i.d. N(0, sigma^2) per coordinate; sigma == 0 returns the input untouched
// and draws nothing from rng.
std::vector<double> add_gaussian_noise(std::span<const double> v, double sigma, Rng& rng);

// ---------------------------------------------------------------------------
// Prime field and fixed-point codec

using FieldElement = std::uint64_t;

inline constexpr FieldElement kMersenne61 = (FieldElement{1} << 61) - 1;

FieldElement field_add(FieldElement a, FieldElement b, FieldElement p);
FieldElement field_sub(FieldElement a, FieldElement b, FieldElement p);
FieldElement field_mul(FieldElement a, FieldElement b, FieldElement p);
FieldElement field_inv(FieldElement a, FieldElement p);

bool is_prime(std::uint64_t n);

struct FixedPointCodec {
    int fractional_bits{16};
    FieldElement modulus{kMersenne61};
    double clamp_range{1048576.0};  // 2^20

    void validate() const;
    // Throws ModulusOverflowRisk when n summands could wrap past p/2.
    void check_capacity(std::size_t n_summands) const;
    [[nodiscard]] double resolution() const;  // 2^-f
};

// Values beyond +-clamp_range are clamped before encoding.
std::vector<FieldElement> encode(std::span<const double> values, const FixedPointCodec& codec);
std::vector<double> decode(std::span<const FieldElement> values, const FixedPointCodec& codec, std::size_t n_summands);

// ---------------------------------------------------------------------------
// Pairwise masks and Shamir sharing

using ClientId = std::uint32_t;

// Counter-mode PRF keyed by (seed, round): AES-128-CTR under
// SHA-256(seed || round), each 8-byte block reduced mod p.
std::vector<FieldElement> derive_pairwise_mask(FieldElement seed, std::int64_t round, std::size_t length,
                                               const FixedPointCodec& codec);

struct ShamirShare {
    std::uint64_t index{0};  // evaluation point, >= 1
    FieldElement value{0};
};

std::vector<ShamirShare> shamir_share(FieldElement secret, std::size_t n, std::size_t threshold, FieldElement p,
                                      Rng& rng);
// Lagrange interpolation at zero over the first `threshold` shares.
FieldElement shamir_reconstruct(std::span<const ShamirShare> shares, std::size_t threshold, FieldElement p);

// Share of the seed that `issuer` agreed with `peer`, held by `holder`.
struct SeedShare {
    ClientId issuer{0};
    ClientId peer{0};
    ClientId holder{0};
    ShamirShare share;
};

// Sparse masking graph: ring plus chords over the sorted member list, degree
// k = min(n - 1, 6), Shamir threshold t = floor(k / 2) + 1.
struct NeighborGraph {
    std::vector<ClientId> members;
    std::map<ClientId, std::vector<ClientId>> neighbors;
    std::size_t degree{0};
    std::size_t threshold{1};

    [[nodiscard]] const std::vector<ClientId>& of(ClientId id) const;
};

NeighborGraph build_neighbor_graph(std::vector<ClientId> members);

struct MaskedUpdate {
    ClientId client_id{0};
    std::int64_t round{0};
    std::vector<FieldElement> masked;
    std::size_t n_k{0};
};

// masked = encode(update) + sum_{j > i} mask(i, j) - sum_{j < i} mask(i, j)
MaskedUpdate mask_update(ClientId client_id, std::span<const double> update, std::span<const ClientId> neighbors,
                         const std::map<ClientId, FieldElement>& seeds, std::int64_t round,
                         const FixedPointCodec& codec, std::size_t n_k);

struct RecoveredSeed {
    ClientId dropped{0};
    ClientId survivor{0};
    FieldElement seed{0};
};

// Sums the survivors' masked vectors, strips masks shared with dropped
// clients using the recovered seeds, and decodes the plain sum.
std::vector<double> unmask_aggregate(std::span<const MaskedUpdate> masked_updates, const std::set<ClientId>& survivors,
                                     std::span<const RecoveredSeed> recovered, const NeighborGraph& graph,
                                     const FixedPointCodec& codec);

// One round of the protocol as the orchestrator runs it: pairwise seeds,
// share distribution, masking, dropout recovery and unmasking.
class SecureAggregationRound {
  public:
    SecureAggregationRound(std::vector<ClientId> members, std::uint64_t run_seed, std::int64_t round,
                           FixedPointCodec codec);

    [[nodiscard]] const NeighborGraph& graph() const noexcept { return graph_; }
    [[nodiscard]] const std::vector<SeedShare>& shares() const noexcept { return shares_; }
    [[nodiscard]] const FixedPointCodec& codec() const noexcept { return codec_; }

    // Seeds client `id` holds, keyed by neighbor.
    [[nodiscard]] std::map<ClientId, FieldElement> seeds_of(ClientId id) const;

    [[nodiscard]] MaskedUpdate mask(ClientId id, std::span<const double> update, std::size_t n_k) const;

    // Reconstructs every seed a dropped client shared with a survivor from
    // the survivors' shares. Throws UnrecoverableDropout below threshold.
    [[nodiscard]] std::vector<RecoveredSeed> recover(const std::set<ClientId>& survivors) const;

    [[nodiscard]] std::vector<double> aggregate(std::span<const MaskedUpdate> delivered) const;

  private:
    [[nodiscard]] FieldElement pair_seed(ClientId a, ClientId b) const;

    NeighborGraph graph_;
    std::uint64_t run_seed_;
    std::int64_t round_;
    FixedPointCodec codec_;
    std::vector<SeedShare> shares_;
};

}  // namespace fedretail::privacy
