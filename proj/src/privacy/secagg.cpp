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

#include <fedretail/kernels.hpp>
#include <fedretail/privacy.hpp>

namespace fedretail::privacy {

const std::vector<ClientId>& NeighborGraph::of(ClientId id) const {
    const auto it = neighbors.find(id);
    if (it == neighbors.end()) throw Error{ErrorCode::kNotFound, "client " + std::to_string(id) + " not in graph"};
    return it->second;
}

NeighborGraph build_neighbor_graph(std::vector<ClientId> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    NeighborGraph g;
    const std::size_t n = members.size();
    g.degree = n == 0 ? 0 : std::min<std::size_t>(n - 1, 6);
    g.threshold = g.degree / 2 + 1;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<ClientId> adj;
        if (n - 1 <= 6) {
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) adj.push_back(members[j]);
            }
        } else {
            // ring (+-1) plus chords (+-2, +-3)
            for (std::size_t off = 1; off <= 3; ++off) {
                adj.push_back(members[(i + off) % n]);
                adj.push_back(members[(i + n - off) % n]);
            }
            std::sort(adj.begin(), adj.end());
        }
        g.neighbors.emplace(members[i], std::move(adj));
    }
    g.members = std::move(members);
    return g;
}

MaskedUpdate mask_update(ClientId client_id, std::span<const double> update, std::span<const ClientId> neighbors,
                         const std::map<ClientId, FieldElement>& seeds, std::int64_t round,
                         const FixedPointCodec& codec, std::size_t n_k) {
    MaskedUpdate out{client_id, round, encode(update, codec), n_k};
    for (const ClientId j : neighbors) {
        const auto it = seeds.find(j);
        if (it == seeds.end()) {
            throw Error{ErrorCode::kMissingSeed,
                        "client " + std::to_string(client_id) + " has no seed with " + std::to_string(j)};
        }
        const auto m = derive_pairwise_mask(it->second, round, update.size(), codec);
        if (client_id < j) {
            kernels::field_add(out.masked, m, codec.modulus);
        } else {
            kernels::field_sub(out.masked, m, codec.modulus);
        }
    }
    return out;
}

std::vector<double> unmask_aggregate(std::span<const MaskedUpdate> masked_updates, const std::set<ClientId>& survivors,
                                     std::span<const RecoveredSeed> recovered, const NeighborGraph& graph,
                                     const FixedPointCodec& codec) {
    if (masked_updates.empty()) throw Error{ErrorCode::kEmptyAggregation, "no masked updates delivered"};
    const std::size_t length = masked_updates.front().masked.size();
    const std::int64_t round = masked_updates.front().round;

    std::vector<FieldElement> sum(length, 0);
    std::size_t summands = 0;
    for (const auto& u : masked_updates) {
        if (!survivors.contains(u.client_id)) continue;
        if (u.masked.size() != length) throw Error{ErrorCode::kLengthMismatch, "masked updates differ in length"};
        kernels::field_add(sum, u.masked, codec.modulus);
        ++summands;
    }
    if (summands == 0) throw Error{ErrorCode::kEmptyAggregation, "no surviving updates"};

    std::map<std::pair<ClientId, ClientId>, FieldElement> by_pair;
    for (const auto& r : recovered) by_pair[{r.dropped, r.survivor}] = r.seed;

    // Every survivor still carries its half of each mask shared with a
    // dropped neighbor; regenerate and strip it.
    for (const ClientId j : survivors) {
        for (const ClientId i : graph.of(j)) {
            if (survivors.contains(i)) continue;
            const auto it = by_pair.find({i, j});
            if (it == by_pair.end()) {
                throw Error{ErrorCode::kUnrecoverableDropout, "seed between dropped client " + std::to_string(i) +
                                                                  " and " + std::to_string(j) + " not recovered"};
            }
            const auto m = derive_pairwise_mask(it->second, round, length, codec);
            if (j < i) {
                kernels::field_sub(sum, m, codec.modulus);
            } else {
                kernels::field_add(sum, m, codec.modulus);
            }
        }
    }
    return decode(sum, codec, summands);
}

SecureAggregationRound::SecureAggregationRound(std::vector<ClientId> members, std::uint64_t run_seed,
                                               std::int64_t round, FixedPointCodec codec)
    : graph_{build_neighbor_graph(std::move(members))}, run_seed_{run_seed}, round_{round}, codec_{codec} {
    codec_.validate();
    for (const ClientId i : graph_.members) {
        const auto& holders = graph_.of(i);
        auto rng = make_stream(run_seed_, {stream::kShamir, static_cast<std::uint64_t>(round_), i});
        for (const ClientId peer : holders) {
            const auto pieces = shamir_share(pair_seed(i, peer), holders.size(), graph_.threshold, codec_.modulus, rng);
            for (std::size_t h = 0; h < holders.size(); ++h) shares_.push_back(SeedShare{i, peer, holders[h], pieces[h]});
        }
    }
}

FieldElement SecureAggregationRound::pair_seed(ClientId a, ClientId b) const {
    const ClientId lo = std::min(a, b);
    const ClientId hi = std::max(a, b);
    auto rng = make_stream(run_seed_, {stream::kPairSeeds, lo, hi});
    std::uniform_int_distribution<FieldElement> dist{0, codec_.modulus - 1};
    return dist(rng);
}

std::map<ClientId, FieldElement> SecureAggregationRound::seeds_of(ClientId id) const {
    std::map<ClientId, FieldElement> seeds;
    for (const ClientId j : graph_.of(id)) seeds.emplace(j, pair_seed(id, j));
    return seeds;
}

MaskedUpdate SecureAggregationRound::mask(ClientId id, std::span<const double> update, std::size_t n_k) const {
    return mask_update(id, update, graph_.of(id), seeds_of(id), round_, codec_, n_k);
}

std::vector<RecoveredSeed> SecureAggregationRound::recover(const std::set<ClientId>& survivors) const {
    std::vector<RecoveredSeed> out;
    for (const ClientId i : graph_.members) {
        if (survivors.contains(i)) continue;
        for (const ClientId j : graph_.of(i)) {
            if (!survivors.contains(j)) continue;
            std::vector<ShamirShare> collected;
            for (const auto& s : shares_) {
                if (s.issuer == i && s.peer == j && survivors.contains(s.holder)) collected.push_back(s.share);
            }
            if (collected.size() < graph_.threshold) {
                throw Error{ErrorCode::kUnrecoverableDropout,
                            "client " + std::to_string(i) + " dropped; only " + std::to_string(collected.size()) +
                                " of " + std::to_string(graph_.threshold) + " shares survive"};
            }
            out.push_back(RecoveredSeed{i, j, shamir_reconstruct(collected, graph_.threshold, codec_.modulus)});
        }
    }
    return out;
}

std::vector<double> SecureAggregationRound::aggregate(std::span<const MaskedUpdate> delivered) const {
    std::set<ClientId> survivors;
    for (const auto& u : delivered) survivors.insert(u.client_id);
    const auto recovered = recover(survivors);
    return unmask_aggregate(delivered, survivors, recovered, graph_, codec_);
}

}  // namespace fedretail::privacy
