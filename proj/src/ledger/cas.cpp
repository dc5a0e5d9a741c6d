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

#include <fstream>

#include <fedretail/crypto.hpp>
#include <fedretail/ledger.hpp>

namespace fedretail::ledger {

bool is_hex_digest(std::string_view s) {
    if (s.size() != 64) return false;
    for (const char c : s) {
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
    }
    return true;
}

Cid::Cid(std::string hex) : hex_{std::move(hex)} {
    if (!is_hex_digest(hex_)) throw Error{ErrorCode::kBadConfig, "not a sha-256 hex digest: " + hex_};
}

Cid cid_of(std::span<const std::uint8_t> blob) { return Cid{crypto::to_hex(crypto::sha256(blob))}; }

Cid ContentStore::put(std::span<const std::uint8_t> blob) {
    Cid cid = cid_of(blob);
    blobs_.try_emplace(cid, blob.begin(), blob.end());
    return cid;
}

const Bytes& ContentStore::get(const Cid& cid) const {
    const auto it = blobs_.find(cid);
    if (it == blobs_.end()) throw Error{ErrorCode::kNotFound, "no blob for cid " + cid.hex()};
    return it->second;
}

std::filesystem::path blob_path(const std::filesystem::path& cas_dir, const Cid& cid) {
    return cas_dir / cid.hex().substr(0, 2) / cid.hex();
}

void ContentStore::save(const std::filesystem::path& dir) const {
    for (const auto& [cid, blob] : blobs_) {
        const auto path = blob_path(dir, cid);
        std::filesystem::create_directories(path.parent_path());
        std::ofstream out{path, std::ios::binary | std::ios::trunc};
        out.write(reinterpret_cast<const char*>(blob.data()), static_cast<std::streamsize>(blob.size()));
        if (!out) throw Error{ErrorCode::kIo, "cannot write " + path.string()};
    }
}

std::optional<Bytes> read_blob(const std::filesystem::path& cas_dir, const Cid& cid) {
    std::ifstream in{blob_path(cas_dir, cid), std::ios::binary};
    if (!in) return std::nullopt;
    return Bytes{std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
}

}  // namespace fedretail::ledger
