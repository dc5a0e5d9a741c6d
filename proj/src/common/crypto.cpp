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

#include <memory>
#include <stdexcept>

#include <fedretail/crypto.hpp>
#include <openssl/evp.h>
#include <openssl/sha.h>

namespace fedretail::crypto {

Sha256Digest sha256(std::span<const std::uint8_t> data) {
    Sha256Digest out{};
    SHA256(data.data(), data.size(), out.data());
    return out;
}

Sha256Digest sha256(std::string_view data) {
    return sha256(std::span{reinterpret_cast<const std::uint8_t*>(data.data()), data.size()});
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (const std::uint8_t b : bytes) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

std::vector<std::uint8_t> aes_ctr_keystream(std::span<const std::uint8_t, 16> key, std::size_t length) {
    using CtxPtr = std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)>;
    CtxPtr ctx{EVP_CIPHER_CTX_new(), &EVP_CIPHER_CTX_free};
    if (!ctx) throw std::runtime_error{"EVP_CIPHER_CTX_new failed"};

    const std::array<std::uint8_t, 16> iv{};
    if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_ctr(), nullptr, key.data(), iv.data()) != 1) {
        throw std::runtime_error{"aes-128-ctr init failed"};
    }
    std::vector<std::uint8_t> zeros(length, 0);
    std::vector<std::uint8_t> out(length + 16);
    int written = 0;
    if (length > 0 &&
        EVP_EncryptUpdate(ctx.get(), out.data(), &written, zeros.data(), static_cast<int>(length)) != 1) {
        throw std::runtime_error{"aes-128-ctr update failed"};
    }
    out.resize(length);
    return out;
}

}  // namespace fedretail::crypto
