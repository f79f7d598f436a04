// Copyright 2026 The RadEx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sodium.h>

#include <algorithm>
#include <cstring>

#include "radex/corpus.hpp"
#include "radex/error.hpp"

namespace radex::corpus {

namespace {

constexpr std::size_t kHeaderBytes = kSealMagic.size() + 1 + kSaltBytes + kNonceBytes;
static_assert(kSaltBytes == crypto_pwhash_SALTBYTES);
static_assert(kNonceBytes == crypto_aead_xchacha20poly1305_ietf_NPUBBYTES);

void ensure_sodium() {
  if (sodium_init() < 0) throw Error(ErrorCode::Io, "libsodium failed to initialize");
}

// Zeroed on destruction.
struct SecretKey {
  std::array<unsigned char, crypto_aead_xchacha20poly1305_ietf_KEYBYTES> bytes{};
  ~SecretKey() { sodium_memzero(bytes.data(), bytes.size()); }
};

void derive_key(std::string_view passphrase, const std::array<std::uint8_t, kSaltBytes>& salt,
                SecretKey& key) {
  if (crypto_pwhash(key.bytes.data(), key.bytes.size(), passphrase.data(), passphrase.size(),
                    salt.data(), crypto_pwhash_OPSLIMIT_INTERACTIVE,
                    crypto_pwhash_MEMLIMIT_INTERACTIVE, crypto_pwhash_ALG_ARGON2ID13) != 0) {
    throw Error(ErrorCode::Io, "key derivation ran out of memory");
  }
}

std::vector<std::uint8_t> header_bytes(const SealedCorpus& s) {
  std::vector<std::uint8_t> h(kSealMagic.begin(), kSealMagic.end());
  h.push_back(s.version);
  h.insert(h.end(), s.salt.begin(), s.salt.end());
  h.insert(h.end(), s.nonce.begin(), s.nonce.end());
  return h;
}

}  // namespace

std::vector<std::uint8_t> SealedCorpus::to_bytes() const {
  auto out = header_bytes(*this);
  out.insert(out.end(), ciphertext.begin(), ciphertext.end());
  return out;
}

SealedCorpus SealedCorpus::from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes + crypto_aead_xchacha20poly1305_ietf_ABYTES) {
    throw Error(ErrorCode::MalformedContainer, "sealed corpus is truncated");
  }
  if (!std::equal(kSealMagic.begin(), kSealMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::MalformedContainer, "not a sealed corpus (bad magic bytes)");
  }
  SealedCorpus s;
  s.version = bytes[kSealMagic.size()];
  if (s.version != kSealVersion) {
    throw Error(ErrorCode::MalformedContainer,
                "unsupported container version " + std::to_string(s.version));
  }
  auto it = bytes.begin() + kSealMagic.size() + 1;
  std::copy_n(it, kSaltBytes, s.salt.begin());
  it += kSaltBytes;
  std::copy_n(it, kNonceBytes, s.nonce.begin());
  it += kNonceBytes;
  s.ciphertext.assign(it, bytes.end());
  return s;
}

SealedCorpus seal_corpus(const Corpus& corpus, std::string_view key) {
  if (key.empty()) throw Error(ErrorCode::MalformedInput, "encryption key must be nonempty");
  ensure_sodium();
  SealedCorpus s;
  randombytes_buf(s.salt.data(), s.salt.size());
  randombytes_buf(s.nonce.data(), s.nonce.size());
  SecretKey k;
  derive_key(key, s.salt, k);

  const std::string plain = to_jsonl(corpus);
  const auto ad = header_bytes(s);
  s.ciphertext.resize(plain.size() + crypto_aead_xchacha20poly1305_ietf_ABYTES);
  unsigned long long written = 0;
  crypto_aead_xchacha20poly1305_ietf_encrypt(
      s.ciphertext.data(), &written, reinterpret_cast<const unsigned char*>(plain.data()),
      plain.size(), ad.data(), ad.size(), nullptr, s.nonce.data(), k.bytes.data());
  s.ciphertext.resize(written);
  return s;
}

Corpus open_corpus(const SealedCorpus& sealed, std::string_view key) {
  if (key.empty()) throw Error(ErrorCode::MalformedInput, "decryption key must be nonempty");
  if (sealed.version != kSealVersion) {
    throw Error(ErrorCode::MalformedContainer, "unsupported container version");
  }
  if (sealed.ciphertext.size() < crypto_aead_xchacha20poly1305_ietf_ABYTES) {
    throw Error(ErrorCode::MalformedContainer, "ciphertext is truncated");
  }
  ensure_sodium();
  SecretKey k;
  derive_key(key, sealed.salt, k);
  const auto ad = header_bytes(sealed);
  std::string plain(sealed.ciphertext.size() - crypto_aead_xchacha20poly1305_ietf_ABYTES, '\0');
  unsigned long long written = 0;
  if (crypto_aead_xchacha20poly1305_ietf_decrypt(
          reinterpret_cast<unsigned char*>(plain.data()), &written, nullptr,
          sealed.ciphertext.data(), sealed.ciphertext.size(), ad.data(), ad.size(),
          sealed.nonce.data(), k.bytes.data()) != 0) {
    throw Error(ErrorCode::AuthenticationFailure,
                "authentication failed: wrong key or tampered container");
  }
  plain.resize(written);
  try {
    return parse_jsonl(plain);
  } catch (const Error& e) {
    sodium_memzero(plain.data(), plain.size());
    throw Error(ErrorCode::MalformedContainer, std::string("decrypted payload is invalid: ") + e.what());
  }
}

}  // namespace radex::corpus
