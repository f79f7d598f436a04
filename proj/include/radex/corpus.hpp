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

#ifndef RADEX_CORPUS_HPP_
#define RADEX_CORPUS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radex/cas.hpp"

// Report pre-processing: encoding repair, tokenization, deduplication,
// stratified sampling, token statistics and the sealed on-disk container.
namespace radex::corpus {

struct ReportRecord {
  std::string report_id;
  std::string text;
  std::string class_label;
  std::map<std::string, std::string> metadata;

  friend bool operator==(const ReportRecord&, const ReportRecord&) = default;
};

using Corpus = std::vector<ReportRecord>;

// One JSON object per line. Throws MalformedInput, including on duplicate
// report ids.
Corpus parse_jsonl(std::string_view bytes);
std::string to_jsonl(const Corpus& corpus);

struct FixResult {
  std::string text;
  bool repaired = false;
};

// Undoes UTF-8 text that was decoded as cp1252 / Latin-1. A repair is kept
// only when it strictly lowers the number of suspicious sequences, and is
// repeated until it no longer does (so the function is idempotent).
FixResult fix_encoding(std::string_view text);
// Number of character runs that re-encode under cp1252 to a valid multi-byte
// UTF-8 sequence.
std::size_t count_mojibake(std::u32string_view text);

struct Token {
  std::string surface;
  cas::SpanOffset span;  // code points into the source text

  friend bool operator==(const Token&, const Token&) = default;
};

// Whitespace split, then leading and trailing punctuation characters become
// tokens of their own. Inner punctuation ("1,5", "BI-RADS") stays.
std::vector<Token> tokenize(std::u32string_view text);
std::vector<Token> tokenize(std::string_view utf8);

struct DedupResult {
  Corpus corpus;
  std::vector<std::string> removed_ids;
};

// Keeps the first record per whitespace-collapsed text (case preserved).
DedupResult deduplicate(const Corpus& corpus);

// Largest-remainder allocation of n over class sizes; ties in the remainder
// go to the lexicographically smaller class label.
std::map<std::string, std::size_t> allocate_quotas(
    const std::map<std::string, std::size_t>& class_sizes, std::size_t n);

// Throws SampleTooLarge unless 1 <= n <= corpus.size(). Output keeps corpus
// order. Deterministic for equal (corpus, n, seed).
Corpus stratified_sample(const Corpus& corpus, std::size_t n, std::uint64_t seed);

struct CorpusStats {
  std::size_t documents = 0;
  std::size_t tokens = 0;
  std::size_t types = 0;
  std::size_t min_tokens = 0;
  double mean_tokens = 0.0;
  std::size_t max_tokens = 0;
  std::map<std::string, std::size_t> per_class;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

// OpenMP over documents.
CorpusStats corpus_stats(const Corpus& corpus);
std::string stats_to_json(const CorpusStats& stats);

// Serial implementations kept as test oracles and benchmark baselines.
namespace reference {
CorpusStats corpus_stats(const Corpus& corpus);
}  // namespace reference

// --- sealed container ---------------------------------------------------------

inline constexpr std::array<std::uint8_t, 4> kSealMagic = {'R', 'D', 'X', 'C'};
inline constexpr std::uint8_t kSealVersion = 1;
inline constexpr std::size_t kSaltBytes = 16;
inline constexpr std::size_t kNonceBytes = 24;

// Layout: magic | version | salt | nonce | ciphertext (JSON-lines corpus,
// XChaCha20-Poly1305, header bytes as associated data, key from Argon2id).
struct SealedCorpus {
  std::uint8_t version = kSealVersion;
  std::array<std::uint8_t, kSaltBytes> salt{};
  std::array<std::uint8_t, kNonceBytes> nonce{};
  std::vector<std::uint8_t> ciphertext;

  std::vector<std::uint8_t> to_bytes() const;
  // Throws MalformedContainer.
  static SealedCorpus from_bytes(std::span<const std::uint8_t> bytes);
};

// Throws MalformedInput on an empty key.
SealedCorpus seal_corpus(const Corpus& corpus, std::string_view key);
// Throws AuthenticationFailure (wrong key, tampering) or MalformedContainer.
// Nothing is decoded unless authentication succeeds.
Corpus open_corpus(const SealedCorpus& sealed, std::string_view key);

}  // namespace radex::corpus

#endif  // RADEX_CORPUS_HPP_
