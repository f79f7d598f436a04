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

#ifndef RADEX_EXTRACTION_HPP_
#define RADEX_EXTRACTION_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radex/cas.hpp"
#include "radex/schema.hpp"

// The extraction contract shared by every model, the rule/gazetteer baseline,
// phrase-based pre-annotation and the remote inference client.
namespace radex::extraction {

struct ExtractedModifier {
  std::string modifier_id;
  cas::SpanOffset span;
  std::optional<double> confidence;

  friend bool operator==(const ExtractedModifier&, const ExtractedModifier&) = default;
};

struct ExtractedFact {
  std::string fact_id;
  cas::SpanOffset span;
  std::string anchor_id;
  cas::SpanOffset anchor_span;
  std::vector<ExtractedModifier> modifiers;
  std::optional<double> confidence;
  std::optional<double> anchor_confidence;

  cas::FactAnnotation to_annotation() const;
  friend bool operator==(const ExtractedFact&, const ExtractedFact&) = default;
};

// --- phrase bank -------------------------------------------------------------

enum class PhraseLayer { Fact, Anchor, Modifier };

const char* to_string(PhraseLayer layer);

struct PhraseEntry {
  std::string phrase;  // normalized on construction of the bank
  PhraseLayer layer;
  std::string id;

  friend bool operator==(const PhraseEntry&, const PhraseEntry&) = default;
};

class PhraseBank {
 public:
  PhraseBank() = default;
  // Normalizes phrases. Throws MalformedInput on an empty phrase or a
  // duplicate (phrase, layer, id) triple.
  explicit PhraseBank(std::vector<PhraseEntry> entries);

  const std::vector<PhraseEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<PhraseEntry> entries_;
};

PhraseBank parse_phrase_bank(std::string_view json_bytes);
std::string serialize_phrase_bank(const PhraseBank& bank);

struct PhraseMatch {
  PhraseLayer layer;
  std::string id;
  cas::SpanOffset span;

  friend bool operator==(const PhraseMatch&, const PhraseMatch&) = default;
};

// Case-insensitive, whitespace-insensitive whole-word occurrences of every
// phrase. Longest match wins at each position; matches never overlap within
// a layer. Sorted by layer, then position.
std::vector<PhraseMatch> apply_phrase_annotations(std::string_view text, const PhraseBank& bank);

// --- sentence segmentation -------------------------------------------------------

// Sentences end at '.', '!' or '?' followed by whitespace or end of text
// (unless the word is a listed abbreviation) and at blank lines. Spans are
// trimmed and include the terminator.
std::vector<cas::SpanOffset> segment_sentences(std::u32string_view text);

// --- baseline extractor ----------------------------------------------------------

inline constexpr const char* kNegationTriggersEn[] = {"no", "not", "without"};
inline constexpr const char* kNegationTriggersDe[] = {"kein", "keine", "keinen", "nicht", "ohne"};

class BaselineExtractor {
 public:
  // Facts whose anchor has no surface form beyond its label end up in
  // empty_lexicon(); they are still built.
  BaselineExtractor(const schema::FactSchema& schema, const PhraseBank& phrases);
  ~BaselineExtractor();
  BaselineExtractor(BaselineExtractor&&) noexcept;
  BaselineExtractor& operator=(BaselineExtractor&&) noexcept;

  const std::vector<std::string>& empty_lexicon() const { return empty_lexicon_; }
  std::size_t rule_count() const;
  const cas::SchemaRef& schema_ref() const { return schema_ref_; }

  // One fact per (sentence, fact type) whose anchor lexicon matches.
  std::vector<ExtractedFact> extract(std::string_view text) const;

 private:
  struct Rules;
  std::unique_ptr<Rules> rules_;
  std::vector<std::string> empty_lexicon_;
  cas::SchemaRef schema_ref_;
};

BaselineExtractor build_baseline_extractor(const schema::FactSchema& schema,
                                           const PhraseBank& phrases);

// OpenMP over reports.
std::vector<std::vector<ExtractedFact>> extract_batch(const BaselineExtractor& extractor,
                                                      std::span<const std::string> texts);
namespace reference {
std::vector<std::vector<ExtractedFact>> extract_batch(const BaselineExtractor& extractor,
                                                      std::span<const std::string> texts);
}  // namespace reference

// --- remote extractors -------------------------------------------------------------

enum class ExtractorKind { Baseline, Remote };

struct ExtractorDescriptor {
  std::string name;
  ExtractorKind kind = ExtractorKind::Baseline;
  std::string endpoint;  // remote only, e.g. http://host:8080
  cas::SchemaRef schema;
};

struct RemoteOptions {
  int connect_timeout_seconds = 5;
  int read_timeout_seconds = 30;
};

std::string extraction_request_json(const cas::SchemaRef& schema, std::string_view text);
// Wire form {"facts": [...]}, offsets in code points.
std::string extracted_facts_to_json(const std::vector<ExtractedFact>& facts);
// Validates shape (ProtocolError), then ids and spans against the schema and
// the text length (InvalidSpans, one detail per offending entry).
std::vector<ExtractedFact> parse_extraction_response(std::string_view body,
                                                     const schema::FactSchema& schema,
                                                     std::size_t text_length);

// POST {endpoint}/v1/extract. Throws Unreachable, ProtocolError or
// InvalidSpans; spans are never clipped.
std::vector<ExtractedFact> remote_extract(const ExtractorDescriptor& descriptor,
                                          const schema::FactSchema& schema, std::string_view text,
                                          const RemoteOptions& options = {});

}  // namespace radex::extraction

#endif  // RADEX_EXTRACTION_HPP_
