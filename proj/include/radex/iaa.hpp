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

#ifndef RADEX_IAA_HPP_
#define RADEX_IAA_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "radex/cas.hpp"

// Inter-annotator agreement over Fact/Anchor/Modifier spans.
//
// Two annotators' spans are paired one-to-one per (layer, label). Exact mode
// pairs identical offsets; overlap mode pairs spans that share at least one
// code point. Precision is measured against annotator a, recall against b.
// A label neither annotator used scores f1 = 1.0 (vacuous agreement), which
// keeps macro averages defined.
namespace radex::iaa {

enum class MatchMode { Exact, Overlap };
enum class Layer { Fact, Anchor, Modifier };

const char* to_string(MatchMode mode);
const char* to_string(Layer layer);
// Throws MalformedInput for anything but "exact" / "overlap".
MatchMode parse_match_mode(std::string_view name);

struct AnnotationSet {
  std::string annotator_id;
  std::map<std::string, cas::RadExCasDocument> documents;
};

struct LabeledSpan {
  Layer layer;
  std::string label;
  cas::SpanOffset span;

  friend bool operator==(const LabeledSpan&, const LabeledSpan&) = default;
};

std::vector<LabeledSpan> labeled_spans(const cas::RadExCasDocument& doc);

struct Support {
  std::size_t count_a = 0;
  std::size_t count_b = 0;
  std::size_t matched = 0;

  Support& operator+=(const Support& o) {
    count_a += o.count_a;
    count_b += o.count_b;
    matched += o.matched;
    return *this;
  }
  friend bool operator==(const Support&, const Support&) = default;
};

struct Prf {
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
};

Prf score(const Support& s);

// One-to-one matching between two span lists of the same label. Returns
// (index in a, index in b) pairs. Overlap mode seeds greedily by descending
// intersection length (ties: earliest begin) and then extends along
// augmenting paths, so the result always has maximum cardinality.
std::vector<std::pair<std::size_t, std::size_t>> match_spans(std::span<const cas::SpanOffset> a,
                                                             std::span<const cas::SpanOffset> b,
                                                             MatchMode mode);
// The greedy seed alone.
std::vector<std::pair<std::size_t, std::size_t>> greedy_match_spans(
    std::span<const cas::SpanOffset> a, std::span<const cas::SpanOffset> b, MatchMode mode);

struct AgreementScore {
  Layer layer;
  std::string label;
  std::string annotator_a;
  std::string annotator_b;
  MatchMode mode;
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
  Support support;
};

// Per-label scores over the documents both sets contain, ordered by layer
// then label. Throws NoSharedDocuments or TextMismatch. Documents are
// scored in parallel.
std::vector<AgreementScore> pairwise_span_scores(const AnnotationSet& a, const AnnotationSet& b,
                                                 MatchMode mode);

namespace reference {
std::vector<AgreementScore> pairwise_span_scores(const AnnotationSet& a, const AnnotationSet& b,
                                                 MatchMode mode);
}  // namespace reference

struct Aggregate {
  Support support;
  double micro_precision = 1.0;
  double micro_recall = 1.0;
  double micro_f1 = 1.0;
  double macro_f1 = 1.0;
  std::size_t scores = 0;  // (pair, label) entries averaged by macro_f1
};

struct DocumentScore {
  std::string doc_id;
  std::string annotator_a;
  std::string annotator_b;
  Support support;
  double f1 = 1.0;
};

struct AnnotationReport {
  cas::SchemaRef schema;
  MatchMode mode = MatchMode::Exact;
  std::string generated_at;
  std::vector<std::string> annotators;
  std::vector<AgreementScore> scores;
  std::map<Layer, Aggregate> layers;
  Aggregate overall;
  std::vector<DocumentScore> documents;
};

// Scores every unordered pair of sets. Throws MalformedInput for fewer than
// two sets, SchemaMismatch when documents reference different schemas, and
// propagates pairwise errors.
AnnotationReport aggregate_iaa(const std::vector<AnnotationSet>& sets, MatchMode mode,
                               std::string generated_at = {});
std::string report_to_json(const AnnotationReport& report);

struct Disagreement {
  std::string doc_id;
  Layer layer;
  std::string label;
  cas::SpanOffset span;
  std::vector<std::string> annotators_present;

  friend bool operator==(const Disagreement&, const Disagreement&) = default;
};

// Every span that is not matched by all annotators, sorted by doc id, then
// begin offset.
std::vector<Disagreement> disagreement_list(const std::vector<AnnotationSet>& sets,
                                            MatchMode mode);
std::string disagreements_to_json(const std::vector<Disagreement>& list);

}  // namespace radex::iaa

#endif  // RADEX_IAA_HPP_
