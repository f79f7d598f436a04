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

#ifndef RADEX_FILLING_HPP_
#define RADEX_FILLING_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "radex/cas.hpp"
#include "radex/decimal.hpp"
#include "radex/extraction.hpp"
#include "radex/schema.hpp"

// Template filling: extracted spans go through the value standardizers of
// their modifiers and populate a report template.
namespace radex::filling {

struct Mapped {
  std::vector<schema::CodedValue> values;
  friend bool operator==(const Mapped&, const Mapped&) = default;
};
struct Unmapped {
  std::string raw;
  friend bool operator==(const Unmapped&, const Unmapped&) = default;
};
// One stretch of text matched synonyms of several codes.
struct Ambiguous {
  std::vector<schema::CodedValue> candidates;
  friend bool operator==(const Ambiguous&, const Ambiguous&) = default;
};
struct CardinalityViolation {
  std::size_t matched = 0;
  int min_card = 0;
  std::optional<int> max_card;
  friend bool operator==(const CardinalityViolation&, const CardinalityViolation&) = default;
};
using MappingOutcome = std::variant<Mapped, Unmapped, Ambiguous, CardinalityViolation>;

struct Quantity {
  Decimal value;
  std::string unit;
  friend bool operator==(const Quantity&, const Quantity&) = default;
};

struct FreeTextAnswer {
  std::string text;
  friend bool operator==(const FreeTextAnswer&, const FreeTextAnswer&) = default;
};

using Answer = std::variant<MappingOutcome, Quantity, FreeTextAnswer>;

MappingOutcome map_to_value_set(std::string_view span_text, const schema::ValueSet& vs);
// First "<number> <accepted unit>" converted exactly into the target unit.
std::variant<Quantity, Unmapped> standardize_quantity(std::string_view span_text,
                                                      const schema::ValueUnit& vu);

enum class FactStatus { Present, Negated, Absent };
const char* to_string(FactStatus status);

struct ModifierAnswer {
  std::string modifier_id;
  std::string raw_text;  // spans of one modifier joined by a single space
  Answer answer;
  friend bool operator==(const ModifierAnswer&, const ModifierAnswer&) = default;
};

struct FilledItem {
  std::string fact_id;
  FactStatus status = FactStatus::Absent;
  std::string anchor_text;
  std::optional<cas::SpanOffset> span;
  std::vector<ModifierAnswer> modifier_answers;
  // Further instances of the same fact, in document order.
  std::vector<FilledItem> repeats;
  friend bool operator==(const FilledItem&, const FilledItem&) = default;
};

struct FilledTemplate {
  std::string template_id;
  cas::SchemaRef schema;
  std::string report_sha256;  // lowercase hex
  std::string extractor;
  std::vector<FilledItem> items;
  friend bool operator==(const FilledTemplate&, const FilledTemplate&) = default;
};

std::string sha256_hex(std::string_view bytes);

// Throws SchemaMismatch when the template or an extracted fact does not
// belong to `schema`, InvalidSpans when a span does not fit the text.
FilledTemplate fill_template(const schema::ReportTemplate& tmpl, const schema::FactSchema& schema,
                             const std::vector<extraction::ExtractedFact>& extracted,
                             std::string_view report_text, std::string extractor_name = "baseline");

std::string filled_template_to_json(const FilledTemplate& filled);

}  // namespace radex::filling

#endif  // RADEX_FILLING_HPP_
