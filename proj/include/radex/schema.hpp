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

#ifndef RADEX_SCHEMA_HPP_
#define RADEX_SCHEMA_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "radex/decimal.hpp"

// The information model: fact schemas, value standardizers and report
// templates, plus their canonical JSON forms and the UIMA type-system export.
namespace radex::schema {

struct CodedValue {
  std::string code;
  std::string system;
  std::string display;
  std::vector<std::string> synonyms;  // normalized surface forms

  friend bool operator==(const CodedValue&, const CodedValue&) = default;
};

struct ValueSet {
  std::vector<CodedValue> values;
  int min_card = 0;
  std::optional<int> max_card = 1;  // nullopt: unbounded

  bool allows(std::size_t count) const {
    return static_cast<long long>(count) >= min_card &&
           (!max_card || static_cast<long long>(count) <= *max_card);
  }
  friend bool operator==(const ValueSet&, const ValueSet&) = default;
};

struct ValueUnit {
  std::string target_unit;                       // UCUM code
  std::map<std::string, Decimal> accepted_units;  // UCUM code -> factor

  friend bool operator==(const ValueUnit&, const ValueUnit&) = default;
};

struct FreeText {
  friend bool operator==(const FreeText&, const FreeText&) = default;
};

using ValueStandardizer = std::variant<FreeText, ValueSet, ValueUnit>;

enum class ModifierRole { Plain, Negation };

struct ModifierDef {
  std::string id;
  std::string label;
  ModifierRole role = ModifierRole::Plain;
  ValueStandardizer standardizer;

  friend bool operator==(const ModifierDef&, const ModifierDef&) = default;
};

struct AnchorDef {
  std::string id;
  std::string label;
  std::vector<std::string> lexicon;

  friend bool operator==(const AnchorDef&, const AnchorDef&) = default;
};

struct FactDef {
  std::string id;
  std::string label;
  std::string description;
  AnchorDef anchor;
  std::vector<std::string> modifier_ids;

  friend bool operator==(const FactDef&, const FactDef&) = default;
};

struct FactSchema {
  std::string schema_id;
  std::string version;
  std::string language;
  std::vector<ModifierDef> modifiers;
  std::vector<FactDef> facts;

  const FactDef* find_fact(std::string_view id) const;
  const ModifierDef* find_modifier(std::string_view id) const;
  // Fact owning the given anchor id.
  const FactDef* find_anchor_owner(std::string_view anchor_id) const;

  std::size_t fact_count() const { return facts.size(); }
  std::size_t anchor_count() const { return facts.size(); }
  std::size_t modifier_count() const { return modifiers.size(); }

  friend bool operator==(const FactSchema&, const FactSchema&) = default;
};

struct TemplateEntry {
  std::string fact_id;
  std::vector<std::string> modifier_ids;

  friend bool operator==(const TemplateEntry&, const TemplateEntry&) = default;
};

struct ReportTemplate {
  std::string template_id;
  std::string schema_id;
  std::string schema_version;
  std::vector<TemplateEntry> entries;

  friend bool operator==(const ReportTemplate&, const ReportTemplate&) = default;
};

// One broken invariant. `code` is a stable identifier such as
// DUPLICATE_ANCHOR_ID; `path` points into the canonical JSON layout, with
// modifiers addressed by id (modifiers["laterality"]) and facts by index.
struct Violation {
  std::string code;
  std::string path;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::string to_string(const Violation& v);

bool is_slug(std::string_view id);
bool is_semver(std::string_view version);

// Throws MalformedInput (not JSON, missing or mistyped fields) or
// SchemaInvariantViolation (path of the first violation; details lists all).
FactSchema parse_fact_schema(std::string_view json_bytes);
std::string serialize_fact_schema(const FactSchema& schema);

std::vector<Violation> validate_schema(const FactSchema& schema);

std::string export_uima_type_system(const FactSchema& schema);

using ModifierFilter = std::map<std::string, std::vector<std::string>>;

// Throws EmptySelection or UnknownFactId. Facts without a filter entry keep
// all of their modifiers; filtered subsets are emitted in the fact's order.
ReportTemplate derive_report_template(
    const FactSchema& schema, const std::vector<std::string>& fact_ids,
    const std::optional<ModifierFilter>& modifier_filter = std::nullopt,
    std::string template_id = {});

std::vector<Violation> validate_template(const ReportTemplate& tmpl,
                                         const FactSchema& schema);

ReportTemplate parse_report_template(std::string_view json_bytes);
std::string serialize_report_template(const ReportTemplate& tmpl);

}  // namespace radex::schema

#endif  // RADEX_SCHEMA_HPP_
