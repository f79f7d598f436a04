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

#include "radex/schema.hpp"

#include <algorithm>
#include <regex>
#include <set>
#include <unordered_set>

#include "json_util.hpp"
#include "radex/error.hpp"
#include "radex/unicode.hpp"

namespace radex::schema {

namespace {

using json_util::json;
using ordered_json = nlohmann::ordered_json;

std::string modifier_path(std::string_view id) {
  return "modifiers[\"" + std::string(id) + "\"]";
}

std::string fact_path(std::size_t i) { return "facts[" + std::to_string(i) + "]"; }

bool is_language_tag(std::string_view tag) {
  static const std::regex re("^[A-Za-z]{2,8}(-[A-Za-z0-9]{1,8})*$");
  return std::regex_match(tag.begin(), tag.end(), re);
}

bool is_normalized(const std::string& s) {
  return unicode::is_valid_utf8(s) && !s.empty() && unicode::normalize(s) == s;
}

const char* role_name(ModifierRole role) {
  return role == ModifierRole::Negation ? "negation" : "plain";
}

// --- JSON -> model ---------------------------------------------------------

CodedValue coded_value_from_json(const json& j, const std::string& path) {
  CodedValue v;
  v.code = json_util::require_string(j, "code", path);
  v.system = json_util::require_string(j, "system", path);
  v.display = json_util::optional_string(j, "display", path);
  if (j.contains("synonyms")) {
    v.synonyms = json_util::string_array(j["synonyms"], json_util::join(path, "synonyms"));
  }
  return v;
}

ValueSet value_set_from_json(const json& j, const std::string& path) {
  ValueSet vs;
  const json& values = json_util::require_array(j, "values", path);
  for (std::size_t i = 0; i < values.size(); ++i) {
    vs.values.push_back(coded_value_from_json(
        values[i], json_util::index(json_util::join(path, "values"), i)));
  }
  vs.min_card = static_cast<int>(json_util::require_int(j, "min_card", path));
  const json& max = json_util::require(j, "max_card", path);
  if (max.is_string() && max.get<std::string>() == "*") {
    vs.max_card = std::nullopt;
  } else if (max.is_number_integer()) {
    vs.max_card = max.get<int>();
  } else {
    json_util::fail(json_util::join(path, "max_card"), "expected an integer or \"*\"");
  }
  return vs;
}

ValueUnit value_unit_from_json(const json& j, const std::string& path) {
  ValueUnit vu;
  vu.target_unit = json_util::require_string(j, "target_unit", path);
  const json& units = json_util::require(j, "accepted_units", path);
  const std::string units_path = json_util::join(path, "accepted_units");
  if (!units.is_object()) json_util::fail(units_path, "expected an object");
  for (const auto& [unit, factor] : units.items()) {
    std::optional<Decimal> d;
    if (factor.is_string()) {
      d = Decimal::parse(factor.get<std::string>());
    } else if (factor.is_number_integer()) {
      d = Decimal(factor.get<long long>());
    }
    if (!d) {
      json_util::fail(units_path + "[\"" + unit + "\"]",
                      "expected a decimal string or integer");
    }
    vu.accepted_units.emplace(unit, *d);
  }
  return vu;
}

ModifierDef modifier_from_json(const json& j, const std::string& path) {
  ModifierDef m;
  m.id = json_util::require_string(j, "id", path);
  m.label = json_util::optional_string(j, "label", path);
  const std::string role = json_util::optional_string(j, "role", path, "plain");
  if (role == "negation") {
    m.role = ModifierRole::Negation;
  } else if (role != "plain") {
    json_util::fail(json_util::join(path, "role"), "expected \"plain\" or \"negation\"");
  }
  const std::string id_path = modifier_path(m.id);
  int populated = 0;
  if (j.contains("value_set")) {
    ++populated;
    m.standardizer = value_set_from_json(j["value_set"], json_util::join(id_path, "value_set"));
  }
  if (j.contains("value_unit")) {
    ++populated;
    m.standardizer = value_unit_from_json(j["value_unit"], json_util::join(id_path, "value_unit"));
  }
  if (j.contains("free_text")) {
    ++populated;
    m.standardizer = FreeText{};
  }
  if (populated > 1) {
    const std::string msg = to_string(Violation{"MULTIPLE_STANDARDIZERS", id_path,
                                                "modifier declares more than one standardizer"});
    throw Error(ErrorCode::SchemaInvariantViolation, msg, id_path, {msg});
  }
  return m;
}

FactDef fact_from_json(const json& j, const std::string& path) {
  FactDef f;
  f.id = json_util::require_string(j, "id", path);
  f.label = json_util::optional_string(j, "label", path);
  f.description = json_util::optional_string(j, "description", path);
  const std::string anchor_path = json_util::join(path, "anchor");
  const json& a = json_util::require(j, "anchor", path);
  f.anchor.id = json_util::require_string(a, "id", anchor_path);
  f.anchor.label = json_util::optional_string(a, "label", anchor_path);
  if (a.contains("lexicon")) {
    f.anchor.lexicon = json_util::string_array(a["lexicon"], json_util::join(anchor_path, "lexicon"));
  }
  if (j.contains("modifier_ids")) {
    f.modifier_ids = json_util::string_array(j["modifier_ids"], json_util::join(path, "modifier_ids"));
  }
  return f;
}

// --- model -> JSON ---------------------------------------------------------

ordered_json to_json(const ValueStandardizer& s) {
  return std::visit(
      [](const auto& v) -> ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ValueSet>) {
          ordered_json vs;
          vs["min_card"] = v.min_card;
          if (v.max_card) {
            vs["max_card"] = *v.max_card;
          } else {
            vs["max_card"] = "*";
          }
          vs["values"] = ordered_json::array();
          for (const auto& cv : v.values) {
            ordered_json c;
            c["code"] = cv.code;
            c["system"] = cv.system;
            c["display"] = cv.display;
            c["synonyms"] = cv.synonyms;
            vs["values"].push_back(std::move(c));
          }
          return vs;
        } else if constexpr (std::is_same_v<T, ValueUnit>) {
          ordered_json vu;
          vu["target_unit"] = v.target_unit;
          vu["accepted_units"] = ordered_json::object();
          for (const auto& [unit, factor] : v.accepted_units) {
            vu["accepted_units"][unit] = factor.to_string();
          }
          return vu;
        } else {
          return ordered_json::object();
        }
      },
      s);
}

const char* standardizer_key(const ValueStandardizer& s) {
  if (std::holds_alternative<ValueSet>(s)) return "value_set";
  if (std::holds_alternative<ValueUnit>(s)) return "value_unit";
  return "free_text";
}

void check_value_set(const ValueSet& vs, const std::string& path,
                     std::vector<Violation>& out) {
  if (vs.values.empty()) {
    out.push_back({"EMPTY_VALUE_SET", path, "value set has no values"});
  }
  if (vs.min_card < 0 || (vs.max_card && *vs.max_card < 1)) {
    out.push_back({"INVALID_CARDINALITY", path,
                   "min_card must be >= 0 and max_card >= 1"});
  } else if (vs.max_card && vs.min_card > *vs.max_card) {
    out.push_back({"CARDINALITY_ORDER", path, "min_card exceeds max_card"});
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < vs.values.size(); ++i) {
    const auto& cv = vs.values[i];
    const std::string vpath = json_util::index(path + ".values", i);
    if (cv.code.empty()) {
      out.push_back({"EMPTY_CODE", vpath + ".code", "code must be nonempty"});
    }
    if (!seen.emplace(cv.system, cv.code).second) {
      out.push_back({"DUPLICATE_CODE", vpath, "duplicate (system, code) pair " +
                                                  cv.system + "|" + cv.code});
    }
    for (std::size_t k = 0; k < cv.synonyms.size(); ++k) {
      if (!is_normalized(cv.synonyms[k])) {
        out.push_back({"UNNORMALIZED_SYNONYM", json_util::index(vpath + ".synonyms", k),
                       "synonym is not in normalized form"});
      }
    }
  }
}

void check_value_unit(const ValueUnit& vu, const std::string& path,
                      std::vector<Violation>& out) {
  auto it = vu.accepted_units.find(vu.target_unit);
  if (vu.target_unit.empty() || it == vu.accepted_units.end() ||
      it->second != Decimal(1)) {
    out.push_back({"TARGET_UNIT_FACTOR", path,
                   "target unit must be accepted with factor exactly 1"});
  }
  for (const auto& [unit, factor] : vu.accepted_units) {
    if (factor <= Decimal(0)) {
      out.push_back({"NONPOSITIVE_FACTOR", path + ".accepted_units[\"" + unit + "\"]",
                     "conversion factor must be > 0"});
    }
  }
}

}  // namespace

const FactDef* FactSchema::find_fact(std::string_view id) const {
  for (const auto& f : facts) {
    if (f.id == id) return &f;
  }
  return nullptr;
}

const ModifierDef* FactSchema::find_modifier(std::string_view id) const {
  for (const auto& m : modifiers) {
    if (m.id == id) return &m;
  }
  return nullptr;
}

const FactDef* FactSchema::find_anchor_owner(std::string_view anchor_id) const {
  for (const auto& f : facts) {
    if (f.anchor.id == anchor_id) return &f;
  }
  return nullptr;
}

std::string to_string(const Violation& v) {
  return v.code + " at " + v.path + (v.message.empty() ? "" : ": " + v.message);
}

bool is_slug(std::string_view id) {
  if (id.empty() || id.front() < 'a' || id.front() > 'z') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

bool is_semver(std::string_view version) {
  static const std::regex re("^(0|[1-9][0-9]*)\\.(0|[1-9][0-9]*)\\.(0|[1-9][0-9]*)$");
  return std::regex_match(version.begin(), version.end(), re);
}

std::vector<Violation> validate_schema(const FactSchema& schema) {
  std::vector<Violation> out;
  if (schema.schema_id.empty()) {
    out.push_back({"EMPTY_SCHEMA_ID", "schema_id", "schema_id must be nonempty"});
  }
  if (!is_semver(schema.version)) {
    out.push_back({"INVALID_VERSION", "version", "expected MAJOR.MINOR.PATCH"});
  }
  if (!is_language_tag(schema.language)) {
    out.push_back({"INVALID_LANGUAGE", "language", "expected a BCP-47 language tag"});
  }

  std::unordered_set<std::string> modifier_ids;
  for (const auto& m : schema.modifiers) {
    const std::string path = modifier_path(m.id);
    if (!is_slug(m.id)) {
      out.push_back({"INVALID_ID", path + ".id", "modifier id must match [a-z][a-z0-9_]*"});
    }
    if (!modifier_ids.insert(m.id).second) {
      out.push_back({"DUPLICATE_MODIFIER_ID", path, "modifier id '" + m.id + "' is not unique"});
    }
    if (const auto* vs = std::get_if<ValueSet>(&m.standardizer)) {
      check_value_set(*vs, path + ".value_set", out);
    } else if (const auto* vu = std::get_if<ValueUnit>(&m.standardizer)) {
      check_value_unit(*vu, path + ".value_unit", out);
    }
  }

  if (schema.facts.empty()) {
    out.push_back({"EMPTY_FACTS", "facts", "a schema needs at least one fact"});
  }
  std::unordered_set<std::string> fact_ids;
  std::unordered_set<std::string> anchor_ids;
  for (std::size_t i = 0; i < schema.facts.size(); ++i) {
    const auto& f = schema.facts[i];
    const std::string path = fact_path(i);
    if (!is_slug(f.id)) {
      out.push_back({"INVALID_ID", path + ".id", "fact id must match [a-z][a-z0-9_]*"});
    }
    if (!fact_ids.insert(f.id).second) {
      out.push_back({"DUPLICATE_FACT_ID", path + ".id", "fact id '" + f.id + "' is not unique"});
    }
    if (!is_slug(f.anchor.id)) {
      out.push_back({"INVALID_ID", path + ".anchor.id", "anchor id must match [a-z][a-z0-9_]*"});
    }
    if (!anchor_ids.insert(f.anchor.id).second) {
      out.push_back({"DUPLICATE_ANCHOR_ID", path + ".anchor.id",
                     "anchor id '" + f.anchor.id + "' is not unique"});
    }
    for (std::size_t k = 0; k < f.anchor.lexicon.size(); ++k) {
      if (!is_normalized(f.anchor.lexicon[k])) {
        out.push_back({"UNNORMALIZED_LEXICON", json_util::index(path + ".anchor.lexicon", k),
                       "lexicon entry is not in normalized form"});
      }
    }
    std::unordered_set<std::string> refs;
    int negations = 0;
    for (std::size_t k = 0; k < f.modifier_ids.size(); ++k) {
      const auto& ref = f.modifier_ids[k];
      const std::string ref_path = json_util::index(path + ".modifier_ids", k);
      if (!refs.insert(ref).second) {
        out.push_back({"DUPLICATE_MODIFIER_REF", ref_path, "modifier '" + ref + "' listed twice"});
      }
      const ModifierDef* m = schema.find_modifier(ref);
      if (!m) {
        out.push_back({"DANGLING_MODIFIER_REF", ref_path,
                       "modifier '" + ref + "' is not in the modifier pool"});
      } else if (m->role == ModifierRole::Negation) {
        ++negations;
      }
    }
    if (negations > 1) {
      out.push_back({"MULTIPLE_NEGATION_MODIFIERS", path + ".modifier_ids",
                     "a fact may reference at most one negation modifier"});
    }
  }
  return out;
}

FactSchema parse_fact_schema(std::string_view json_bytes) {
  const json j = json_util::parse(json_bytes, "fact schema");
  if (!j.is_object()) json_util::fail("", "fact schema must be a JSON object");
  FactSchema s;
  s.schema_id = json_util::require_string(j, "schema_id", "");
  s.version = json_util::require_string(j, "version", "");
  s.language = json_util::require_string(j, "language", "");
  const json& mods = json_util::require_array(j, "modifiers", "");
  for (std::size_t i = 0; i < mods.size(); ++i) {
    s.modifiers.push_back(modifier_from_json(mods[i], json_util::index("modifiers", i)));
  }
  const json& facts = json_util::require_array(j, "facts", "");
  for (std::size_t i = 0; i < facts.size(); ++i) {
    s.facts.push_back(fact_from_json(facts[i], fact_path(i)));
  }
  auto violations = validate_schema(s);
  if (!violations.empty()) {
    std::vector<std::string> details;
    for (const auto& v : violations) details.push_back(to_string(v));
    throw Error(ErrorCode::SchemaInvariantViolation, to_string(violations.front()),
                violations.front().path, std::move(details));
  }
  return s;
}

std::string serialize_fact_schema(const FactSchema& schema) {
  ordered_json j;
  j["schema_id"] = schema.schema_id;
  j["version"] = schema.version;
  j["language"] = schema.language;
  j["modifiers"] = ordered_json::array();
  for (const auto& m : schema.modifiers) {
    ordered_json mj;
    mj["id"] = m.id;
    mj["label"] = m.label;
    mj["role"] = role_name(m.role);
    mj[standardizer_key(m.standardizer)] = to_json(m.standardizer);
    j["modifiers"].push_back(std::move(mj));
  }
  j["facts"] = ordered_json::array();
  for (const auto& f : schema.facts) {
    ordered_json fj;
    fj["id"] = f.id;
    fj["label"] = f.label;
    fj["description"] = f.description;
    fj["anchor"]["id"] = f.anchor.id;
    fj["anchor"]["label"] = f.anchor.label;
    fj["anchor"]["lexicon"] = f.anchor.lexicon;
    fj["modifier_ids"] = f.modifier_ids;
    j["facts"].push_back(std::move(fj));
  }
  return j.dump(2) + "\n";
}

ReportTemplate derive_report_template(const FactSchema& schema,
                                      const std::vector<std::string>& fact_ids,
                                      const std::optional<ModifierFilter>& modifier_filter,
                                      std::string template_id) {
  if (fact_ids.empty()) {
    throw Error(ErrorCode::EmptySelection, "a report template needs at least one fact");
  }
  ReportTemplate t;
  t.template_id = template_id.empty() ? schema.schema_id + "_template" : std::move(template_id);
  t.schema_id = schema.schema_id;
  t.schema_version = schema.version;
  std::unordered_set<std::string> seen;
  for (const auto& id : fact_ids) {
    const FactDef* f = schema.find_fact(id);
    if (!f) throw Error(ErrorCode::UnknownFactId, "unknown fact id '" + id + "'", id);
    if (!seen.insert(id).second) continue;
    TemplateEntry entry{id, f->modifier_ids};
    if (modifier_filter) {
      if (auto it = modifier_filter->find(id); it != modifier_filter->end()) {
        for (const auto& m : it->second) {
          if (std::find(f->modifier_ids.begin(), f->modifier_ids.end(), m) ==
              f->modifier_ids.end()) {
            throw Error(ErrorCode::SchemaInvariantViolation,
                        "modifier '" + m + "' does not belong to fact '" + id + "'", id);
          }
        }
        std::erase_if(entry.modifier_ids, [&](const std::string& m) {
          return std::find(it->second.begin(), it->second.end(), m) == it->second.end();
        });
      }
    }
    t.entries.push_back(std::move(entry));
  }
  return t;
}

std::vector<Violation> validate_template(const ReportTemplate& tmpl,
                                         const FactSchema& schema) {
  std::vector<Violation> out;
  if (tmpl.schema_id != schema.schema_id || tmpl.schema_version != schema.version) {
    out.push_back({"SCHEMA_MISMATCH", "schema_id",
                   "template pins " + tmpl.schema_id + "@" + tmpl.schema_version +
                       " but schema is " + schema.schema_id + "@" + schema.version});
  }
  if (tmpl.entries.empty()) {
    out.push_back({"EMPTY_TEMPLATE", "entries", "a template needs at least one entry"});
  }
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < tmpl.entries.size(); ++i) {
    const auto& e = tmpl.entries[i];
    const std::string path = json_util::index("entries", i);
    const FactDef* f = schema.find_fact(e.fact_id);
    if (!f) {
      out.push_back({"UNKNOWN_FACT_ID", path + ".fact_id", "unknown fact '" + e.fact_id + "'"});
      continue;
    }
    if (!seen.insert(e.fact_id).second) {
      out.push_back({"DUPLICATE_FACT_ENTRY", path, "fact '" + e.fact_id + "' listed twice"});
    }
    std::unordered_set<std::string> mods;
    for (std::size_t k = 0; k < e.modifier_ids.size(); ++k) {
      const auto& m = e.modifier_ids[k];
      if (std::find(f->modifier_ids.begin(), f->modifier_ids.end(), m) == f->modifier_ids.end()) {
        out.push_back({"MODIFIER_NOT_IN_FACT", json_util::index(path + ".modifier_ids", k),
                       "modifier '" + m + "' is not a modifier of '" + e.fact_id + "'"});
      }
      if (!mods.insert(m).second) {
        out.push_back({"DUPLICATE_MODIFIER_REF", json_util::index(path + ".modifier_ids", k),
                       "modifier '" + m + "' listed twice"});
      }
    }
  }
  return out;
}

ReportTemplate parse_report_template(std::string_view json_bytes) {
  const json j = json_util::parse(json_bytes, "report template");
  ReportTemplate t;
  t.template_id = json_util::require_string(j, "template_id", "");
  t.schema_id = json_util::require_string(j, "schema_id", "");
  t.schema_version = json_util::require_string(j, "schema_version", "");
  const json& entries = json_util::require_array(j, "entries", "");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string path = json_util::index("entries", i);
    TemplateEntry e;
    e.fact_id = json_util::require_string(entries[i], "fact_id", path);
    e.modifier_ids = json_util::string_array(
        json_util::require(entries[i], "modifier_ids", path), path + ".modifier_ids");
    t.entries.push_back(std::move(e));
  }
  return t;
}

std::string serialize_report_template(const ReportTemplate& tmpl) {
  ordered_json j;
  j["template_id"] = tmpl.template_id;
  j["schema_id"] = tmpl.schema_id;
  j["schema_version"] = tmpl.schema_version;
  j["entries"] = ordered_json::array();
  for (const auto& e : tmpl.entries) {
    ordered_json ej;
    ej["fact_id"] = e.fact_id;
    ej["modifier_ids"] = e.modifier_ids;
    j["entries"].push_back(std::move(ej));
  }
  return j.dump(2) + "\n";
}

}  // namespace radex::schema
