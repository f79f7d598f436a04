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

#include "radex/filling.hpp"

#include <sodium.h>

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "radex/error.hpp"
#include "radex/quantity.hpp"
#include "radex/unicode.hpp"

namespace radex::filling {

namespace {

using ojson = nlohmann::ordered_json;

// Whole-word occurrences of `needle` in `hay`, both normalized.
std::vector<std::size_t> find_words(std::u32string_view hay, std::u32string_view needle) {
  std::vector<std::size_t> out;
  if (needle.empty()) return out;
  for (std::size_t pos = hay.find(needle); pos != std::u32string_view::npos;
       pos = hay.find(needle, pos + 1)) {
    const std::size_t end = pos + needle.size();
    const bool left_ok = !unicode::is_word_char(needle.front()) || pos == 0 ||
                         !unicode::is_word_char(hay[pos - 1]);
    const bool right_ok = !unicode::is_word_char(needle.back()) || end == hay.size() ||
                          !unicode::is_word_char(hay[end]);
    if (left_ok && right_ok) out.push_back(pos);
  }
  return out;
}

std::string slice(const std::u32string& text, const cas::SpanOffset& s) {
  return unicode::encode(std::u32string_view(text).substr(s.begin, s.end - s.begin));
}

ojson coding_json(const schema::CodedValue& cv) {
  ojson j;
  j["system"] = cv.system;
  j["code"] = cv.code;
  j["display"] = cv.display;
  return j;
}

ojson answer_json(const ModifierAnswer& a) {
  ojson j;
  j["modifier_id"] = a.modifier_id;
  j["raw_text"] = a.raw_text;
  if (const auto* q = std::get_if<Quantity>(&a.answer)) {
    j["kind"] = "quantity";
    j["value"] = q->value.to_string();
    j["unit"] = q->unit;
  } else if (const auto* t = std::get_if<FreeTextAnswer>(&a.answer)) {
    j["kind"] = "free_text";
    j["text"] = t->text;
  } else {
    const auto& m = std::get<MappingOutcome>(a.answer);
    if (const auto* mapped = std::get_if<Mapped>(&m)) {
      j["kind"] = "mapped";
      j["codings"] = ojson::array();
      for (const auto& cv : mapped->values) j["codings"].push_back(coding_json(cv));
    } else if (const auto* u = std::get_if<Unmapped>(&m)) {
      j["kind"] = "unmapped";
      j["text"] = u->raw;
    } else if (const auto* amb = std::get_if<Ambiguous>(&m)) {
      j["kind"] = "ambiguous";
      j["candidates"] = ojson::array();
      for (const auto& cv : amb->candidates) j["candidates"].push_back(coding_json(cv));
    } else {
      const auto& cv = std::get<CardinalityViolation>(m);
      j["kind"] = "cardinality_violation";
      j["matched"] = cv.matched;
      j["min_card"] = cv.min_card;
      if (cv.max_card) {
        j["max_card"] = *cv.max_card;
      } else {
        j["max_card"] = "*";
      }
    }
  }
  return j;
}

ojson item_json(const FilledItem& item, bool with_repeats) {
  ojson j;
  j["fact_id"] = item.fact_id;
  j["status"] = to_string(item.status);
  j["anchor_text"] = item.anchor_text;
  if (item.span) j["span"] = {{"begin", item.span->begin}, {"end", item.span->end}};
  j["answers"] = ojson::array();
  for (const auto& a : item.modifier_answers) j["answers"].push_back(answer_json(a));
  if (with_repeats) {
    j["repeats"] = ojson::array();
    for (const auto& r : item.repeats) j["repeats"].push_back(item_json(r, false));
  }
  return j;
}

FilledItem fill_instance(const schema::TemplateEntry& entry, const schema::FactSchema& schema,
                         const schema::FactDef& def, const extraction::ExtractedFact& fact,
                         const std::u32string& text) {
  FilledItem item;
  item.fact_id = entry.fact_id;
  item.status = FactStatus::Present;
  item.anchor_text = slice(text, fact.anchor_span);
  item.span = fact.span;

  std::map<std::string, std::vector<cas::SpanOffset>> by_modifier;
  for (const auto& m : fact.modifiers) by_modifier[m.modifier_id].push_back(m.span);
  for (const auto& mid : def.modifier_ids) {
    const auto* mdef = schema.find_modifier(mid);
    if (mdef && mdef->role == schema::ModifierRole::Negation && by_modifier.count(mid)) {
      item.status = FactStatus::Negated;
    }
  }

  for (const auto& mid : entry.modifier_ids) {
    auto it = by_modifier.find(mid);
    if (it == by_modifier.end()) continue;
    auto spans = it->second;
    std::sort(spans.begin(), spans.end());
    std::string raw;
    for (const auto& s : spans) {
      if (!raw.empty()) raw += ' ';
      raw += slice(text, s);
    }
    const auto* mdef = schema.find_modifier(mid);
    ModifierAnswer answer{mid, raw, FreeTextAnswer{raw}};
    if (const auto* vs = std::get_if<schema::ValueSet>(&mdef->standardizer)) {
      answer.answer = map_to_value_set(raw, *vs);
    } else if (const auto* vu = std::get_if<schema::ValueUnit>(&mdef->standardizer)) {
      auto q = standardize_quantity(raw, *vu);
      if (auto* quantity = std::get_if<Quantity>(&q)) {
        answer.answer = std::move(*quantity);
      } else {
        answer.answer = MappingOutcome(std::get<Unmapped>(q));
      }
    }
    item.modifier_answers.push_back(std::move(answer));
  }
  return item;
}

}  // namespace

MappingOutcome map_to_value_set(std::string_view span_text, const schema::ValueSet& vs) {
  const std::u32string text = unicode::normalize(unicode::decode(span_text));
  // occurrence (begin, end) -> value indices whose synonyms cover exactly it
  std::map<std::pair<std::size_t, std::size_t>, std::set<std::size_t>> hits;
  for (std::size_t v = 0; v < vs.values.size(); ++v) {
    for (const auto& syn : vs.values[v].synonyms) {
      const std::u32string needle = unicode::normalize(unicode::decode(syn));
      for (std::size_t pos : find_words(text, needle)) hits[{pos, pos + needle.size()}].insert(v);
    }
  }
  std::set<std::size_t> codes;
  for (const auto& [span, values] : hits) {
    if (values.size() > 1) {
      Ambiguous a;
      for (std::size_t v : values) a.candidates.push_back(vs.values[v]);
      return a;
    }
    codes.insert(*values.begin());
  }
  if (codes.empty()) return Unmapped{std::string(span_text)};
  if (!vs.allows(codes.size())) return CardinalityViolation{codes.size(), vs.min_card, vs.max_card};
  Mapped m;
  for (std::size_t v : codes) m.values.push_back(vs.values[v]);
  return m;
}

std::variant<Quantity, Unmapped> standardize_quantity(std::string_view span_text,
                                                      const schema::ValueUnit& vu) {
  const auto matches = find_quantities(unicode::decode(span_text), vu);
  if (matches.empty()) return Unmapped{std::string(span_text)};
  const auto& q = matches.front();
  return Quantity{q.value * vu.accepted_units.at(q.unit), vu.target_unit};
}

const char* to_string(FactStatus status) {
  switch (status) {
    case FactStatus::Present: return "present";
    case FactStatus::Negated: return "negated";
    default: return "absent";
  }
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[crypto_hash_sha256_BYTES];
  crypto_hash_sha256(digest, reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
  char hex[crypto_hash_sha256_BYTES * 2 + 1];
  sodium_bin2hex(hex, sizeof hex, digest, sizeof digest);
  return hex;
}

FilledTemplate fill_template(const schema::ReportTemplate& tmpl, const schema::FactSchema& schema,
                             const std::vector<extraction::ExtractedFact>& extracted,
                             std::string_view report_text, std::string extractor_name) {
  if (tmpl.schema_id != schema.schema_id || tmpl.schema_version != schema.version) {
    throw Error(ErrorCode::SchemaMismatch, "template " + tmpl.template_id + " targets schema " +
                                               tmpl.schema_id + "@" + tmpl.schema_version +
                                               ", not " + schema.schema_id + "@" + schema.version);
  }
  const std::u32string text = unicode::decode(report_text);
  std::vector<cas::FactAnnotation> annotations;
  for (const auto& f : extracted) {
    if (!schema.find_fact(f.fact_id)) {
      throw Error(ErrorCode::SchemaMismatch,
                  "extracted fact '" + f.fact_id + "' is not part of schema " + schema.schema_id);
    }
    annotations.push_back(f.to_annotation());
  }
  if (auto problems = cas::check_annotations(annotations, text.size()); !problems.empty()) {
    throw Error(ErrorCode::InvalidSpans, problems.front(), {}, problems);
  }

  FilledTemplate out;
  out.template_id = tmpl.template_id;
  out.schema = {tmpl.schema_id, tmpl.schema_version};
  out.report_sha256 = sha256_hex(report_text);
  out.extractor = std::move(extractor_name);
  for (const auto& entry : tmpl.entries) {
    const auto* def = schema.find_fact(entry.fact_id);
    if (!def) {
      throw Error(ErrorCode::SchemaMismatch, "template fact '" + entry.fact_id + "' is not in schema");
    }
    std::vector<const extraction::ExtractedFact*> instances;
    for (const auto& f : extracted) {
      if (f.fact_id == entry.fact_id) instances.push_back(&f);
    }
    std::stable_sort(instances.begin(), instances.end(),
                     [](const auto* a, const auto* b) { return a->span < b->span; });
    if (instances.empty()) {
      FilledItem item;
      item.fact_id = entry.fact_id;
      out.items.push_back(std::move(item));
      continue;
    }
    FilledItem item = fill_instance(entry, schema, *def, *instances.front(), text);
    for (std::size_t i = 1; i < instances.size(); ++i) {
      item.repeats.push_back(fill_instance(entry, schema, *def, *instances[i], text));
    }
    out.items.push_back(std::move(item));
  }
  return out;
}

std::string filled_template_to_json(const FilledTemplate& filled) {
  ojson j;
  j["template_id"] = filled.template_id;
  j["schema_id"] = filled.schema.id;
  j["schema_version"] = filled.schema.version;
  j["report_sha256"] = filled.report_sha256;
  j["extractor"] = filled.extractor;
  j["items"] = ojson::array();
  for (const auto& item : filled.items) j["items"].push_back(item_json(item, true));
  return j.dump(2) + "\n";
}

}  // namespace radex::filling
