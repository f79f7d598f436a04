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

#include "radex/fhir.hpp"

#include <algorithm>
#include <set>

#include "radex/error.hpp"

namespace radex::fhir {

namespace {

Json string_extension(const char* url, const std::string& value) {
  return Json{{"url", url}, {"valueString", value}};
}

Json coding(const schema::CodedValue& cv) {
  return Json{{"system", cv.system}, {"code", cv.code}, {"display", cv.display}};
}

[[noreturn]] void malformed(const std::string& msg) {
  throw Error(ErrorCode::MalformedInput, "Questionnaire: " + msg);
}

const Json& items_of(const Json& node, const std::string& where) {
  static const Json kEmpty = Json::array();
  auto it = node.find("item");
  if (it == node.end()) return kEmpty;
  if (!it->is_array()) malformed(where + ".item is not an array");
  return *it;
}

std::string link_id(const Json& item, const std::string& where) {
  if (!item.is_object() || !item.contains("linkId") || !item["linkId"].is_string()) {
    malformed(where + " lacks a linkId");
  }
  return item["linkId"].get<std::string>();
}

void collect_link_ids(const Json& node, std::set<std::string>& out) {
  if (auto it = node.find("item"); it != node.end() && it->is_array()) {
    for (const auto& child : *it) {
      if (child.is_object() && child.contains("linkId") && child["linkId"].is_string()) {
        out.insert(child["linkId"].get<std::string>());
      }
      collect_link_ids(child, out);
    }
  }
}

Json modifier_answers(const filling::ModifierAnswer& a) {
  Json answers = Json::array();
  if (const auto* q = std::get_if<filling::Quantity>(&a.answer)) {
    Json quantity;
    quantity["value"] = Json::parse(q->value.to_string());
    quantity["unit"] = q->unit;
    quantity["system"] = kUcumSystem;
    quantity["code"] = q->unit;
    answers.push_back({{"valueQuantity", quantity}});
  } else if (const auto* t = std::get_if<filling::FreeTextAnswer>(&a.answer)) {
    answers.push_back({{"valueString", t->text}});
  } else {
    const auto& m = std::get<filling::MappingOutcome>(a.answer);
    if (const auto* mapped = std::get_if<filling::Mapped>(&m)) {
      for (const auto& cv : mapped->values) answers.push_back({{"valueCoding", coding(cv)}});
    } else {
      const char* kind = std::holds_alternative<filling::Unmapped>(m)    ? "unmapped"
                         : std::holds_alternative<filling::Ambiguous>(m) ? "ambiguous"
                                                                         : "cardinality-violation";
      Json answer;
      answer["valueString"] = a.raw_text;
      answer["extension"] = Json::array({Json{{"url", kMappingOutcomeExtension}, {"valueCode", kind}}});
      answers.push_back(std::move(answer));
    }
  }
  return answers;
}

Json group_response(const filling::FilledItem& item, const std::set<std::string>& link_ids) {
  Json group;
  group["linkId"] = item.fact_id;
  group["item"] = Json::array();
  const std::string presence = item.fact_id + ".presence";
  if (link_ids.count(presence)) {
    Json p;
    p["linkId"] = presence;
    if (item.status == filling::FactStatus::Negated) {
      p["extension"] = Json::array({Json{{"url", kNegatedExtension}, {"valueBoolean", true}}});
    }
    p["answer"] = Json::array({Json{{"valueBoolean", item.status == filling::FactStatus::Present}}});
    group["item"].push_back(std::move(p));
  }
  if (item.status == filling::FactStatus::Absent) return group;
  const std::string anchor = item.fact_id + ".anchor";
  if (link_ids.count(anchor)) {
    group["item"].push_back(
        {{"linkId", anchor}, {"answer", Json::array({Json{{"valueString", item.anchor_text}}})}});
  }
  for (const auto& a : item.modifier_answers) {
    const std::string id = item.fact_id + "." + a.modifier_id;
    if (!link_ids.count(id)) continue;
    group["item"].push_back({{"linkId", id}, {"answer", modifier_answers(a)}});
  }
  return group;
}

}  // namespace

Json template_to_questionnaire(const schema::ReportTemplate& tmpl,
                               const schema::FactSchema& schema) {
  if (tmpl.schema_id != schema.schema_id || tmpl.schema_version != schema.version) {
    throw Error(ErrorCode::SchemaMismatch, "template " + tmpl.template_id + " targets schema " +
                                               tmpl.schema_id + "@" + tmpl.schema_version);
  }
  Json q;
  q["resourceType"] = "Questionnaire";
  q["id"] = tmpl.template_id;
  q["status"] = "active";
  q["extension"] = Json::array({string_extension(kSchemaIdExtension, tmpl.schema_id),
                                string_extension(kSchemaVersionExtension, tmpl.schema_version)});
  q["item"] = Json::array();
  for (const auto& entry : tmpl.entries) {
    const auto* fact = schema.find_fact(entry.fact_id);
    if (!fact) throw Error(ErrorCode::SchemaMismatch, "unknown fact '" + entry.fact_id + "'");
    Json group;
    group["linkId"] = fact->id;
    group["text"] = fact->label;
    group["type"] = "group";
    group["repeats"] = true;
    group["item"] = Json::array();
    group["item"].push_back(
        {{"linkId", fact->id + ".presence"}, {"text", fact->label + " present"}, {"type", "boolean"}});
    group["item"].push_back(
        {{"linkId", fact->id + ".anchor"}, {"text", fact->anchor.label}, {"type", "string"}});
    for (const auto& mid : entry.modifier_ids) {
      const auto* mod = schema.find_modifier(mid);
      if (!mod) throw Error(ErrorCode::SchemaMismatch, "unknown modifier '" + mid + "'");
      Json child;
      child["linkId"] = fact->id + "." + mid;
      child["text"] = mod->label;
      if (const auto* vs = std::get_if<schema::ValueSet>(&mod->standardizer)) {
        child["type"] = "choice";
        if (!vs->max_card || *vs->max_card > 1) child["repeats"] = true;
        child["answerOption"] = Json::array();
        for (const auto& cv : vs->values) child["answerOption"].push_back({{"valueCoding", coding(cv)}});
      } else if (const auto* vu = std::get_if<schema::ValueUnit>(&mod->standardizer)) {
        child["type"] = "quantity";
        child["extension"] = Json::array(
            {Json{{"url", kUnitExtension},
                  {"valueCoding", {{"system", kUcumSystem}, {"code", vu->target_unit}}}}});
      } else {
        child["type"] = "string";
      }
      group["item"].push_back(std::move(child));
    }
    q["item"].push_back(std::move(group));
  }
  return q;
}

cas::SchemaRef questionnaire_schema_ref(const Json& questionnaire) {
  if (!questionnaire.is_object() || questionnaire.value("resourceType", "") != "Questionnaire") {
    malformed("resourceType must be \"Questionnaire\"");
  }
  cas::SchemaRef ref;
  if (auto it = questionnaire.find("extension"); it != questionnaire.end() && it->is_array()) {
    for (const auto& ext : *it) {
      if (!ext.is_object() || !ext.contains("valueString") || !ext["valueString"].is_string()) continue;
      const std::string url = ext.value("url", "");
      if (url == kSchemaIdExtension) ref.id = ext["valueString"].get<std::string>();
      if (url == kSchemaVersionExtension) ref.version = ext["valueString"].get<std::string>();
    }
  }
  if (ref.id.empty() || ref.version.empty()) malformed("missing schema-id/schema-version extension");
  return ref;
}

schema::ReportTemplate questionnaire_to_template(const Json& questionnaire,
                                                 const schema::FactSchema& schema) {
  const auto ref = questionnaire_schema_ref(questionnaire);
  if (ref.id != schema.schema_id || ref.version != schema.version) {
    throw Error(ErrorCode::SchemaMismatch, "Questionnaire targets schema " + ref.id + "@" +
                                               ref.version + ", not " + schema.schema_id + "@" +
                                               schema.version);
  }
  if (!questionnaire.contains("id") || !questionnaire["id"].is_string()) malformed("missing id");
  schema::ReportTemplate tmpl;
  tmpl.template_id = questionnaire["id"].get<std::string>();
  tmpl.schema_id = ref.id;
  tmpl.schema_version = ref.version;
  const Json& groups = items_of(questionnaire, "Questionnaire");
  if (groups.empty()) malformed("item list is empty");
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const std::string where = "item[" + std::to_string(g) + "]";
    const std::string fact_id = link_id(groups[g], where);
    const auto* fact = schema.find_fact(fact_id);
    if (!fact) throw Error(ErrorCode::UnknownLinkId, "unknown linkId '" + fact_id + "'", where);
    schema::TemplateEntry entry{fact_id, {}};
    const Json& children = items_of(groups[g], where);
    for (std::size_t c = 0; c < children.size(); ++c) {
      const std::string cwhere = where + ".item[" + std::to_string(c) + "]";
      const std::string id = link_id(children[c], cwhere);
      const std::string prefix = fact_id + ".";
      if (id.compare(0, prefix.size(), prefix) != 0) {
        throw Error(ErrorCode::UnknownLinkId, "unknown linkId '" + id + "'", cwhere);
      }
      const std::string rest = id.substr(prefix.size());
      if (rest == "presence" || rest == "anchor") continue;
      if (std::find(fact->modifier_ids.begin(), fact->modifier_ids.end(), rest) ==
          fact->modifier_ids.end()) {
        throw Error(ErrorCode::UnknownLinkId, "unknown linkId '" + id + "'", cwhere);
      }
      entry.modifier_ids.push_back(rest);
    }
    tmpl.entries.push_back(std::move(entry));
  }
  if (auto violations = schema::validate_template(tmpl, schema); !violations.empty()) {
    std::vector<std::string> details;
    for (const auto& v : violations) details.push_back(schema::to_string(v));
    throw Error(ErrorCode::MalformedInput, "Questionnaire: " + details.front(), {}, details);
  }
  return tmpl;
}

Json filled_to_response(const filling::FilledTemplate& filled, const Json& questionnaire) {
  std::set<std::string> link_ids;
  collect_link_ids(questionnaire, link_ids);
  Json r;
  r["resourceType"] = "QuestionnaireResponse";
  r["questionnaire"] = "Questionnaire/" + filled.template_id;
  r["status"] = "completed";
  r["item"] = Json::array();
  for (const auto& item : filled.items) {
    if (!link_ids.count(item.fact_id)) continue;
    r["item"].push_back(group_response(item, link_ids));
    for (const auto& repeat : item.repeats) r["item"].push_back(group_response(repeat, link_ids));
  }
  return r;
}

}  // namespace radex::fhir
