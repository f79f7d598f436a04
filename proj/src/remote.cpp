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

#include <httplib.h>

#include <json.hpp>

#include "radex/error.hpp"
#include "radex/extraction.hpp"
#include "radex/unicode.hpp"

namespace radex::extraction {

namespace {

using json = nlohmann::json;

std::string span_text(const cas::SpanOffset& s) { return cas::to_string(s); }

bool is_offset(const json& v) { return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0); }

cas::SpanOffset read_span(const json& obj, const std::string& where) {
  if (!obj.is_object() || !obj.contains("begin") || !obj.contains("end") ||
      !is_offset(obj["begin"]) || !obj["end"].is_number_integer()) {
    throw Error(ErrorCode::ProtocolError, where + ": expected integer begin/end");
  }
  const long long end = obj["end"].get<long long>();
  if (end < 0) throw Error(ErrorCode::ProtocolError, where + ": negative end");
  return {obj["begin"].get<std::size_t>(), static_cast<std::size_t>(end)};
}

std::optional<double> read_confidence(const json& obj, const std::string& where) {
  auto it = obj.find("confidence");
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw Error(ErrorCode::ProtocolError, where + ".confidence: expected a number");
  return it->get<double>();
}

}  // namespace

std::string extraction_request_json(const cas::SchemaRef& schema, std::string_view text) {
  nlohmann::ordered_json j;
  j["schema_id"] = schema.id;
  j["schema_version"] = schema.version;
  j["text"] = std::string(text);
  return j.dump();
}

std::string extracted_facts_to_json(const std::vector<ExtractedFact>& facts) {
  nlohmann::ordered_json j;
  j["facts"] = nlohmann::ordered_json::array();
  for (const auto& f : facts) {
    nlohmann::ordered_json jf;
    jf["fact_id"] = f.fact_id;
    jf["begin"] = f.span.begin;
    jf["end"] = f.span.end;
    jf["anchor"] = {{"begin", f.anchor_span.begin}, {"end", f.anchor_span.end}};
    if (f.anchor_confidence) jf["anchor"]["confidence"] = *f.anchor_confidence;
    jf["modifiers"] = nlohmann::ordered_json::array();
    for (const auto& m : f.modifiers) {
      nlohmann::ordered_json jm;
      jm["modifier_id"] = m.modifier_id;
      jm["begin"] = m.span.begin;
      jm["end"] = m.span.end;
      if (m.confidence) jm["confidence"] = *m.confidence;
      jf["modifiers"].push_back(std::move(jm));
    }
    if (f.confidence) jf["confidence"] = *f.confidence;
    j["facts"].push_back(std::move(jf));
  }
  return j.dump();
}

std::vector<ExtractedFact> parse_extraction_response(std::string_view body,
                                                     const schema::FactSchema& schema,
                                                     std::size_t text_length) {
  json j;
  try {
    j = json::parse(body.begin(), body.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ProtocolError, std::string("response is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("facts") || !j["facts"].is_array()) {
    throw Error(ErrorCode::ProtocolError, "response lacks a 'facts' array");
  }
  std::vector<ExtractedFact> out;
  std::vector<std::string> problems;
  const auto& facts = j["facts"];
  for (std::size_t i = 0; i < facts.size(); ++i) {
    const std::string where = "facts[" + std::to_string(i) + "]";
    const json& jf = facts[i];
    if (!jf.is_object() || !jf.contains("fact_id") || !jf["fact_id"].is_string()) {
      throw Error(ErrorCode::ProtocolError, where + ": expected an object with a fact_id");
    }
    ExtractedFact f;
    f.fact_id = jf["fact_id"].get<std::string>();
    f.span = read_span(jf, where);
    f.confidence = read_confidence(jf, where);

    std::vector<const json*> anchors;
    if (auto it = jf.find("anchor"); it != jf.end()) {
      if (it->is_array()) {
        for (const auto& a : *it) anchors.push_back(&a);
      } else {
        anchors.push_back(&*it);
      }
    }
    if (auto it = jf.find("anchors"); it != jf.end()) {
      if (!it->is_array()) throw Error(ErrorCode::ProtocolError, where + ".anchors: expected an array");
      for (const auto& a : *it) anchors.push_back(&a);
    }
    if (anchors.size() != 1) {
      problems.push_back(where + " (" + f.fact_id + " " + span_text(f.span) + "): " +
                         std::to_string(anchors.size()) + " anchors, expected exactly one");
      continue;
    }
    f.anchor_span = read_span(*anchors.front(), where + ".anchor");
    f.anchor_confidence = read_confidence(*anchors.front(), where + ".anchor");

    if (auto it = jf.find("modifiers"); it != jf.end() && !it->is_null()) {
      if (!it->is_array()) throw Error(ErrorCode::ProtocolError, where + ".modifiers: expected an array");
      for (std::size_t k = 0; k < it->size(); ++k) {
        const std::string mw = where + ".modifiers[" + std::to_string(k) + "]";
        const json& jm = (*it)[k];
        if (!jm.is_object() || !jm.contains("modifier_id") || !jm["modifier_id"].is_string()) {
          throw Error(ErrorCode::ProtocolError, mw + ": expected an object with a modifier_id");
        }
        f.modifiers.push_back({jm["modifier_id"].get<std::string>(), read_span(jm, mw),
                               read_confidence(jm, mw)});
      }
    }

    const auto* def = schema.find_fact(f.fact_id);
    if (!def) {
      problems.push_back(where + ": unknown fact id '" + f.fact_id + "'");
      continue;
    }
    f.anchor_id = def->anchor.id;
    const auto bad = [&](const cas::SpanOffset& s) { return s.begin >= s.end || s.end > text_length; };
    if (bad(f.span)) {
      problems.push_back(where + " (" + f.fact_id + "): span " + span_text(f.span) +
                         " outside text of length " + std::to_string(text_length));
    }
    if (bad(f.anchor_span) || !f.span.contains(f.anchor_span)) {
      problems.push_back(where + ".anchor: span " + span_text(f.anchor_span) +
                         " not within fact span " + span_text(f.span));
    }
    for (std::size_t k = 0; k < f.modifiers.size(); ++k) {
      const auto& m = f.modifiers[k];
      const std::string mw = where + ".modifiers[" + std::to_string(k) + "]";
      if (std::find(def->modifier_ids.begin(), def->modifier_ids.end(), m.modifier_id) ==
          def->modifier_ids.end()) {
        problems.push_back(mw + ": modifier '" + m.modifier_id + "' is not a modifier of fact '" +
                           f.fact_id + "'");
      }
      if (bad(m.span) || !f.span.contains(m.span)) {
        problems.push_back(mw + ": span " + span_text(m.span) + " not within fact span " +
                           span_text(f.span));
      }
    }
    out.push_back(std::move(f));
  }
  if (!problems.empty()) {
    throw Error(ErrorCode::InvalidSpans,
                std::to_string(problems.size()) + " invalid entr" +
                    (problems.size() == 1 ? "y" : "ies") + " in extractor response: " + problems.front(),
                {}, problems);
  }
  return out;
}

std::vector<ExtractedFact> remote_extract(const ExtractorDescriptor& descriptor,
                                          const schema::FactSchema& schema, std::string_view text,
                                          const RemoteOptions& options) {
  if (descriptor.kind != ExtractorKind::Remote || descriptor.endpoint.empty()) {
    throw Error(ErrorCode::MalformedInput, "extractor '" + descriptor.name + "' has no endpoint");
  }
  const std::string& url = descriptor.endpoint;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.compare(0, scheme_end, "http") != 0) {
    throw Error(ErrorCode::MalformedInput, "unsupported endpoint URL '" + url + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  const std::string base = url.substr(0, path_start);
  std::string prefix = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  const std::string path = prefix + "/v1/extract";

  httplib::Client client(base);
  client.set_connection_timeout(options.connect_timeout_seconds, 0);
  client.set_read_timeout(options.read_timeout_seconds, 0);
  const auto res = client.Post(path, extraction_request_json(
                                         {schema.schema_id, schema.version}, text),
                               "application/json");
  if (!res) {
    throw Error(ErrorCode::Unreachable,
                "extractor endpoint " + url + path.substr(prefix.size()) +
                    " unreachable: " + httplib::to_string(res.error()),
                url);
  }
  if (res->status != 200) {
    std::string message = "extractor endpoint " + url + " answered HTTP " + std::to_string(res->status);
    const auto j = json::parse(res->body, nullptr, false);
    if (j.is_object() && j.contains("error") && j["error"].is_object() &&
        j["error"].value("message", std::string()).size() > 0) {
      message += ": " + j["error"]["message"].get<std::string>();
    }
    throw Error(ErrorCode::ProtocolError, message, url);
  }
  try {
    return parse_extraction_response(res->body, schema, unicode::length(text));
  } catch (const Error& e) {
    throw Error(e.code(), "extractor endpoint " + url + ": " + e.what(), url, e.details());
  }
}

}  // namespace radex::extraction
