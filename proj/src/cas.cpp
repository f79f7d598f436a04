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

#include "radex/cas.hpp"

#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "radex/error.hpp"
#include "radex/unicode.hpp"
#include "xml.hpp"
#include "xmi_common.hpp"

namespace radex::cas {

namespace {

bool xml_char_allowed(char32_t c) {
  return c == 0x9 || c == 0xA || c == 0xD || (c >= 0x20 && c <= 0xD7FF) ||
         (c >= 0xE000 && c <= 0xFFFD) || (c >= 0x10000 && c <= 0x10FFFF);
}

}  // namespace

std::string to_string(const SpanOffset& span) {
  return "[" + std::to_string(span.begin) + "," + std::to_string(span.end) + ")";
}

std::vector<std::string> check_annotations(const std::vector<FactAnnotation>& annotations,
                                           std::size_t text_length) {
  std::vector<std::string> out;
  const auto check_span = [&](const SpanOffset& s, const std::string& what) {
    if (s.begin >= s.end || s.end > text_length) {
      out.push_back(what + " span " + to_string(s) + " is empty or outside the text (length " +
                    std::to_string(text_length) + ")");
      return false;
    }
    return true;
  };
  for (std::size_t i = 0; i < annotations.size(); ++i) {
    const auto& a = annotations[i];
    const std::string where = "annotations[" + std::to_string(i) + "]";
    const bool fact_ok = check_span(a.span, where + " fact '" + a.fact_id + "'");
    if (check_span(a.anchor_span, where + " anchor") && fact_ok &&
        !a.span.contains(a.anchor_span)) {
      out.push_back(where + " anchor " + to_string(a.anchor_span) + " lies outside fact span " +
                    to_string(a.span));
    }
    for (const auto& m : a.modifiers) {
      if (check_span(m.span, where + " modifier '" + m.modifier_id + "'") && fact_ok &&
          !a.span.contains(m.span)) {
        out.push_back(where + " modifier '" + m.modifier_id + "' " + to_string(m.span) +
                      " lies outside fact span " + to_string(a.span));
      }
    }
  }
  return out;
}

std::vector<std::string> check_document(const RadExCasDocument& doc,
                                        const schema::FactSchema& schema) {
  auto out = check_annotations(doc.annotations, unicode::length(doc.text));
  if (doc.schema.id != schema.schema_id || doc.schema.version != schema.version) {
    out.push_back("document references schema " + doc.schema.id + "@" + doc.schema.version +
                  ", expected " + schema.schema_id + "@" + schema.version);
  }
  for (const auto& a : doc.annotations) {
    const auto* fact = schema.find_fact(a.fact_id);
    if (!fact) {
      out.push_back("unknown fact id '" + a.fact_id + "'");
      continue;
    }
    if (fact->anchor.id != a.anchor_id) {
      out.push_back("fact '" + a.fact_id + "' carries anchor '" + a.anchor_id + "', expected '" +
                    fact->anchor.id + "'");
    }
    for (const auto& m : a.modifiers) {
      if (std::find(fact->modifier_ids.begin(), fact->modifier_ids.end(), m.modifier_id) ==
          fact->modifier_ids.end()) {
        out.push_back("modifier '" + m.modifier_id + "' is not a modifier of fact '" +
                      a.fact_id + "'");
      }
    }
  }
  return out;
}

std::string serialize_radex_cas(const RadExCasDocument& doc) {
  const std::u32string text = unicode::decode(doc.text);
  for (char32_t c : text) {
    if (!xml_char_allowed(c)) {
      throw Error(ErrorCode::MalformedInput, "document text contains a character XML cannot carry");
    }
  }
  if (auto problems = check_annotations(doc.annotations, text.size()); !problems.empty()) {
    throw Error(ErrorCode::OffsetOutOfBounds, problems.front(), doc.doc_id, problems);
  }
  const unicode::OffsetMap offsets(text);
  const auto b = [&](const SpanOffset& s) { return std::to_string(offsets.to_utf16(s.begin)); };
  const auto e = [&](const SpanOffset& s) { return std::to_string(offsets.to_utf16(s.end)); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<xmi:XMI xmlns:xmi=\"" << xmi::kXmiNs << "\" xmlns:cas=\"" << xmi::kCasNs
     << "\" xmlns:tcas=\"" << xmi::kTcasNs << "\" xmlns:types=\"" << kTypeNamespaceUri
     << "\" xmi:version=\"2.0\">\n"
     << "  <cas:NULL xmi:id=\"0\"/>\n"
     << "  <cas:Sofa xmi:id=\"1\" sofaNum=\"1\" sofaID=\"_InitialView\" mimeType=\"text/plain\" "
        "sofaString=\""
     << xml::escape_attr(doc.text) << "\"/>\n"
     << "  <types:DocumentMetadata xmi:id=\"2\" sofa=\"1\" begin=\"0\" end=\"0\" docId=\""
     << xml::escape_attr(doc.doc_id) << "\" language=\"" << xml::escape_attr(doc.language)
     << "\" schemaId=\"" << xml::escape_attr(doc.schema.id) << "\" schemaVersion=\""
     << xml::escape_attr(doc.schema.version) << "\"/>\n";

  std::vector<int> members{2};
  int next_id = 3;
  for (const auto& a : doc.annotations) {
    const int fact_id = next_id++;
    const int anchor_id = next_id++;
    std::string modifier_refs;
    std::vector<int> modifier_ids;
    for (std::size_t k = 0; k < a.modifiers.size(); ++k) {
      modifier_ids.push_back(next_id++);
      if (k) modifier_refs += ' ';
      modifier_refs += std::to_string(modifier_ids.back());
    }
    os << "  <types:Fact xmi:id=\"" << fact_id << "\" sofa=\"1\" begin=\"" << b(a.span)
       << "\" end=\"" << e(a.span) << "\" factId=\"" << xml::escape_attr(a.fact_id)
       << "\" anchor=\"" << anchor_id << "\"";
    if (!modifier_refs.empty()) os << " modifiers=\"" << modifier_refs << "\"";
    os << "/>\n";
    os << "  <types:Anchor xmi:id=\"" << anchor_id << "\" sofa=\"1\" begin=\"" << b(a.anchor_span)
       << "\" end=\"" << e(a.anchor_span) << "\" anchorId=\"" << xml::escape_attr(a.anchor_id)
       << "\"/>\n";
    for (std::size_t k = 0; k < a.modifiers.size(); ++k) {
      const auto& m = a.modifiers[k];
      os << "  <types:Modifier xmi:id=\"" << modifier_ids[k] << "\" sofa=\"1\" begin=\""
         << b(m.span) << "\" end=\"" << e(m.span) << "\" modifierId=\""
         << xml::escape_attr(m.modifier_id) << "\"/>\n";
    }
    members.push_back(fact_id);
    members.push_back(anchor_id);
    members.insert(members.end(), modifier_ids.begin(), modifier_ids.end());
  }
  os << "  <cas:View sofa=\"1\" members=\"";
  for (std::size_t i = 0; i < members.size(); ++i) os << (i ? " " : "") << members[i];
  os << "\"/>\n</xmi:XMI>\n";
  return os.str();
}

RadExCasDocument parse_radex_cas(std::string_view bytes) {
  const auto root = xml::parse(bytes);
  const xmi::Sofa sofa = xmi::find_sofa(*root);
  const unicode::OffsetMap offsets(sofa.text);

  RadExCasDocument doc;
  doc.text = unicode::encode(sofa.text);

  struct Pending {
    const xml::Element* el;
    SpanOffset span;
  };
  std::map<std::string, Pending> anchors;
  std::map<std::string, Pending> modifiers;
  std::map<std::string, std::vector<std::string>> arrays;
  std::vector<Pending> facts;

  for (const auto& child : root->children) {
    const xml::Element& el = *child;
    if (el.name.ns == xmi::kFsArrayNs && el.name.local == "FSArray") {
      if (const auto* id = el.attr(xmi::kXmiNs, "id")) {
        arrays[*id] = xmi::split_ids(el.attr("elements") ? *el.attr("elements") : "");
      }
      continue;
    }
    if (xmi::is_framework_element(el)) continue;
    if (el.name.ns != kTypeNamespaceUri) {
      throw Error(ErrorCode::UnknownType,
                  "element type " + xmi::type_name(el.name) + " is not part of the RadEx type system");
    }
    const std::string& local = el.name.local;
    if (local == "DocumentMetadata") {
      doc.doc_id = el.attr("docId") ? *el.attr("docId") : "";
      doc.language = el.attr("language") ? *el.attr("language") : "";
      doc.schema.id = el.attr("schemaId") ? *el.attr("schemaId") : "";
      doc.schema.version = el.attr("schemaVersion") ? *el.attr("schemaVersion") : "";
      continue;
    }
    if (local != "Fact" && local != "Anchor" && local != "Modifier") {
      throw Error(ErrorCode::UnknownType, "unknown RadEx type " + xmi::type_name(el.name));
    }
    const auto* xid = el.attr(xmi::kXmiNs, "id");
    if (!xid) throw Error(ErrorCode::MalformedXmi, local + " element without xmi:id");
    Pending p{&el, xmi::read_span(el, offsets, OffsetEncoding::Utf16)};
    if (local == "Fact") {
      facts.push_back(p);
    } else if (local == "Anchor") {
      anchors.emplace(*xid, p);
    } else {
      modifiers.emplace(*xid, p);
    }
  }

  std::set<std::string> referenced;
  for (const auto& f : facts) {
    FactAnnotation a;
    a.fact_id = xmi::require_attr(*f.el, "factId");
    a.span = f.span;
    const std::string anchor_ref = xmi::require_attr(*f.el, "anchor");
    auto ait = anchors.find(anchor_ref);
    if (ait == anchors.end()) {
      throw Error(ErrorCode::MalformedXmi,
                  "fact '" + a.fact_id + "' references missing anchor " + anchor_ref);
    }
    a.anchor_id = xmi::require_attr(*ait->second.el, "anchorId");
    a.anchor_span = ait->second.span;
    if (!referenced.insert(anchor_ref).second) {
      throw Error(ErrorCode::MalformedXmi, "anchor " + anchor_ref + " is shared by two facts");
    }
    std::vector<std::string> refs;
    if (const auto* m = f.el->attr("modifiers")) refs = xmi::split_ids(*m);
    if (refs.size() == 1 && arrays.count(refs.front())) refs = arrays[refs.front()];
    for (const auto& ref : refs) {
      auto mit = modifiers.find(ref);
      if (mit == modifiers.end()) {
        throw Error(ErrorCode::MalformedXmi,
                    "fact '" + a.fact_id + "' references missing modifier " + ref);
      }
      a.modifiers.push_back({xmi::require_attr(*mit->second.el, "modifierId"), mit->second.span});
      referenced.insert(ref);  // modifiers may be shared between facts
    }
    doc.annotations.push_back(std::move(a));
  }
  if (referenced.size() != anchors.size() + modifiers.size()) {
    throw Error(ErrorCode::MalformedXmi,
                "anchor or modifier annotations are not attached to exactly one fact");
  }
  if (auto problems = check_annotations(doc.annotations, sofa.text.size()); !problems.empty()) {
    throw Error(ErrorCode::MalformedXmi, problems.front(), doc.doc_id, problems);
  }
  return doc;
}

}  // namespace radex::cas
