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

#include <sstream>

#include "radex/cas.hpp"
#include "radex/schema.hpp"
#include "xml.hpp"

namespace radex::schema {

namespace {

struct AllowedValue {
  std::string value;
  std::string description;
};

void write_feature(std::ostringstream& os, std::string_view name, std::string_view range,
                   std::string_view element_type = {}) {
  os << "        <featureDescription>\n"
     << "          <name>" << name << "</name>\n"
     << "          <description/>\n"
     << "          <rangeTypeName>" << range << "</rangeTypeName>\n";
  if (!element_type.empty()) {
    os << "          <elementType>" << element_type << "</elementType>\n"
       << "          <multipleReferencesAllowed>false</multipleReferencesAllowed>\n";
  }
  os << "        </featureDescription>\n";
}

void write_string_subtype(std::ostringstream& os, std::string_view name,
                          const std::vector<AllowedValue>& values) {
  os << "    <typeDescription>\n"
     << "      <name>" << name << "</name>\n"
     << "      <description/>\n"
     << "      <supertypeName>uima.cas.String</supertypeName>\n";
  if (values.empty()) {
    os << "      <allowedValues/>\n";
  } else {
    os << "      <allowedValues>\n";
    for (const auto& v : values) {
      os << "        <value>\n"
         << "          <string>" << xml::escape_text(v.value) << "</string>\n"
         << "          <description>" << xml::escape_text(v.description) << "</description>\n"
         << "        </value>\n";
    }
    os << "      </allowedValues>\n";
  }
  os << "    </typeDescription>\n";
}

void open_annotation_type(std::ostringstream& os, std::string_view name,
                          std::string_view description) {
  os << "    <typeDescription>\n"
     << "      <name>" << name << "</name>\n"
     << "      <description>" << description << "</description>\n"
     << "      <supertypeName>uima.tcas.Annotation</supertypeName>\n"
     << "      <features>\n";
}

void close_annotation_type(std::ostringstream& os) {
  os << "      </features>\n"
     << "    </typeDescription>\n";
}

}  // namespace

std::string export_uima_type_system(const FactSchema& schema) {
  const std::string ns(cas::kTypeNamespace);
  std::vector<AllowedValue> fact_ids, anchor_ids, modifier_ids;
  for (const auto& f : schema.facts) {
    fact_ids.push_back({f.id, f.label});
    anchor_ids.push_back({f.anchor.id, f.anchor.label});
  }
  for (const auto& m : schema.modifiers) modifier_ids.push_back({m.id, m.label});

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<typeSystemDescription xmlns=\"http://uima.apache.org/resourceSpecifier\">\n"
     << "  <name>" << xml::escape_text(schema.schema_id) << "</name>\n"
     << "  <description>RadEx type system for fact schema "
     << xml::escape_text(schema.schema_id) << "</description>\n"
     << "  <version>" << xml::escape_text(schema.version) << "</version>\n"
     << "  <vendor>org.radex</vendor>\n"
     << "  <types>\n";

  write_string_subtype(os, ns + ".FactId", fact_ids);
  write_string_subtype(os, ns + ".AnchorId", anchor_ids);
  write_string_subtype(os, ns + ".ModifierId", modifier_ids);

  open_annotation_type(os, ns + ".DocumentMetadata", "Document identity and schema reference");
  write_feature(os, "docId", "uima.cas.String");
  write_feature(os, "language", "uima.cas.String");
  write_feature(os, "schemaId", "uima.cas.String");
  write_feature(os, "schemaVersion", "uima.cas.String");
  close_annotation_type(os);

  open_annotation_type(os, ns + ".Fact", "Contiguous span asserting one fact");
  write_feature(os, "factId", ns + ".FactId");
  write_feature(os, "anchor", ns + ".Anchor");
  write_feature(os, "modifiers", "uima.cas.FSArray", ns + ".Modifier");
  close_annotation_type(os);

  open_annotation_type(os, ns + ".Anchor", "Central phrase of a fact");
  write_feature(os, "anchorId", ns + ".AnchorId");
  close_annotation_type(os);

  open_annotation_type(os, ns + ".Modifier", "Additional information attached to a fact");
  write_feature(os, "modifierId", ns + ".ModifierId");
  close_annotation_type(os);

  os << "  </types>\n"
     << "</typeSystemDescription>\n";
  return os.str();
}

}  // namespace radex::schema
