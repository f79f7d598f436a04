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

#ifndef RADEX_CAS_HPP_
#define RADEX_CAS_HPP_

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "radex/schema.hpp"

// RadEx CAS documents, their XMI serialization, annotation-tool layer
// configuration, and conversion of annotation-tool XMI exports.
namespace radex::cas {

inline constexpr std::string_view kTypeNamespace = "org.radex.types";
inline constexpr std::string_view kTypeNamespaceUri = "http:///org/radex/types.ecore";

// Half-open code point range [begin, end).
struct SpanOffset {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - begin; }
  bool contains(const SpanOffset& other) const {
    return begin <= other.begin && other.end <= end;
  }
  friend bool operator==(const SpanOffset&, const SpanOffset&) = default;
  friend auto operator<=>(const SpanOffset&, const SpanOffset&) = default;
};

std::string to_string(const SpanOffset& span);

struct ModifierAnnotation {
  std::string modifier_id;
  SpanOffset span;

  friend bool operator==(const ModifierAnnotation&, const ModifierAnnotation&) = default;
};

struct FactAnnotation {
  std::string fact_id;
  SpanOffset span;
  std::string anchor_id;
  SpanOffset anchor_span;
  std::vector<ModifierAnnotation> modifiers;

  friend bool operator==(const FactAnnotation&, const FactAnnotation&) = default;
};

struct SchemaRef {
  std::string id;
  std::string version;

  friend bool operator==(const SchemaRef&, const SchemaRef&) = default;
};

struct RadExCasDocument {
  std::string doc_id;
  std::string text;  // UTF-8
  std::string language;
  SchemaRef schema;
  std::vector<FactAnnotation> annotations;

  friend bool operator==(const RadExCasDocument&, const RadExCasDocument&) = default;
};

// Structural problems (bounds, begin < end, containment) given the document
// length in code points. Empty means the annotations are well formed.
std::vector<std::string> check_annotations(const std::vector<FactAnnotation>& annotations,
                                           std::size_t text_length);
// Structural problems plus ids that do not resolve against the schema.
std::vector<std::string> check_document(const RadExCasDocument& doc,
                                        const schema::FactSchema& schema);

// Offsets are written as UTF-16 code units, per UIMA convention.
std::string serialize_radex_cas(const RadExCasDocument& doc);
// Throws MalformedXmi, UnknownType or OffsetOutOfBounds.
RadExCasDocument parse_radex_cas(std::string_view xmi);

// --- annotation tool configuration ------------------------------------------

struct Tag {
  std::string name;
  std::string description;

  friend bool operator==(const Tag&, const Tag&) = default;
};

struct LayerSpec {
  std::string name;         // Fact, Anchor or Modifier
  std::string type_name;    // tool-side type
  std::string granularity;  // span anchoring mode understood by the tool
  std::string feature;
  bool allow_overlap = true;
  bool cross_sentence = true;
  std::vector<Tag> tags;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

struct AnnotationConfiguration {
  std::string tool_id;
  std::vector<LayerSpec> layers;

  friend bool operator==(const AnnotationConfiguration&, const AnnotationConfiguration&) = default;
};

AnnotationConfiguration generate_annotation_config(const schema::FactSchema& schema,
                                                   std::string tool_id = "inception");
std::string serialize_annotation_config(const AnnotationConfiguration& config);

// --- external CAS conversion -------------------------------------------------

enum class OffsetEncoding { Utf16, CodePoint };

struct LayerSource {
  std::string type_name;  // fully qualified, e.g. webanno.custom.Fact
  std::string feature;    // feature holding the id; may be empty for Anchor
};

struct ExternalCasMapping {
  LayerSource fact;
  LayerSource anchor;
  LayerSource modifier;
  OffsetEncoding encoding = OffsetEncoding::Utf16;

  // Matches the layers emitted by generate_annotation_config.
  static ExternalCasMapping inception_default();
};

ExternalCasMapping parse_cas_mapping(std::string_view json_bytes);
std::string serialize_cas_mapping(const ExternalCasMapping& mapping);

// Throws MalformedXmi, UnmappedType, UnknownLabel, OffsetOutOfBounds, or
// OrphanEntity whose details list every offending span.
RadExCasDocument convert_external_cas(std::string_view xmi, const ExternalCasMapping& mapping,
                                      const schema::FactSchema& schema,
                                      std::string doc_id = {});

}  // namespace radex::cas

#endif  // RADEX_CAS_HPP_
