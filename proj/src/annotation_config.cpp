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

#include "json_util.hpp"
#include "radex/cas.hpp"

namespace radex::cas {

namespace {

LayerSpec make_layer(std::string name, const LayerSource& source, std::vector<Tag> tags) {
  LayerSpec layer;
  layer.name = std::move(name);
  layer.type_name = source.type_name;
  layer.granularity = "tokens";
  layer.feature = source.feature;
  layer.allow_overlap = true;
  layer.cross_sentence = layer.name == "Fact";
  layer.tags = std::move(tags);
  return layer;
}

std::string encoding_name(OffsetEncoding e) {
  return e == OffsetEncoding::Utf16 ? "utf16" : "codepoint";
}

}  // namespace

ExternalCasMapping ExternalCasMapping::inception_default() {
  ExternalCasMapping m;
  m.fact = {"webanno.custom.Fact", "factId"};
  m.anchor = {"webanno.custom.Anchor", "anchorId"};
  m.modifier = {"webanno.custom.Modifier", "modifierId"};
  m.encoding = OffsetEncoding::Utf16;
  return m;
}

AnnotationConfiguration generate_annotation_config(const schema::FactSchema& schema,
                                                   std::string tool_id) {
  const auto mapping = ExternalCasMapping::inception_default();
  std::vector<Tag> facts, anchors, modifiers;
  for (const auto& f : schema.facts) {
    facts.push_back({f.id, f.label});
    anchors.push_back({f.anchor.id, f.anchor.label});
  }
  for (const auto& m : schema.modifiers) modifiers.push_back({m.id, m.label});

  AnnotationConfiguration config;
  config.tool_id = std::move(tool_id);
  config.layers.push_back(make_layer("Fact", mapping.fact, std::move(facts)));
  config.layers.push_back(make_layer("Anchor", mapping.anchor, std::move(anchors)));
  config.layers.push_back(make_layer("Modifier", mapping.modifier, std::move(modifiers)));
  return config;
}

std::string serialize_annotation_config(const AnnotationConfiguration& config) {
  nlohmann::ordered_json j;
  j["tool_id"] = config.tool_id;
  j["layers"] = nlohmann::ordered_json::array();
  for (const auto& layer : config.layers) {
    nlohmann::ordered_json lj;
    lj["name"] = layer.name;
    lj["type"] = layer.type_name;
    lj["anchoring_mode"] = layer.granularity;
    lj["overlap_mode"] = layer.allow_overlap ? "any" : "none";
    lj["cross_sentence"] = layer.cross_sentence;
    lj["feature"] = layer.feature;
    lj["tagset"]["name"] = layer.name + " ids";
    lj["tagset"]["create_tag"] = false;
    lj["tagset"]["tags"] = nlohmann::ordered_json::array();
    for (const auto& tag : layer.tags) {
      nlohmann::ordered_json tj;
      tj["tag_name"] = tag.name;
      tj["tag_description"] = tag.description;
      lj["tagset"]["tags"].push_back(std::move(tj));
    }
    j["layers"].push_back(std::move(lj));
  }
  return j.dump(2) + "\n";
}

ExternalCasMapping parse_cas_mapping(std::string_view json_bytes) {
  const auto j = json_util::parse(json_bytes, "CAS mapping");
  ExternalCasMapping m;
  const auto layer = [&](std::string_view name, LayerSource& out, bool feature_required) {
    const std::string path = "layers." + std::string(name);
    const auto& layers = json_util::require(j, "layers", "");
    if (!layers.is_object() || !layers.contains(name)) {
      throw Error(ErrorCode::UnmappedType, "mapping does not cover layer " + std::string(name),
                  path);
    }
    const auto& lj = layers[std::string(name)];
    out.type_name = json_util::require_string(lj, "type", path);
    out.feature = feature_required ? json_util::require_string(lj, "feature", path)
                                   : json_util::optional_string(lj, "feature", path);
    if (out.type_name.empty()) {
      throw Error(ErrorCode::UnmappedType, "layer " + std::string(name) + " has no source type",
                  path);
    }
  };
  layer("Fact", m.fact, true);
  layer("Anchor", m.anchor, false);
  layer("Modifier", m.modifier, true);
  const std::string enc = json_util::optional_string(j, "offset_encoding", "", "utf16");
  if (enc == "utf16") {
    m.encoding = OffsetEncoding::Utf16;
  } else if (enc == "codepoint") {
    m.encoding = OffsetEncoding::CodePoint;
  } else {
    json_util::fail("offset_encoding", "expected \"utf16\" or \"codepoint\"");
  }
  return m;
}

std::string serialize_cas_mapping(const ExternalCasMapping& mapping) {
  nlohmann::ordered_json j;
  j["offset_encoding"] = encoding_name(mapping.encoding);
  const auto put = [&](const char* name, const LayerSource& s) {
    j["layers"][name]["type"] = s.type_name;
    j["layers"][name]["feature"] = s.feature;
  };
  put("Fact", mapping.fact);
  put("Anchor", mapping.anchor);
  put("Modifier", mapping.modifier);
  return j.dump(2) + "\n";
}

}  // namespace radex::cas
