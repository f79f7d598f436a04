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

#include <algorithm>
#include <set>

#include "radex/cas.hpp"
#include "radex/error.hpp"
#include "radex/unicode.hpp"
#include "xmi_common.hpp"
#include "xml.hpp"

namespace radex::cas {

namespace {

enum class Layer { Fact, Anchor, Modifier };

const char* layer_name(Layer l) {
  switch (l) {
    case Layer::Fact: return "Fact";
    case Layer::Anchor: return "Anchor";
    default: return "Modifier";
  }
}

struct RawSpan {
  Layer layer;
  std::string label;  // may be empty for anchors mapped without a feature
  SpanOffset span;
  std::size_t order;  // position in the XMI
};

std::string describe(const RawSpan& s) {
  return std::string(layer_name(s.layer)) + " '" + s.label + "' " + to_string(s.span);
}

// Smallest enclosing fact among those accepted by `eligible`; ties go to the
// earlier fact in document order.
template <typename Pred>
std::optional<std::size_t> attach(const std::vector<RawSpan>& facts, const SpanOffset& span,
                                  Pred eligible) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < facts.size(); ++i) {
    if (!facts[i].span.contains(span) || !eligible(facts[i])) continue;
    if (!best || facts[i].span.length() < facts[*best].span.length()) best = i;
  }
  return best;
}

std::string language_of(const xml::Element& root) {
  for (const auto& child : root.children) {
    if (child->name.local == "DocumentAnnotation" || child->name.local == "DocumentMetaData") {
      if (const auto* lang = child->attr("language"); lang && !lang->empty() && *lang != "x-unspecified") {
        return *lang;
      }
    }
  }
  return {};
}

std::string doc_id_of(const xml::Element& root) {
  for (const auto& child : root.children) {
    if (child->name.local == "DocumentMetaData") {
      for (const char* key : {"documentId", "documentTitle"}) {
        if (const auto* v = child->attr(key); v && !v->empty()) return *v;
      }
    }
  }
  return {};
}

}  // namespace

RadExCasDocument convert_external_cas(std::string_view bytes, const ExternalCasMapping& mapping,
                                      const schema::FactSchema& schema, std::string doc_id) {
  for (const auto* src : {&mapping.fact, &mapping.anchor, &mapping.modifier}) {
    if (src->type_name.empty()) {
      throw Error(ErrorCode::UnmappedType, "mapping leaves a RadEx layer without a source type");
    }
  }
  const auto root = xml::parse(bytes);
  const xmi::Sofa sofa = xmi::find_sofa(*root);
  const unicode::OffsetMap offsets(sofa.text);

  const std::set<std::string> mapped_packages = {xmi::package_of(mapping.fact.type_name),
                                                 xmi::package_of(mapping.anchor.type_name),
                                                 xmi::package_of(mapping.modifier.type_name)};
  std::vector<RawSpan> facts, anchors, modifiers;
  std::set<std::string> unmapped;
  std::vector<std::string> unknown_labels;
  std::size_t order = 0;
  for (const auto& child : root->children) {
    const xml::Element& el = *child;
    if (xmi::is_framework_element(el)) continue;
    const std::string type = xmi::type_name(el.name);
    const LayerSource* src = nullptr;
    Layer layer = Layer::Fact;
    if (type == mapping.fact.type_name) {
      src = &mapping.fact;
    } else if (type == mapping.anchor.type_name) {
      src = &mapping.anchor;
      layer = Layer::Anchor;
    } else if (type == mapping.modifier.type_name) {
      src = &mapping.modifier;
      layer = Layer::Modifier;
    } else {
      if (mapped_packages.count(xmi::package_of(type))) unmapped.insert(type);
      continue;
    }
    if (const auto* sofa_ref = el.attr("sofa"); sofa_ref && !sofa.id.empty() && *sofa_ref != sofa.id) {
      continue;  // annotation on another view
    }
    RawSpan raw{layer, {}, xmi::read_span(el, offsets, mapping.encoding), order++};
    if (!src->feature.empty()) {
      const auto* label = el.attr(src->feature);
      raw.label = label ? *label : "";
      bool known = false;
      if (layer == Layer::Fact) known = schema.find_fact(raw.label) != nullptr;
      if (layer == Layer::Anchor) known = schema.find_anchor_owner(raw.label) != nullptr;
      if (layer == Layer::Modifier) known = schema.find_modifier(raw.label) != nullptr;
      if (!known) {
        unknown_labels.push_back(describe(raw));
        continue;
      }
    }
    (layer == Layer::Fact ? facts : layer == Layer::Anchor ? anchors : modifiers).push_back(raw);
  }
  if (!unmapped.empty()) {
    throw Error(ErrorCode::UnmappedType, "annotation types without a RadEx mapping: " + *unmapped.begin(),
                {}, std::vector<std::string>(unmapped.begin(), unmapped.end()));
  }
  if (!unknown_labels.empty()) {
    throw Error(ErrorCode::UnknownLabel,
                "annotations carry ids unknown to schema " + schema.schema_id + ": " +
                    unknown_labels.front(),
                {}, unknown_labels);
  }

  const auto by_position = [](const RawSpan& a, const RawSpan& b) {
    return std::tie(a.span.begin, a.span.end, a.order) < std::tie(b.span.begin, b.span.end, b.order);
  };
  std::stable_sort(facts.begin(), facts.end(), by_position);
  std::stable_sort(anchors.begin(), anchors.end(), by_position);
  std::stable_sort(modifiers.begin(), modifiers.end(), by_position);

  std::vector<std::string> orphans;
  std::vector<std::vector<const RawSpan*>> fact_anchors(facts.size());
  std::vector<std::vector<const RawSpan*>> fact_modifiers(facts.size());
  for (const auto& a : anchors) {
    auto owner = attach(facts, a.span, [&](const RawSpan& f) {
      return a.label.empty() || schema.find_fact(f.label)->anchor.id == a.label;
    });
    if (!owner) {
      orphans.push_back(describe(a) + ": no enclosing fact");
    } else {
      fact_anchors[*owner].push_back(&a);
    }
  }
  for (const auto& m : modifiers) {
    auto owner = attach(facts, m.span, [&](const RawSpan& f) {
      const auto& ids = schema.find_fact(f.label)->modifier_ids;
      return std::find(ids.begin(), ids.end(), m.label) != ids.end();
    });
    if (!owner) {
      orphans.push_back(describe(m) + ": no enclosing fact that takes this modifier");
    } else {
      fact_modifiers[*owner].push_back(&m);
    }
  }
  for (std::size_t i = 0; i < facts.size(); ++i) {
    if (fact_anchors[i].size() != 1) {
      orphans.push_back(describe(facts[i]) + ": contains " + std::to_string(fact_anchors[i].size()) +
                        " anchors, expected exactly 1");
    }
  }
  if (!orphans.empty()) {
    throw Error(ErrorCode::OrphanEntity,
                std::to_string(orphans.size()) + " annotation(s) violate fact containment: " +
                    orphans.front(),
                {}, orphans);
  }

  RadExCasDocument doc;
  doc.doc_id = !doc_id.empty() ? std::move(doc_id) : doc_id_of(*root);
  doc.text = unicode::encode(sofa.text);
  doc.language = language_of(*root);
  if (doc.language.empty()) doc.language = schema.language;
  doc.schema = {schema.schema_id, schema.version};
  for (std::size_t i = 0; i < facts.size(); ++i) {
    const auto* def = schema.find_fact(facts[i].label);
    FactAnnotation a;
    a.fact_id = facts[i].label;
    a.span = facts[i].span;
    a.anchor_id = def->anchor.id;
    a.anchor_span = fact_anchors[i].front()->span;
    for (const auto* m : fact_modifiers[i]) a.modifiers.push_back({m->label, m->span});
    doc.annotations.push_back(std::move(a));
  }
  return doc;
}

}  // namespace radex::cas
