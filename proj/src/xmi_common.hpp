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

#ifndef RADEX_SRC_XMI_COMMON_HPP_
#define RADEX_SRC_XMI_COMMON_HPP_

#include <charconv>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "radex/cas.hpp"
#include "radex/error.hpp"
#include "radex/unicode.hpp"
#include "xml.hpp"

// Pieces shared by the RadEx XMI reader and the annotation-tool converter.
namespace radex::cas::xmi {

inline constexpr std::string_view kXmiNs = "http://www.omg.org/XMI";
inline constexpr std::string_view kCasNs = "http:///uima/cas.ecore";
inline constexpr std::string_view kTcasNs = "http:///uima/tcas.ecore";
inline constexpr std::string_view kFsArrayNs = kCasNs;

struct Sofa {
  std::string id;  // xmi:id
  std::u32string text;
};

// "http:///org/radex/types.ecore" + "Fact" -> "org.radex.types.Fact"
inline std::string type_name(const xml::QName& name) {
  std::string pkg = name.ns;
  constexpr std::string_view prefix = "http:///";
  constexpr std::string_view suffix = ".ecore";
  if (pkg.rfind(prefix, 0) == 0) pkg.erase(0, prefix.size());
  if (pkg.size() >= suffix.size() &&
      pkg.compare(pkg.size() - suffix.size(), suffix.size(), suffix) == 0) {
    pkg.erase(pkg.size() - suffix.size());
  }
  for (auto& c : pkg) {
    if (c == '/') c = '.';
  }
  return pkg.empty() ? name.local : pkg + "." + name.local;
}

inline std::string package_of(std::string_view full_type) {
  auto pos = full_type.rfind('.');
  return pos == std::string_view::npos ? std::string() : std::string(full_type.substr(0, pos));
}

inline bool is_framework_element(const xml::Element& el) {
  return el.name.ns == kXmiNs || el.name.ns == kCasNs || el.name.ns == kTcasNs;
}

inline std::vector<std::string> split_ids(std::string_view list) {
  std::vector<std::string> out;
  std::istringstream is{std::string(list)};
  for (std::string id; is >> id;) out.push_back(id);
  return out;
}

inline std::string require_attr(const xml::Element& el, std::string_view name) {
  const auto* v = el.attr(name);
  if (!v) {
    throw Error(ErrorCode::MalformedXmi,
                type_name(el.name) + " element lacks attribute '" + std::string(name) + "'");
  }
  return *v;
}

inline void require_root(const xml::Element& root) {
  if (root.name.ns != kXmiNs || root.name.local != "XMI") {
    throw Error(ErrorCode::MalformedXmi, "root element is not xmi:XMI");
  }
}

// The initial-view sofa, falling back to the first sofa in the file.
inline Sofa find_sofa(const xml::Element& root) {
  require_root(root);
  const xml::Element* chosen = nullptr;
  for (const auto& child : root.children) {
    if (child->name.ns == kCasNs && child->name.local == "Sofa") {
      const auto* sofa_id = child->attr("sofaID");
      if (!chosen || (sofa_id && *sofa_id == "_InitialView")) chosen = child.get();
      if (sofa_id && *sofa_id == "_InitialView") break;
    }
  }
  if (!chosen) throw Error(ErrorCode::MalformedXmi, "XMI has no cas:Sofa");
  const auto* text = chosen->attr("sofaString");
  if (!text) throw Error(ErrorCode::MalformedXmi, "sofa has no sofaString");
  const auto* id = chosen->attr(kXmiNs, "id");
  Sofa s;
  s.id = id ? *id : "";
  try {
    s.text = unicode::decode(*text);
  } catch (const Error&) {
    throw Error(ErrorCode::MalformedXmi, "sofaString is not valid UTF-8");
  }
  return s;
}

inline std::size_t read_offset(const xml::Element& el, std::string_view name) {
  const std::string raw = require_attr(el, name);
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
  if (ec != std::errc() || ptr != raw.data() + raw.size()) {
    throw Error(ErrorCode::MalformedXmi,
                type_name(el.name) + " has a non-numeric " + std::string(name) + " '" + raw + "'");
  }
  return value;
}

// Reads begin/end and re-encodes them as code points.
inline SpanOffset read_span(const xml::Element& el, const unicode::OffsetMap& offsets,
                            OffsetEncoding encoding) {
  const std::size_t begin = read_offset(el, "begin");
  const std::size_t end = read_offset(el, "end");
  std::optional<std::size_t> b, e;
  if (encoding == OffsetEncoding::Utf16) {
    b = offsets.to_code_point(begin);
    e = offsets.to_code_point(end);
  } else {
    if (begin <= offsets.code_points()) b = begin;
    if (end <= offsets.code_points()) e = end;
  }
  if (!b || !e || *b >= *e) {
    throw Error(ErrorCode::OffsetOutOfBounds,
                type_name(el.name) + " span [" + std::to_string(begin) + "," +
                    std::to_string(end) + ") is empty, out of bounds, or splits a character");
  }
  return {*b, *e};
}

}  // namespace radex::cas::xmi

#endif  // RADEX_SRC_XMI_COMMON_HPP_
