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

#ifndef RADEX_SRC_XML_HPP_
#define RADEX_SRC_XML_HPP_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Minimal namespace-aware DOM over expat, enough for XMI and descriptor
// files. Names are split into (namespace URI, local name).
namespace radex::xml {

struct QName {
  std::string ns;
  std::string local;

  friend bool operator==(const QName&, const QName&) = default;
  friend auto operator<=>(const QName&, const QName&) = default;
};

struct Element {
  QName name;
  std::map<QName, std::string> attributes;
  std::vector<std::unique_ptr<Element>> children;
  std::string text;

  const std::string* attr(std::string_view ns, std::string_view local) const;
  const std::string* attr(std::string_view local) const { return attr("", local); }
};

// Throws Error(MalformedXmi) with expat's line/column diagnostics.
std::unique_ptr<Element> parse(std::string_view bytes);

// Escapes for use inside a double-quoted attribute value. Tabs, newlines and
// carriage returns become character references so they survive attribute
// value normalization.
std::string escape_attr(std::string_view text);
std::string escape_text(std::string_view text);

}  // namespace radex::xml

#endif  // RADEX_SRC_XML_HPP_
