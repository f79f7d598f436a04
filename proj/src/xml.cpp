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

#include "xml.hpp"

#include <expat.h>

#include "radex/error.hpp"

namespace radex::xml {

namespace {

constexpr char kNsSeparator = '\x01';

QName split_name(const XML_Char* raw) {
  std::string_view name(raw);
  auto pos = name.find(kNsSeparator);
  if (pos == std::string_view::npos) return {"", std::string(name)};
  return {std::string(name.substr(0, pos)), std::string(name.substr(pos + 1))};
}

struct ParseState {
  std::unique_ptr<Element> root;
  std::vector<Element*> stack;
};

void on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
  auto* st = static_cast<ParseState*>(data);
  auto el = std::make_unique<Element>();
  el->name = split_name(name);
  for (const XML_Char** a = attrs; *a; a += 2) {
    el->attributes.emplace(split_name(a[0]), a[1]);
  }
  Element* raw = el.get();
  if (st->stack.empty()) {
    st->root = std::move(el);
  } else {
    st->stack.back()->children.push_back(std::move(el));
  }
  st->stack.push_back(raw);
}

void on_end(void* data, const XML_Char*) {
  static_cast<ParseState*>(data)->stack.pop_back();
}

void on_text(void* data, const XML_Char* s, int len) {
  auto* st = static_cast<ParseState*>(data);
  if (!st->stack.empty()) st->stack.back()->text.append(s, static_cast<std::size_t>(len));
}

}  // namespace

const std::string* Element::attr(std::string_view ns, std::string_view local) const {
  auto it = attributes.find(QName{std::string(ns), std::string(local)});
  return it == attributes.end() ? nullptr : &it->second;
}

std::unique_ptr<Element> parse(std::string_view bytes) {
  std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(
      XML_ParserCreateNS("UTF-8", kNsSeparator), &XML_ParserFree);
  if (!parser) throw Error(ErrorCode::MalformedXmi, "cannot allocate XML parser");
  ParseState state;
  XML_SetUserData(parser.get(), &state);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_text);
  if (XML_Parse(parser.get(), bytes.data(), static_cast<int>(bytes.size()), XML_TRUE) ==
      XML_STATUS_ERROR) {
    throw Error(ErrorCode::MalformedXmi,
                std::string("XML parse error: ") + XML_ErrorString(XML_GetErrorCode(parser.get())) +
                    " at line " + std::to_string(XML_GetCurrentLineNumber(parser.get())) +
                    ", column " + std::to_string(XML_GetCurrentColumnNumber(parser.get())));
  }
  if (!state.root) throw Error(ErrorCode::MalformedXmi, "empty XML document");
  return std::move(state.root);
}

std::string escape_attr(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\t': out += "&#9;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string escape_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '\r': out += "&#13;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace radex::xml
