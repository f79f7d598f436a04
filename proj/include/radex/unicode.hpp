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

#ifndef RADEX_UNICODE_HPP_
#define RADEX_UNICODE_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 / code point / UTF-16 helpers. All offsets handed around by the
// library are Unicode code point indices; UTF-16 only appears at the XMI
// boundary.
namespace radex::unicode {

// Throws Error(MalformedInput) on invalid UTF-8.
std::u32string decode(std::string_view utf8);
bool is_valid_utf8(std::string_view utf8);
std::string encode(std::u32string_view text);
void append_utf8(char32_t cp, std::string& out);

std::size_t length(std::string_view utf8);

bool is_space(char32_t c);
bool is_punct(char32_t c);
// Letters, digits and anything else that is neither whitespace nor
// punctuation.
bool is_word_char(char32_t c);
bool is_digit(char32_t c);

char32_t to_lower(char32_t c);
std::u32string to_lower(std::u32string_view text);

// Lowercase, trim, collapse internal whitespace runs to one ASCII space.
std::string normalize(std::string_view utf8);
std::u32string normalize(std::u32string_view text);

// Collapse whitespace runs to a single space and trim; case preserved.
std::string collapse_whitespace(std::string_view utf8);

inline std::size_t utf16_units(char32_t c) { return c > 0xFFFF ? 2 : 1; }

// Bidirectional offset table for one document.
class OffsetMap {
 public:
  explicit OffsetMap(std::u32string_view text);

  std::size_t code_points() const { return to_utf16_.size() - 1; }
  std::size_t utf16_units() const { return to_utf16_.back(); }

  // Requires cp <= code_points().
  std::size_t to_utf16(std::size_t cp) const { return to_utf16_.at(cp); }
  // nullopt when the unit offset is past the end or splits a surrogate pair.
  std::optional<std::size_t> to_code_point(std::size_t unit) const;

 private:
  std::vector<std::size_t> to_utf16_;
};

}  // namespace radex::unicode

#endif  // RADEX_UNICODE_HPP_
