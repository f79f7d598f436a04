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

#include "radex/quantity.hpp"

#include <algorithm>

#include "radex/unicode.hpp"

namespace radex {

std::vector<QuantityMatch> find_quantities(std::u32string_view text,
                                           const schema::ValueUnit& units) {
  // Longest unit codes first so "mm" wins over "m".
  std::vector<std::pair<std::u32string, std::string>> codes;
  for (const auto& [code, factor] : units.accepted_units) {
    codes.emplace_back(unicode::decode(code), code);
  }
  std::stable_sort(codes.begin(), codes.end(),
                   [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });

  std::vector<QuantityMatch> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const bool at_boundary = i == 0 || !unicode::is_word_char(text[i - 1]);
    if (!unicode::is_digit(text[i]) || !at_boundary) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && unicode::is_digit(text[j])) ++j;
    if (j + 1 < text.size() && (text[j] == U'.' || text[j] == U',') &&
        unicode::is_digit(text[j + 1])) {
      ++j;
      while (j < text.size() && unicode::is_digit(text[j])) ++j;
    }
    const std::size_t number_end = j;
    std::size_t k = number_end;
    while (k < text.size() && unicode::is_space(text[k])) ++k;
    bool matched = false;
    for (const auto& [code32, code] : codes) {
      if (code32.empty() || k + code32.size() > text.size()) continue;
      if (text.substr(k, code32.size()) != code32) continue;
      const std::size_t end = k + code32.size();
      if (end < text.size() && unicode::is_word_char(text[end])) continue;
      const auto value = Decimal::parse(unicode::encode(text.substr(i, number_end - i)));
      out.push_back({{i, end}, *value, code});
      i = end;
      matched = true;
      break;
    }
    if (!matched) i = number_end;
  }
  return out;
}

}  // namespace radex
