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

#ifndef RADEX_QUANTITY_HPP_
#define RADEX_QUANTITY_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "radex/cas.hpp"
#include "radex/decimal.hpp"
#include "radex/schema.hpp"

namespace radex {

struct QuantityMatch {
  cas::SpanOffset span;  // number through unit
  Decimal value;         // as written, before conversion
  std::string unit;      // accepted UCUM code as matched

  friend bool operator==(const QuantityMatch&, const QuantityMatch&) = default;
};

// Every "<number> <unit>" occurrence whose unit is one of the accepted
// units, left to right. Numbers take ',' or '.' as the decimal separator and
// may be glued to the unit ("15mm").
std::vector<QuantityMatch> find_quantities(std::u32string_view text,
                                           const schema::ValueUnit& units);

}  // namespace radex

#endif  // RADEX_QUANTITY_HPP_
