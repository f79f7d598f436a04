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

#ifndef RADEX_DECIMAL_HPP_
#define RADEX_DECIMAL_HPP_

#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace radex {

// Exact base-10 number: mantissa * 10^-scale, kept in lowest terms (no
// trailing zeros in the mantissa unless scale is 0). Unit conversion runs
// on this so "1,5 cm" becomes exactly 15 mm.
class Decimal {
 public:
  Decimal() = default;
  explicit Decimal(long long v) : mantissa_(v) {}

  // Accepts an optional leading '-', digits, and at most one '.' or ','
  // decimal separator. Returns nullopt for anything else.
  static std::optional<Decimal> parse(std::string_view text);

  std::string to_string() const;
  double to_double() const;
  bool is_zero() const { return mantissa_ == 0; }
  bool is_negative() const { return mantissa_ < 0; }

  friend Decimal operator*(const Decimal& a, const Decimal& b);
  friend bool operator==(const Decimal& a, const Decimal& b) = default;
  friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b);

 private:
  void normalize();

  boost::multiprecision::cpp_int mantissa_ = 0;
  unsigned scale_ = 0;
};

}  // namespace radex

#endif  // RADEX_DECIMAL_HPP_
