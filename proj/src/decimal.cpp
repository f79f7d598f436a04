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

#include "radex/decimal.hpp"

#include <cstdlib>

namespace radex {

std::optional<Decimal> Decimal::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  if (text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  Decimal d;
  bool seen_sep = false;
  bool seen_digit = false;
  for (char c : text) {
    if (c >= '0' && c <= '9') {
      d.mantissa_ = d.mantissa_ * 10 + (c - '0');
      if (seen_sep) ++d.scale_;
      seen_digit = true;
    } else if ((c == '.' || c == ',') && !seen_sep && seen_digit) {
      seen_sep = true;
    } else {
      return std::nullopt;
    }
  }
  if (!seen_digit || (seen_sep && d.scale_ == 0)) return std::nullopt;
  if (negative) d.mantissa_ = -d.mantissa_;
  d.normalize();
  return d;
}

void Decimal::normalize() {
  while (scale_ > 0 && mantissa_ % 10 == 0) {
    mantissa_ /= 10;
    --scale_;
  }
}

std::string Decimal::to_string() const {
  using boost::multiprecision::abs;
  std::string digits = boost::multiprecision::cpp_int(abs(mantissa_)).str();
  if (scale_ > 0) {
    if (digits.size() <= scale_) {
      digits.insert(0, scale_ - digits.size() + 1, '0');
    }
    digits.insert(digits.size() - scale_, 1, '.');
  }
  return mantissa_ < 0 ? "-" + digits : digits;
}

double Decimal::to_double() const { return std::strtod(to_string().c_str(), nullptr); }

Decimal operator*(const Decimal& a, const Decimal& b) {
  Decimal out;
  out.mantissa_ = a.mantissa_ * b.mantissa_;
  out.scale_ = a.scale_ + b.scale_;
  out.normalize();
  return out;
}

std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) {
  using boost::multiprecision::cpp_int;
  const unsigned scale = std::max(a.scale_, b.scale_);
  cpp_int lhs = a.mantissa_;
  cpp_int rhs = b.mantissa_;
  for (unsigned s = a.scale_; s < scale; ++s) lhs *= 10;
  for (unsigned s = b.scale_; s < scale; ++s) rhs *= 10;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace radex
