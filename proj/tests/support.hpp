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

#ifndef RADEX_TESTS_SUPPORT_HPP_
#define RADEX_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "radex/cas.hpp"
#include "radex/decimal.hpp"
#include "radex/extraction.hpp"
#include "radex/schema.hpp"

namespace radex::test {

inline constexpr const char* kTable1Sentence =
    "No suspicious focal findings distinguishable on the right side.";

std::string data_path(const std::string& name);
std::string read_file(const std::string& path);

schema::FactSchema table1_schema();
extraction::PhraseBank table1_phrases();
schema::ReportTemplate table1_template();
// Table 1 annotation built by locating substrings in kTable1Sentence.
cas::FactAnnotation table1_annotation();
cas::SpanOffset find_span(const std::string& text, const std::string& needle);

schema::FactSchema random_schema(std::mt19937_64& rng);
schema::ReportTemplate random_template(const schema::FactSchema& schema, std::mt19937_64& rng);
// Mix of ASCII, Latin-1, CJK and non-BMP code points.
std::u32string random_text(std::mt19937_64& rng, std::size_t length);

// Largest one-to-one matching between a and b under `compatible`, by
// exhaustive search.
std::size_t brute_force_max_matching(std::size_t na, std::size_t nb,
                                     const std::function<bool(std::size_t, std::size_t)>& compatible);

// Synthetic report following the Table 1 sentence pattern.
struct SyntheticReport {
  std::string text;
  bool negated = false;
  bool suspicious = false;
  std::string laterality_code;  // SNOMED code
  std::string size_mm;          // canonical decimal string
};
SyntheticReport synthetic_report(std::mt19937_64& rng);

class TempDir {
 public:
  TempDir();
  ~TempDir();
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Loopback HTTP server answering POST /v1/extract with a fixed body.
class StubExtractor {
 public:
  StubExtractor(int status, std::string body);
  ~StubExtractor();
  std::string endpoint() const;
  std::string last_request() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace radex::test

#endif  // RADEX_TESTS_SUPPORT_HPP_
