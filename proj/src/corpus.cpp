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

#include "radex/corpus.hpp"

#include <omp.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <unordered_set>

#include "json_util.hpp"
#include "radex/error.hpp"
#include "radex/unicode.hpp"

namespace radex::corpus {

namespace {

// cp1252 bytes 0x80-0x9F that map to characters outside Latin-1.
constexpr std::pair<char32_t, unsigned char> kCp1252High[] = {
    {0x20AC, 0x80}, {0x201A, 0x82}, {0x0192, 0x83}, {0x201E, 0x84}, {0x2026, 0x85},
    {0x2020, 0x86}, {0x2021, 0x87}, {0x02C6, 0x88}, {0x2030, 0x89}, {0x0160, 0x8A},
    {0x2039, 0x8B}, {0x0152, 0x8C}, {0x017D, 0x8E}, {0x2018, 0x91}, {0x2019, 0x92},
    {0x201C, 0x93}, {0x201D, 0x94}, {0x2022, 0x95}, {0x2013, 0x96}, {0x2014, 0x97},
    {0x02DC, 0x98}, {0x2122, 0x99}, {0x0161, 0x9A}, {0x203A, 0x9B}, {0x0153, 0x9C},
    {0x017E, 0x9E}, {0x0178, 0x9F},
};

// Byte this character came from if it was produced by decoding with cp1252
// (or Latin-1, for the C1 range).
std::optional<unsigned char> legacy_byte(char32_t c) {
  if (c <= 0xFF) return static_cast<unsigned char>(c);
  for (const auto& [cp, byte] : kCp1252High) {
    if (cp == c) return byte;
  }
  return std::nullopt;
}

// Length in characters of a mojibake run starting at i, or 0. The run's
// decoded code point is written to `decoded`.
std::size_t mojibake_run(std::u32string_view text, std::size_t i, char32_t& decoded) {
  const auto lead = legacy_byte(text[i]);
  if (!lead || *lead < 0xC2 || *lead > 0xF4) return 0;
  const std::size_t n = *lead < 0xE0 ? 2 : *lead < 0xF0 ? 3 : 4;
  if (i + n > text.size()) return 0;
  std::string bytes(1, static_cast<char>(*lead));
  for (std::size_t k = 1; k < n; ++k) {
    const auto b = legacy_byte(text[i + k]);
    if (!b || *b < 0x80 || *b > 0xBF) return 0;
    bytes.push_back(static_cast<char>(*b));
  }
  if (!unicode::is_valid_utf8(bytes)) return 0;
  decoded = unicode::decode(bytes).front();
  return n;
}

std::u32string repair_once(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    char32_t decoded = 0;
    if (std::size_t n = mojibake_run(text, i, decoded)) {
      out.push_back(decoded);
      i += n;
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

// Bounded rejection sampling so draws do not depend on the standard
// library's distribution implementation.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

void finish_stats(CorpusStats& s, const std::vector<std::size_t>& per_doc) {
  s.documents = per_doc.size();
  s.tokens = std::accumulate(per_doc.begin(), per_doc.end(), std::size_t{0});
  if (!per_doc.empty()) {
    auto [mn, mx] = std::minmax_element(per_doc.begin(), per_doc.end());
    s.min_tokens = *mn;
    s.max_tokens = *mx;
    s.mean_tokens = static_cast<double>(s.tokens) / static_cast<double>(per_doc.size());
  }
}

}  // namespace

Corpus parse_jsonl(std::string_view bytes) {
  Corpus out;
  std::unordered_set<std::string> ids;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    std::size_t nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos) nl = bytes.size();
    std::string_view line = bytes.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string path = "line " + std::to_string(line_no);
    const auto j = json_util::parse(line, path);
    ReportRecord r;
    r.report_id = json_util::require_string(j, "report_id", path);
    r.text = json_util::require_string(j, "text", path);
    r.class_label = json_util::optional_string(j, "class_label", path);
    if (j.contains("metadata")) {
      const auto& meta = j["metadata"];
      if (!meta.is_object()) json_util::fail(path + ".metadata", "expected an object");
      for (const auto& [k, v] : meta.items()) {
        if (!v.is_string()) json_util::fail(path + ".metadata." + k, "expected a string");
        r.metadata.emplace(k, v.get<std::string>());
      }
    }
    if (!ids.insert(r.report_id).second) {
      throw Error(ErrorCode::MalformedInput, path + ": duplicate report_id '" + r.report_id + "'",
                  path);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& r : corpus) {
    nlohmann::ordered_json j;
    j["report_id"] = r.report_id;
    j["text"] = r.text;
    j["class_label"] = r.class_label;
    j["metadata"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.metadata) j["metadata"][k] = v;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::size_t count_mojibake(std::u32string_view text) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < text.size();) {
    char32_t decoded = 0;
    if (std::size_t n = mojibake_run(text, i, decoded)) {
      ++count;
      i += n;
    } else {
      ++i;
    }
  }
  return count;
}

FixResult fix_encoding(std::string_view text) {
  std::u32string current = unicode::decode(text);
  std::size_t suspicious = count_mojibake(current);
  bool repaired = false;
  while (suspicious > 0) {
    std::u32string candidate = repair_once(current);
    const std::size_t after = count_mojibake(candidate);
    if (after >= suspicious) break;
    current = std::move(candidate);
    suspicious = after;
    repaired = true;
  }
  return {repaired ? unicode::encode(current) : std::string(text), repaired};
}

std::vector<Token> tokenize(std::u32string_view text) {
  std::vector<Token> out;
  const auto emit = [&](std::size_t b, std::size_t e) {
    out.push_back({unicode::encode(text.substr(b, e - b)), {b, e}});
  };
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && unicode::is_space(text[i])) ++i;
    if (i == text.size()) break;
    std::size_t end = i;
    while (end < text.size() && !unicode::is_space(text[end])) ++end;
    std::size_t b = i;
    std::size_t e = end;
    while (b < e && unicode::is_punct(text[b])) {
      emit(b, b + 1);
      ++b;
    }
    std::size_t trailing = e;
    while (trailing > b && unicode::is_punct(text[trailing - 1])) --trailing;
    if (b < trailing) emit(b, trailing);
    for (std::size_t k = trailing; k < e; ++k) emit(k, k + 1);
    i = end;
  }
  return out;
}

std::vector<Token> tokenize(std::string_view utf8) { return tokenize(unicode::decode(utf8)); }

DedupResult deduplicate(const Corpus& corpus) {
  DedupResult out;
  std::unordered_set<std::string> seen;
  for (const auto& r : corpus) {
    if (seen.insert(unicode::collapse_whitespace(r.text)).second) {
      out.corpus.push_back(r);
    } else {
      out.removed_ids.push_back(r.report_id);
    }
  }
  return out;
}

std::map<std::string, std::size_t> allocate_quotas(
    const std::map<std::string, std::size_t>& class_sizes, std::size_t n) {
  const std::size_t total = std::accumulate(
      class_sizes.begin(), class_sizes.end(), std::size_t{0},
      [](std::size_t acc, const auto& kv) { return acc + kv.second; });
  std::map<std::string, std::size_t> quotas;
  if (total == 0) return quotas;
  struct Remainder {
    std::size_t value;
    const std::string* label;
  };
  std::vector<Remainder> remainders;
  std::size_t assigned = 0;
  for (const auto& [label, size] : class_sizes) {
    const unsigned __int128 scaled = static_cast<unsigned __int128>(n) * size;
    quotas[label] = static_cast<std::size_t>(scaled / total);
    assigned += quotas[label];
    remainders.push_back({static_cast<std::size_t>(scaled % total), &label});
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const Remainder& a, const Remainder& b) { return a.value > b.value; });
  for (std::size_t k = 0; assigned < n && k < remainders.size(); ++k, ++assigned) {
    ++quotas[*remainders[k].label];
  }
  return quotas;
}

Corpus stratified_sample(const Corpus& corpus, std::size_t n, std::uint64_t seed) {
  if (n < 1 || n > corpus.size()) {
    throw Error(ErrorCode::SampleTooLarge, "sample size " + std::to_string(n) +
                                               " outside 1.." + std::to_string(corpus.size()));
  }
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < corpus.size(); ++i) members[corpus[i].class_label].push_back(i);
  std::map<std::string, std::size_t> sizes;
  for (const auto& [label, idx] : members) sizes[label] = idx.size();
  const auto quotas = allocate_quotas(sizes, n);

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen;
  chosen.reserve(n);
  for (auto& [label, idx] : members) {
    const std::size_t quota = quotas.at(label);
    // partial Fisher-Yates
    for (std::size_t k = 0; k < quota; ++k) {
      const std::size_t j = k + uniform_below(rng, idx.size() - k);
      std::swap(idx[k], idx[j]);
      chosen.push_back(idx[k]);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  Corpus out;
  out.reserve(chosen.size());
  for (std::size_t i : chosen) out.push_back(corpus[i]);
  return out;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats s;
  std::vector<std::size_t> per_doc(corpus.size());
  std::unordered_set<std::string> types;
  const auto count = static_cast<std::ptrdiff_t>(corpus.size());
#pragma omp parallel
  {
    std::unordered_set<std::string> local;
#pragma omp for schedule(dynamic, 16) nowait
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const auto tokens = tokenize(std::string_view(corpus[i].text));
      per_doc[i] = tokens.size();
      for (const auto& t : tokens) local.insert(t.surface);
    }
#pragma omp critical(radex_corpus_types)
    types.merge(local);
  }
  for (const auto& r : corpus) ++s.per_class[r.class_label];
  finish_stats(s, per_doc);
  s.types = types.size();
  return s;
}

namespace reference {

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats s;
  std::vector<std::size_t> per_doc;
  std::unordered_set<std::string> types;
  for (const auto& r : corpus) {
    const auto tokens = tokenize(std::string_view(r.text));
    per_doc.push_back(tokens.size());
    for (const auto& t : tokens) types.insert(t.surface);
    ++s.per_class[r.class_label];
  }
  finish_stats(s, per_doc);
  s.types = types.size();
  return s;
}

}  // namespace reference

std::string stats_to_json(const CorpusStats& s) {
  nlohmann::ordered_json j;
  j["documents"] = s.documents;
  j["tokens"] = s.tokens;
  j["types"] = s.types;
  j["tokens_per_document"]["min"] = s.min_tokens;
  j["tokens_per_document"]["mean"] = s.mean_tokens;
  j["tokens_per_document"]["max"] = s.max_tokens;
  j["per_class"] = nlohmann::ordered_json::object();
  for (const auto& [label, c] : s.per_class) j["per_class"][label] = c;
  return j.dump(2) + "\n";
}

}  // namespace radex::corpus
