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

#include "support.hpp"

#include <httplib.h>
#include <stdlib.h>

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "radex/unicode.hpp"

namespace radex::test {

namespace fs = std::filesystem;

std::string data_path(const std::string& name) { return std::string(RADEX_DATA_DIR) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

schema::FactSchema table1_schema() {
  return schema::parse_fact_schema(read_file(data_path("table1_schema.json")));
}

extraction::PhraseBank table1_phrases() {
  return extraction::parse_phrase_bank(read_file(data_path("table1_phrases.json")));
}

schema::ReportTemplate table1_template() {
  return schema::derive_report_template(table1_schema(), {"mass_described"});
}

cas::SpanOffset find_span(const std::string& text, const std::string& needle) {
  const auto pos = text.find(needle);
  if (pos == std::string::npos) throw std::runtime_error("'" + needle + "' not in text");
  const std::size_t begin = unicode::length(text.substr(0, pos));
  return {begin, begin + unicode::length(needle)};
}

cas::FactAnnotation table1_annotation() {
  const std::string text = kTable1Sentence;
  cas::FactAnnotation a;
  a.fact_id = "mass_described";
  a.span = {0, unicode::length(text)};
  a.anchor_id = "mass";
  a.anchor_span = find_span(text, "focal findings");
  a.modifiers = {{"negation", find_span(text, "No")},
                 {"dignity", find_span(text, "suspicious")},
                 {"laterality", find_span(text, "on the right side")}};
  return a;
}

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::string random_word(std::mt19937_64& rng) {
  static const char* kSyllables[] = {"ka", "lo", "mi", "ter", "us", "no", "ra", "sel", "ve", "dox"};
  std::string w;
  const std::size_t n = pick(rng, 1, 3);
  for (std::size_t i = 0; i < n; ++i) w += kSyllables[pick(rng, 0, std::size(kSyllables) - 1)];
  return w;
}

std::string random_phrase(std::mt19937_64& rng) {
  std::string p = random_word(rng);
  const std::size_t extra = pick(rng, 0, 2);
  for (std::size_t i = 0; i < extra; ++i) p += " " + random_word(rng);
  return p;
}

std::string random_label(std::mt19937_64& rng) {
  static const char* kLabels[] = {"Größe", "Lateralität", "Dignity", "Mass \"described\"",
                                  "Befund & Verlauf", "Tab\there", "日本語", "𝕏 axis"};
  return kLabels[pick(rng, 0, std::size(kLabels) - 1)];
}

}  // namespace

schema::FactSchema random_schema(std::mt19937_64& rng) {
  static const char* kLanguages[] = {"en", "de", "en-US", "de-CH"};
  static const char* kUnits[] = {"mm", "cm", "m", "um", "[in_i]"};
  schema::FactSchema s;
  s.schema_id = "s" + std::to_string(pick(rng, 0, 9999));
  s.version = std::to_string(pick(rng, 0, 3)) + "." + std::to_string(pick(rng, 0, 20)) + "." +
              std::to_string(pick(rng, 0, 9));
  s.language = kLanguages[pick(rng, 0, std::size(kLanguages) - 1)];
  const std::size_t n_mod = pick(rng, 0, 80);
  for (std::size_t i = 0; i < n_mod; ++i) {
    schema::ModifierDef m;
    m.id = "m" + std::to_string(i);
    m.label = random_label(rng);
    m.role = pick(rng, 0, 9) == 0 ? schema::ModifierRole::Negation : schema::ModifierRole::Plain;
    switch (pick(rng, 0, 2)) {
      case 0:
        m.standardizer = schema::FreeText{};
        break;
      case 1: {
        schema::ValueSet vs;
        const std::size_t n = pick(rng, 1, 5);
        for (std::size_t k = 0; k < n; ++k) {
          schema::CodedValue cv;
          cv.code = std::to_string(100000 + k * 7 + pick(rng, 0, 6));
          cv.system = pick(rng, 0, 1) ? "http://snomed.info/sct" : "urn:local";
          cv.display = random_label(rng);
          const std::size_t ns = pick(rng, 0, 3);
          for (std::size_t j = 0; j < ns; ++j) cv.synonyms.push_back(random_phrase(rng));
          vs.values.push_back(std::move(cv));
        }
        if (pick(rng, 0, 3) == 0) {
          vs.max_card.reset();
          vs.min_card = static_cast<int>(pick(rng, 0, 2));
        } else {
          vs.max_card = static_cast<int>(pick(rng, 1, 4));
          vs.min_card = static_cast<int>(pick(rng, 0, static_cast<std::size_t>(*vs.max_card)));
        }
        m.standardizer = std::move(vs);
        break;
      }
      default: {
        schema::ValueUnit vu;
        vu.target_unit = kUnits[pick(rng, 0, std::size(kUnits) - 1)];
        vu.accepted_units.emplace(vu.target_unit, Decimal(1));
        const std::size_t n = pick(rng, 0, 3);
        for (std::size_t k = 0; k < n; ++k) {
          const std::string u = kUnits[pick(rng, 0, std::size(kUnits) - 1)];
          if (u == vu.target_unit) continue;
          vu.accepted_units[u] = *Decimal::parse(std::to_string(pick(rng, 1, 1000)) + "," +
                                                 std::to_string(pick(rng, 0, 99)));
        }
        m.standardizer = std::move(vu);
      }
    }
    s.modifiers.push_back(std::move(m));
  }
  const std::size_t n_fact = pick(rng, 1, 30);
  for (std::size_t i = 0; i < n_fact; ++i) {
    schema::FactDef f;
    f.id = "f" + std::to_string(i);
    f.label = random_label(rng);
    f.description = pick(rng, 0, 1) ? "" : random_phrase(rng) + "\nsecond line";
    f.anchor.id = "a" + std::to_string(i);
    f.anchor.label = random_label(rng);
    const std::size_t nl = pick(rng, 0, 3);
    for (std::size_t k = 0; k < nl; ++k) f.anchor.lexicon.push_back(random_phrase(rng));
    bool has_negation = false;
    if (n_mod > 0) {
      const std::size_t nr = pick(rng, 0, std::min<std::size_t>(n_mod, 8));
      std::vector<std::size_t> idx(n_mod);
      for (std::size_t k = 0; k < n_mod; ++k) idx[k] = k;
      std::shuffle(idx.begin(), idx.end(), rng);
      for (std::size_t k = 0; k < nr; ++k) {
        const auto& m = s.modifiers[idx[k]];
        if (m.role == schema::ModifierRole::Negation) {
          if (has_negation) continue;
          has_negation = true;
        }
        f.modifier_ids.push_back(m.id);
      }
    }
    s.facts.push_back(std::move(f));
  }
  return s;
}

schema::ReportTemplate random_template(const schema::FactSchema& s, std::mt19937_64& rng) {
  std::vector<std::string> ids;
  for (const auto& f : s.facts) ids.push_back(f.id);
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(pick(rng, 1, ids.size()));
  schema::ModifierFilter filter;
  for (const auto& id : ids) {
    if (pick(rng, 0, 1)) continue;
    std::vector<std::string> keep;
    for (const auto& m : s.find_fact(id)->modifier_ids) {
      if (pick(rng, 0, 1)) keep.push_back(m);
    }
    filter[id] = keep;
  }
  return schema::derive_report_template(s, ids, filter);
}

std::u32string random_text(std::mt19937_64& rng, std::size_t length) {
  static const char32_t kPool[] = {U'a', U'b', U'Z', U' ', U'.', U'\n', U'é', U'ß', U'ü',
                                   U'中', U'文', U'😀', U'𝕏', U'𐍈', U'€', U'\t'};
  std::u32string out;
  for (std::size_t i = 0; i < length; ++i) out.push_back(kPool[pick(rng, 0, std::size(kPool) - 1)]);
  return out;
}

std::size_t brute_force_max_matching(std::size_t na, std::size_t nb,
                                     const std::function<bool(std::size_t, std::size_t)>& compatible) {
  std::vector<bool> used(nb, false);
  std::function<std::size_t(std::size_t)> go = [&](std::size_t i) -> std::size_t {
    if (i == na) return 0;
    std::size_t best = go(i + 1);
    for (std::size_t j = 0; j < nb; ++j) {
      if (used[j] || !compatible(i, j)) continue;
      used[j] = true;
      best = std::max(best, 1 + go(i + 1));
      used[j] = false;
    }
    return best;
  };
  return go(0);
}

SyntheticReport synthetic_report(std::mt19937_64& rng) {
  static const char* kFiller[] = {"Breast tissue of heterogeneous density.",
                                  "Skin and nipples unremarkable.",
                                  "Comparison with the prior examination.",
                                  "Lymph nodes without pathological enlargement."};
  SyntheticReport r;
  r.negated = pick(rng, 0, 1) == 1;
  r.suspicious = pick(rng, 0, 1) == 1;
  const bool left = pick(rng, 0, 1) == 1;
  r.laterality_code = left ? "7771000" : "24028007";

  std::string size_text;
  switch (pick(rng, 0, 2)) {
    case 0: {
      const std::size_t mm = pick(rng, 2, 60);
      size_text = std::to_string(mm) + " mm";
      r.size_mm = std::to_string(mm);
      break;
    }
    case 1: {
      const std::size_t whole = pick(rng, 0, 5), tenth = pick(rng, 1, 9);
      size_text = std::to_string(whole) + "," + std::to_string(tenth) + " cm";
      r.size_mm = std::to_string(whole * 10 + tenth);
      break;
    }
    default: {
      const std::size_t whole = pick(rng, 2, 30), tenth = pick(rng, 1, 9);
      size_text = std::to_string(whole) + "," + std::to_string(tenth) + " mm";
      r.size_mm = std::to_string(whole) + "." + std::to_string(tenth);
    }
  }

  std::string sentence;
  if (r.negated) sentence += "No ";
  if (r.suspicious) sentence += r.negated ? "suspicious " : "Suspicious ";
  sentence += (r.negated || r.suspicious) ? "focal findings" : "Focal findings";
  sentence += " of " + size_text + " distinguishable on the " + (left ? "left" : "right") + " side.";

  std::vector<std::string> parts;
  const std::size_t before = pick(rng, 0, 2), after = pick(rng, 0, 2);
  for (std::size_t i = 0; i < before; ++i) parts.push_back(kFiller[pick(rng, 0, std::size(kFiller) - 1)]);
  parts.push_back(sentence);
  for (std::size_t i = 0; i < after; ++i) parts.push_back(kFiller[pick(rng, 0, std::size(kFiller) - 1)]);
  for (const auto& p : parts) r.text += (r.text.empty() ? "" : (pick(rng, 0, 3) == 0 ? "\n" : " ")) + p;
  return r;
}

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "radex-test-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

struct StubExtractor::Impl {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  mutable std::mutex mutex;
  std::string last;
};

StubExtractor::StubExtractor(int status, std::string body) : impl_(std::make_unique<Impl>()) {
  impl_->server.Post("/v1/extract", [this, status, body](const httplib::Request& req,
                                                        httplib::Response& res) {
    {
      std::lock_guard lock(impl_->mutex);
      impl_->last = req.body;
    }
    res.status = status;
    res.set_content(body, "application/json");
  });
  impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

StubExtractor::~StubExtractor() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::string StubExtractor::endpoint() const {
  return "http://127.0.0.1:" + std::to_string(impl_->port);
}

std::string StubExtractor::last_request() const {
  std::lock_guard lock(impl_->mutex);
  return impl_->last;
}

}  // namespace radex::test
