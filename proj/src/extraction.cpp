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

#include "radex/extraction.hpp"

#include <algorithm>
#include <set>

#include "json_util.hpp"
#include "radex/error.hpp"
#include "radex/quantity.hpp"
#include "radex/unicode.hpp"

namespace radex::extraction {

namespace {

constexpr std::size_t kNoMatch = static_cast<std::size_t>(-1);

// Words of a normalized phrase, lowercase.
struct Phrase {
  std::vector<std::u32string> words;
};

Phrase compile(std::string_view normalized) {
  Phrase p;
  std::u32string word;
  for (char32_t c : unicode::normalize(unicode::decode(normalized))) {
    if (c == U' ') {
      p.words.push_back(std::move(word));
      word.clear();
    } else {
      word.push_back(c);
    }
  }
  if (!word.empty()) p.words.push_back(std::move(word));
  return p;
}

std::size_t match_at(std::u32string_view lower, std::size_t pos, std::size_t limit,
                     const Phrase& phrase) {
  if (phrase.words.empty()) return kNoMatch;
  if (unicode::is_word_char(phrase.words.front().front()) && pos > 0 &&
      unicode::is_word_char(lower[pos - 1])) {
    return kNoMatch;
  }
  std::size_t i = pos;
  for (std::size_t w = 0; w < phrase.words.size(); ++w) {
    if (w > 0) {
      const std::size_t gap = i;
      while (i < limit && unicode::is_space(lower[i])) ++i;
      if (i == gap) return kNoMatch;
    }
    const auto& word = phrase.words[w];
    if (i + word.size() > limit || lower.substr(i, word.size()) != word) return kNoMatch;
    i += word.size();
  }
  if (unicode::is_word_char(phrase.words.back().back()) && i < lower.size() &&
      unicode::is_word_char(lower[i])) {
    return kNoMatch;
  }
  return i;
}

// Leftmost-longest, non-overlapping occurrences within [begin, end).
std::vector<cas::SpanOffset> find_all(std::u32string_view lower, std::size_t begin,
                                      std::size_t end, const std::vector<Phrase>& lexicon) {
  std::vector<cas::SpanOffset> out;
  std::size_t pos = begin;
  while (pos < end) {
    std::size_t best = kNoMatch;
    for (const auto& p : lexicon) {
      const std::size_t e = match_at(lower, pos, end, p);
      if (e != kNoMatch && (best == kNoMatch || e > best)) best = e;
    }
    if (best != kNoMatch) {
      out.push_back({pos, best});
      pos = best;
    } else {
      ++pos;
    }
  }
  return out;
}

const std::set<std::u32string>& abbreviations() {
  static const std::set<std::u32string> kList = {
      U"dr.",  U"prof.", U"z.",   U"b.",    U"z.b.", U"ca.",  U"bzw.", U"ggf.", U"evtl.",
      U"vs.",  U"e.g.",  U"i.e.", U"nr.",   U"st.",  U"re.",  U"li.",  U"bds.", U"v.a.",
      U"u.a.", U"d.h.",  U"inkl.", U"max.", U"min.", U"approx.", U"vgl.", U"sog.", U"fig.",
      U"abb.", U"mr.",   U"mrs.", U"ms."};
  return kList;
}

bool is_abbreviation(std::u32string_view text, std::size_t terminator) {
  std::size_t start = terminator;
  while (start > 0 && !unicode::is_space(text[start - 1])) --start;
  std::u32string word = unicode::to_lower(text.substr(start, terminator + 1 - start));
  // strip leading brackets or quotes
  while (!word.empty() && unicode::is_punct(word.front()) && word.front() != U'.') {
    word.erase(word.begin());
  }
  return abbreviations().count(word) > 0;
}

void push_trimmed(std::u32string_view text, std::size_t b, std::size_t e,
                  std::vector<cas::SpanOffset>& out) {
  while (b < e && unicode::is_space(text[b])) ++b;
  while (e > b && unicode::is_space(text[e - 1])) --e;
  if (b < e) out.push_back({b, e});
}

}  // namespace

struct BaselineExtractor::Rules {
  struct ModifierRule {
    std::string id;
    std::vector<Phrase> lexicon;
    std::optional<schema::ValueUnit> unit;
  };
  struct FactRule {
    std::string fact_id;
    std::string anchor_id;
    std::vector<Phrase> anchor_lexicon;
    std::vector<ModifierRule> modifiers;
  };
  std::vector<FactRule> facts;
};

cas::FactAnnotation ExtractedFact::to_annotation() const {
  cas::FactAnnotation a{fact_id, span, anchor_id, anchor_span, {}};
  for (const auto& m : modifiers) a.modifiers.push_back({m.modifier_id, m.span});
  return a;
}

const char* to_string(PhraseLayer layer) {
  switch (layer) {
    case PhraseLayer::Fact: return "Fact";
    case PhraseLayer::Anchor: return "Anchor";
    default: return "Modifier";
  }
}

PhraseBank::PhraseBank(std::vector<PhraseEntry> entries) {
  std::set<std::tuple<std::string, PhraseLayer, std::string>> seen;
  for (auto& e : entries) {
    e.phrase = unicode::normalize(e.phrase);
    if (e.phrase.empty()) throw Error(ErrorCode::MalformedInput, "phrase bank entry is empty");
    if (!seen.emplace(e.phrase, e.layer, e.id).second) {
      throw Error(ErrorCode::MalformedInput, "duplicate phrase bank entry '" + e.phrase + "' (" +
                                                 to_string(e.layer) + ", " + e.id + ")");
    }
  }
  entries_ = std::move(entries);
}

PhraseBank parse_phrase_bank(std::string_view json_bytes) {
  const auto j = json_util::parse(json_bytes, "phrase bank");
  const auto& arr = json_util::require_array(j, "phrases", "");
  std::vector<PhraseEntry> entries;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = json_util::index("phrases", i);
    PhraseEntry e;
    e.phrase = json_util::require_string(arr[i], "phrase", path);
    const std::string layer = json_util::require_string(arr[i], "layer", path);
    if (layer == "Fact") {
      e.layer = PhraseLayer::Fact;
    } else if (layer == "Anchor") {
      e.layer = PhraseLayer::Anchor;
    } else if (layer == "Modifier") {
      e.layer = PhraseLayer::Modifier;
    } else {
      json_util::fail(path + ".layer", "expected Fact, Anchor or Modifier");
    }
    e.id = json_util::require_string(arr[i], "id", path);
    entries.push_back(std::move(e));
  }
  return PhraseBank(std::move(entries));
}

std::string serialize_phrase_bank(const PhraseBank& bank) {
  nlohmann::ordered_json j;
  j["phrases"] = nlohmann::ordered_json::array();
  for (const auto& e : bank.entries()) {
    nlohmann::ordered_json ej;
    ej["phrase"] = e.phrase;
    ej["layer"] = to_string(e.layer);
    ej["id"] = e.id;
    j["phrases"].push_back(std::move(ej));
  }
  return j.dump(2) + "\n";
}

std::vector<PhraseMatch> apply_phrase_annotations(std::string_view text, const PhraseBank& bank) {
  const std::u32string lower = unicode::to_lower(unicode::decode(text));
  std::vector<PhraseMatch> out;
  for (PhraseLayer layer : {PhraseLayer::Fact, PhraseLayer::Anchor, PhraseLayer::Modifier}) {
    std::vector<std::pair<Phrase, const PhraseEntry*>> phrases;
    for (const auto& e : bank.entries()) {
      if (e.layer == layer) phrases.emplace_back(compile(e.phrase), &e);
    }
    std::size_t pos = 0;
    while (pos < lower.size()) {
      std::size_t best = kNoMatch;
      const PhraseEntry* winner = nullptr;
      for (const auto& [p, entry] : phrases) {
        const std::size_t e = match_at(lower, pos, lower.size(), p);
        if (e != kNoMatch && (best == kNoMatch || e > best)) {
          best = e;
          winner = entry;
        }
      }
      if (winner) {
        out.push_back({layer, winner->id, {pos, best}});
        pos = best;
      } else {
        ++pos;
      }
    }
  }
  return out;
}

std::vector<cas::SpanOffset> segment_sentences(std::u32string_view text) {
  std::vector<cas::SpanOffset> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char32_t c = text[i];
    if (c == U'\n') {
      // blank line: newline, optional horizontal space, newline
      std::size_t k = i + 1;
      while (k < text.size() && unicode::is_space(text[k]) && text[k] != U'\n') ++k;
      if (k < text.size() && text[k] == U'\n') {
        push_trimmed(text, start, i, out);
        start = k;
        i = k;
      }
      continue;
    }
    if (c != U'.' && c != U'!' && c != U'?') continue;
    const bool at_end = i + 1 == text.size() || unicode::is_space(text[i + 1]);
    if (!at_end) continue;
    if (c == U'.' && is_abbreviation(text, i)) continue;
    push_trimmed(text, start, i + 1, out);
    start = i + 1;
  }
  push_trimmed(text, start, text.size(), out);
  return out;
}

BaselineExtractor::BaselineExtractor(const schema::FactSchema& schema, const PhraseBank& phrases)
    : rules_(std::make_unique<Rules>()), schema_ref_{schema.schema_id, schema.version} {
  const std::string lang = schema.language.substr(0, schema.language.find('-'));
  std::vector<std::string> negation;
  if (lang != "de") negation.insert(negation.end(), std::begin(kNegationTriggersEn), std::end(kNegationTriggersEn));
  if (lang != "en") negation.insert(negation.end(), std::begin(kNegationTriggersDe), std::end(kNegationTriggersDe));

  for (const auto& f : schema.facts) {
    Rules::FactRule rule;
    rule.fact_id = f.id;
    rule.anchor_id = f.anchor.id;
    std::set<std::string> anchor_forms(f.anchor.lexicon.begin(), f.anchor.lexicon.end());
    for (const auto& e : phrases.entries()) {
      if (e.layer == PhraseLayer::Anchor && e.id == f.anchor.id) anchor_forms.insert(e.phrase);
    }
    if (anchor_forms.empty()) empty_lexicon_.push_back(f.id);
    if (!f.anchor.label.empty()) anchor_forms.insert(unicode::normalize(f.anchor.label));
    for (const auto& form : anchor_forms) rule.anchor_lexicon.push_back(compile(form));

    for (const auto& mid : f.modifier_ids) {
      const auto* def = schema.find_modifier(mid);
      if (!def) continue;
      Rules::ModifierRule m;
      m.id = mid;
      std::set<std::string> forms;
      if (const auto* vs = std::get_if<schema::ValueSet>(&def->standardizer)) {
        for (const auto& cv : vs->values) forms.insert(cv.synonyms.begin(), cv.synonyms.end());
      } else if (const auto* vu = std::get_if<schema::ValueUnit>(&def->standardizer)) {
        m.unit = *vu;
      }
      if (def->role == schema::ModifierRole::Negation) forms.insert(negation.begin(), negation.end());
      for (const auto& e : phrases.entries()) {
        if (e.layer == PhraseLayer::Modifier && e.id == mid) forms.insert(e.phrase);
      }
      for (const auto& form : forms) m.lexicon.push_back(compile(form));
      rule.modifiers.push_back(std::move(m));
    }
    rules_->facts.push_back(std::move(rule));
  }
}

BaselineExtractor::~BaselineExtractor() = default;
BaselineExtractor::BaselineExtractor(BaselineExtractor&&) noexcept = default;
BaselineExtractor& BaselineExtractor::operator=(BaselineExtractor&&) noexcept = default;

std::size_t BaselineExtractor::rule_count() const { return rules_->facts.size(); }

std::vector<ExtractedFact> BaselineExtractor::extract(std::string_view text) const {
  const std::u32string original = unicode::decode(text);
  const std::u32string lower = unicode::to_lower(original);
  std::vector<ExtractedFact> out;
  for (const auto& sentence : segment_sentences(original)) {
    for (const auto& rule : rules_->facts) {
      const auto anchors = find_all(lower, sentence.begin, sentence.end, rule.anchor_lexicon);
      if (anchors.empty()) continue;
      ExtractedFact fact;
      fact.fact_id = rule.fact_id;
      fact.span = sentence;
      fact.anchor_id = rule.anchor_id;
      fact.anchor_span = anchors.front();
      fact.confidence = 1.0;
      fact.anchor_confidence = 1.0;
      for (const auto& m : rule.modifiers) {
        std::vector<cas::SpanOffset> spans =
            find_all(lower, sentence.begin, sentence.end, m.lexicon);
        if (m.unit) {
          for (const auto& q :
               find_quantities(std::u32string_view(original).substr(0, sentence.end), *m.unit)) {
            if (q.span.begin >= sentence.begin) spans.push_back(q.span);
          }
          std::sort(spans.begin(), spans.end());
        }
        for (const auto& s : spans) fact.modifiers.push_back({m.id, s, 1.0});
      }
      out.push_back(std::move(fact));
    }
  }
  return out;
}

BaselineExtractor build_baseline_extractor(const schema::FactSchema& schema,
                                           const PhraseBank& phrases) {
  return BaselineExtractor(schema, phrases);
}

std::vector<std::vector<ExtractedFact>> extract_batch(const BaselineExtractor& extractor,
                                                      std::span<const std::string> texts) {
  std::vector<std::vector<ExtractedFact>> out(texts.size());
  const auto n = static_cast<std::ptrdiff_t>(texts.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = extractor.extract(texts[i]);
  return out;
}

namespace reference {

std::vector<std::vector<ExtractedFact>> extract_batch(const BaselineExtractor& extractor,
                                                      std::span<const std::string> texts) {
  std::vector<std::vector<ExtractedFact>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(extractor.extract(t));
  return out;
}

}  // namespace reference

}  // namespace radex::extraction
