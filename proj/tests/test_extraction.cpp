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

#include <doctest.h>

#include <random>

#include <json.hpp>

#include "radex/error.hpp"
#include "radex/extraction.hpp"
#include "radex/metrics.hpp"
#include "radex/unicode.hpp"
#include "support.hpp"

using namespace radex;
using cas::SpanOffset;
using extraction::PhraseLayer;

namespace {

std::string slice(const std::string& text, const SpanOffset& s) {
  return unicode::encode(unicode::decode(text).substr(s.begin, s.length()));
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Io;
}

const extraction::ExtractedModifier* modifier(const extraction::ExtractedFact& f,
                                              const std::string& id) {
  for (const auto& m : f.modifiers) {
    if (m.modifier_id == id) return &m;
  }
  return nullptr;
}

// Schema with one fact whose anchor carries no lexicon.
schema::FactSchema bare_schema() {
  return schema::parse_fact_schema(R"({
    "schema_id": "bare", "version": "1.0.0", "language": "de",
    "modifiers": [{"id": "neg", "label": "Neg", "role": "negation", "free_text": {}}],
    "facts": [
      {"id": "a", "label": "A", "anchor": {"id": "x", "label": "Herd"}, "modifier_ids": ["neg"]},
      {"id": "b", "label": "B", "anchor": {"id": "y", "label": "Zyste"}, "modifier_ids": []}
    ]})");
}

}  // namespace

TEST_CASE("baseline: Table 1 sentence") {
  const auto schema = test::table1_schema();
  const auto ex = extraction::build_baseline_extractor(schema, test::table1_phrases());
  CHECK(ex.rule_count() == 1);
  CHECK(ex.empty_lexicon().empty());
  const std::string text = test::kTable1Sentence;
  const auto facts = ex.extract(text);
  REQUIRE(facts.size() == 1);
  const auto& f = facts[0];
  const auto gold = test::table1_annotation();
  CHECK(f.fact_id == "mass_described");
  CHECK(f.anchor_id == "mass");
  CHECK(slice(text, f.anchor_span) == "focal findings");
  CHECK(f.span == gold.span);
  CHECK(f.confidence == 1.0);
  REQUIRE(modifier(f, "negation"));
  CHECK(slice(text, modifier(f, "negation")->span) == "No");
  REQUIRE(modifier(f, "dignity"));
  CHECK(slice(text, modifier(f, "dignity")->span) == "suspicious");
  REQUIRE(modifier(f, "laterality"));
  CHECK(slice(text, modifier(f, "laterality")->span) == "on the right side");
  CHECK(modifier(f, "size") == nullptr);
  CHECK(f.to_annotation() == gold);
}

TEST_CASE("baseline: empty text, two sentences, empty lexicon") {
  const auto ex = extraction::build_baseline_extractor(test::table1_schema(), {});
  CHECK(ex.extract("").empty());
  CHECK(ex.extract("   \n  ").empty());

  const std::string text = "Focal finding on the left. No focal findings on the right side.";
  const auto facts = ex.extract(text);
  REQUIRE(facts.size() == 2);
  // hand-segmented: first sentence ends after "left."
  CHECK(facts[0].span == SpanOffset{0, 26});
  CHECK(facts[1].span == SpanOffset{27, unicode::length(text)});
  CHECK(facts[0].span.end <= facts[1].span.begin);
  CHECK(slice(text, modifier(facts[0], "laterality")->span) == "left");
  CHECK(slice(text, modifier(facts[1], "laterality")->span) == "right side");
  CHECK(modifier(facts[0], "negation") == nullptr);
  CHECK(slice(text, modifier(facts[1], "negation")->span) == "No");

  const auto bare = extraction::build_baseline_extractor(bare_schema(), {});
  CHECK(bare.empty_lexicon() == std::vector<std::string>{"a", "b"});
  // the label still works as a surface form; German triggers apply
  const auto de = bare.extract("Kein Herd abgrenzbar.");
  REQUIRE(de.size() == 1);
  CHECK(de[0].fact_id == "a");
  CHECK(slice("Kein Herd abgrenzbar.", modifier(de[0], "neg")->span) == "Kein");

  extraction::PhraseBank bank({{"Rundherd", PhraseLayer::Anchor, "x"}});
  const auto with_bank = extraction::build_baseline_extractor(bare_schema(), bank);
  CHECK(with_bank.empty_lexicon() == std::vector<std::string>{"b"});
}

TEST_CASE("baseline: quantities are attached to value-unit modifiers") {
  const auto ex = extraction::build_baseline_extractor(test::table1_schema(), {});
  const std::string text = "Focal finding of 1,5 cm on the left side.";
  const auto facts = ex.extract(text);
  REQUIRE(facts.size() == 1);
  REQUIRE(modifier(facts[0], "size"));
  CHECK(slice(text, modifier(facts[0], "size")->span) == "1,5 cm");
}

TEST_CASE("baseline: output invariants and determinism") {
  const auto schema = test::table1_schema();
  const auto ex = extraction::build_baseline_extractor(schema, test::table1_phrases());
  std::mt19937_64 rng(17);
  std::vector<std::string> texts;
  for (int i = 0; i < 300; ++i) {
    std::string t = test::synthetic_report(rng).text;
    if (i % 3 == 0) t += " " + unicode::encode(test::random_text(rng, 20)) + ". focal findings";
    texts.push_back(t);
  }
  for (const auto& t : texts) {
    const auto facts = ex.extract(t);
    std::vector<cas::FactAnnotation> annotations;
    for (const auto& f : facts) annotations.push_back(f.to_annotation());
    CHECK(cas::check_annotations(annotations, unicode::length(t)).empty());
    CHECK(facts == ex.extract(t));
  }
  const auto par = extraction::extract_batch(ex, texts);
  const auto ser = extraction::reference::extract_batch(ex, texts);
  CHECK(par == ser);
  REQUIRE(par.size() == texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) CHECK(par[i] == ex.extract(texts[i]));
}

TEST_CASE("segmentation") {
  const auto seg = [](const std::string& s) { return extraction::segment_sentences(unicode::decode(s)); };
  CHECK(seg("").empty());
  CHECK(seg("One. Two! Three?") ==
        std::vector<SpanOffset>{{0, 4}, {5, 9}, {10, 16}});
  CHECK(seg("Befund z.B. rechts. Ende") == std::vector<SpanOffset>{{0, 19}, {20, 24}});
  CHECK(seg("Dr. Meyer sah 1.5 cm.") == std::vector<SpanOffset>{{0, 21}});
  CHECK(seg("Kopfzeile\n\nText hier") == std::vector<SpanOffset>{{0, 9}, {11, 20}});
  CHECK(seg("  padded.  ") == std::vector<SpanOffset>{{2, 9}});
}

TEST_CASE("phrase annotations") {
  const std::string text = test::kTable1Sentence;
  const auto matches = extraction::apply_phrase_annotations(text, test::table1_phrases());
  REQUIRE(matches.size() == 2);
  CHECK(matches[0].id == "dignity");
  CHECK(matches[0].span == test::find_span(text, "suspicious"));
  CHECK(matches[1].id == "laterality");
  CHECK(matches[1].span == test::find_span(text, "on the right side"));

  CHECK(extraction::apply_phrase_annotations(text, {}).empty());

  extraction::PhraseBank overlap({{"right", PhraseLayer::Modifier, "lat"},
                                  {"right side", PhraseLayer::Modifier, "lat"}});
  const auto longest = extraction::apply_phrase_annotations("right side", overlap);
  REQUIRE(longest.size() == 1);
  CHECK(longest[0].span == SpanOffset{0, 10});

  // case and whitespace insensitive, whole words only
  extraction::PhraseBank bank({{"On  the RIGHT side", PhraseLayer::Modifier, "lat"},
                               {"side", PhraseLayer::Anchor, "s"}});
  const auto m = extraction::apply_phrase_annotations("ON the\nright   side; sideways", bank);
  REQUIRE(m.size() == 2);
  CHECK(m[0].layer == PhraseLayer::Anchor);
  CHECK(m[0].span == SpanOffset{15, 19});
  CHECK(m[1].span == SpanOffset{0, 19});

  CHECK(code_of([] {
          extraction::PhraseBank({{"benign", PhraseLayer::Modifier, "d"},
                                  {"Benign", PhraseLayer::Modifier, "d"}});
        }) == ErrorCode::MalformedInput);
  CHECK(code_of([] { extraction::PhraseBank({{"  ", PhraseLayer::Fact, "d"}}); }) ==
        ErrorCode::MalformedInput);
  // same phrase under different ids is allowed
  CHECK_NOTHROW(extraction::PhraseBank({{"benign", PhraseLayer::Modifier, "d"},
                                        {"benign", PhraseLayer::Modifier, "e"}}));

  const auto bank_json = extraction::serialize_phrase_bank(test::table1_phrases());
  CHECK(extraction::parse_phrase_bank(bank_json).entries() == test::table1_phrases().entries());
}

TEST_CASE("metrics: token F1") {
  CHECK(metrics::token_f1("focal findings", "focal findings") == 1.0);
  // tokens: pred 4, gold 3, overlap 3 -> 2*3/7
  CHECK(metrics::token_f1("no suspicious focal findings", "suspicious focal findings") ==
        doctest::Approx(6.0 / 7.0).epsilon(1e-12));
  CHECK(metrics::token_f1("", "") == 1.0);
  CHECK(metrics::token_f1("", "x") == 0.0);
  CHECK(metrics::token_f1("x", "") == 0.0);
  CHECK(metrics::token_f1("Left", "left") == 1.0);
  CHECK(metrics::token_f1("a b", "c d") == 0.0);

  std::mt19937_64 rng(4);
  const std::vector<std::string> vocab{"no", "focal", "findings", "left", "right", "mm", ",", "."};
  for (int i = 0; i < 500; ++i) {
    std::string p, g;
    for (std::size_t k = rng() % 6; k > 0; --k) p += vocab[rng() % vocab.size()] + " ";
    for (std::size_t k = rng() % 6; k > 0; --k) g += vocab[rng() % vocab.size()] + " ";
    const double f = metrics::token_f1(p, g);
    CHECK(f == metrics::token_f1(g, p));
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
  }
  const auto r = metrics::evaluate_token_f1({{"1", "a", "a"}, {"2", "", "b"}});
  CHECK(r.average == 0.5);
  CHECK(r.per_item.size() == 2);
  CHECK(metrics::evaluate_token_f1({}).average == 1.0);
}

TEST_CASE("metrics: entity F1") {
  const std::vector<metrics::Entity> gold{{"lat", 0, 4}, {"neg", 5, 7}, {"size", 9, 14}};
  const auto same = metrics::evaluate_entity_f1(gold, gold);
  CHECK(same.average == 1.0);
  const auto partial = metrics::evaluate_entity_f1({gold[0], gold[2]}, gold);
  CHECK(partial.tp == 2);
  CHECK(partial.fp == 0);
  CHECK(partial.fn == 1);
  CHECK(partial.precision == 1.0);
  CHECK(partial.recall == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(partial.average == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(metrics::evaluate_entity_f1({}, gold).average == 0.0);
  CHECK(metrics::evaluate_entity_f1({}, {}).average == 1.0);

  std::mt19937_64 rng(8);
  const auto random_entities = [&] {
    std::vector<metrics::Entity> out(rng() % 8);
    for (auto& e : out) e = {std::string(1, char('a' + rng() % 2)), rng() % 4, 4 + rng() % 3};
    return out;
  };
  for (int i = 0; i < 500; ++i) {
    const auto p = random_entities();
    const auto g = random_entities();
    // exhaustive: distinct tuples, then pairwise comparison
    std::vector<metrics::Entity> up, ug;
    for (const auto& e : p) if (std::find(up.begin(), up.end(), e) == up.end()) up.push_back(e);
    for (const auto& e : g) if (std::find(ug.begin(), ug.end(), e) == ug.end()) ug.push_back(e);
    std::size_t tp = 0;
    for (const auto& x : up) {
      for (const auto& y : ug) tp += x == y;
    }
    const auto r = metrics::evaluate_entity_f1(p, g);
    CHECK(r.tp == tp);
    CHECK(r.fp == up.size() - tp);
    CHECK(r.fn == ug.size() - tp);
    const double f1 = up.empty() && ug.empty() ? 1.0 : 2.0 * tp / double(up.size() + ug.size());
    CHECK(r.average == doctest::Approx(f1).epsilon(1e-12));
  }
  const auto seq = metrics::evaluate_entity_f1(
      std::vector<metrics::SequenceItem>{{"r1", {gold[0]}, {gold[0]}}, {"r2", {}, {gold[1]}}});
  CHECK(seq.tp == 1);
  CHECK(seq.fn == 1);
  const auto j = nlohmann::json::parse(metrics::evaluation_to_json(seq));
  CHECK(j["tp"] == 1);
}

TEST_CASE("remote extractor over loopback") {
  const auto schema = test::table1_schema();
  const std::string text = test::kTable1Sentence;
  const auto gold = test::table1_annotation();
  extraction::ExtractedFact fact{gold.fact_id, gold.span, gold.anchor_id, gold.anchor_span, {}, 0.9,
                                 {}};
  for (const auto& m : gold.modifiers) fact.modifiers.push_back({m.modifier_id, m.span, {}});
  const auto body = extraction::extracted_facts_to_json({fact});

  SUBCASE("valid response") {
    test::StubExtractor stub(200, body);
    extraction::ExtractorDescriptor d{"stub", extraction::ExtractorKind::Remote, stub.endpoint(),
                                      {"table1", "1.0.0"}};
    const auto facts = extraction::remote_extract(d, schema, text);
    REQUIRE(facts.size() == 1);
    CHECK(facts[0].to_annotation() == gold);
    CHECK(facts[0].confidence == 0.9);
    const auto req = nlohmann::json::parse(stub.last_request());
    CHECK(req["schema_id"] == "table1");
    CHECK(req["schema_version"] == "1.0.0");
    CHECK(req["text"] == text);
  }
  SUBCASE("end beyond the text") {
    auto j = nlohmann::json::parse(body);
    j["facts"][0]["end"] = unicode::length(text) + 1;
    test::StubExtractor stub(200, j.dump());
    extraction::ExtractorDescriptor d{"stub", extraction::ExtractorKind::Remote, stub.endpoint(), {}};
    try {
      extraction::remote_extract(d, schema, text);
      FAIL("expected InvalidSpans");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidSpans);
      CHECK_FALSE(e.details().empty());
    }
  }
  SUBCASE("two anchors") {
    auto j = nlohmann::json::parse(body);
    const auto anchor = j["facts"][0]["anchor"];
    j["facts"][0].erase("anchor");
    j["facts"][0]["anchors"] = nlohmann::json::array({anchor, anchor});
    test::StubExtractor stub(200, j.dump());
    extraction::ExtractorDescriptor d{"stub", extraction::ExtractorKind::Remote, stub.endpoint(), {}};
    CHECK(code_of([&] { extraction::remote_extract(d, schema, text); }) == ErrorCode::InvalidSpans);
  }
  SUBCASE("bad status and bad shape") {
    test::StubExtractor err(500, R"({"error":{"code":"x","message":"y"}})");
    extraction::ExtractorDescriptor d{"stub", extraction::ExtractorKind::Remote, err.endpoint(), {}};
    CHECK(code_of([&] { extraction::remote_extract(d, schema, text); }) == ErrorCode::ProtocolError);
    test::StubExtractor junk(200, "[1,2]");
    d.endpoint = junk.endpoint();
    CHECK(code_of([&] { extraction::remote_extract(d, schema, text); }) == ErrorCode::ProtocolError);
  }
  SUBCASE("unknown fact id") {
    auto j = nlohmann::json::parse(body);
    j["facts"][0]["fact_id"] = "ghost";
    CHECK(code_of([&] { extraction::parse_extraction_response(j.dump(), schema, 63); }) ==
          ErrorCode::InvalidSpans);
  }
  SUBCASE("unreachable") {
    int port = 0;
    {
      test::StubExtractor gone(200, "{}");
      port = std::stoi(gone.endpoint().substr(gone.endpoint().rfind(':') + 1));
    }
    extraction::ExtractorDescriptor d{"stub", extraction::ExtractorKind::Remote,
                                      "http://127.0.0.1:" + std::to_string(port), {}};
    try {
      extraction::remote_extract(d, schema, text, {1, 1});
      FAIL("expected Unreachable");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Unreachable);
      CHECK(std::string(e.what()).find(d.endpoint) != std::string::npos);
    }
  }
}
