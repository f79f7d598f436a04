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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "radex/cas.hpp"
#include "radex/cli.hpp"
#include "radex/corpus.hpp"
#include "radex/error.hpp"
#include "radex/extraction.hpp"
#include "radex/fhir.hpp"
#include "radex/filling.hpp"
#include "radex/iaa.hpp"
#include "radex/metrics.hpp"
#include "radex/schema.hpp"
#include "radex/server.hpp"
#include "radex/unicode.hpp"
#include "support.hpp"

using namespace radex;
using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool has_code(const std::vector<schema::Violation>& vs, const std::string& code) {
  for (const auto& v : vs) {
    if (v.code == code) return true;
  }
  return false;
}

// 1 --------------------------------------------------------------------------

Outcome schema_round_trip() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  std::size_t mutations = 0;
  for (int i = 0; i < 100 && o.ok; ++i) {
    const auto s = test::random_schema(rng);
    o.require(s.facts.size() <= 30 && s.modifiers.size() <= 80, "generator exceeded size bounds");
    o.require(schema::validate_schema(s).empty(), "generated schema " + std::to_string(i) + " is invalid");
    const auto bytes = schema::serialize_fact_schema(s);
    o.require(schema::serialize_fact_schema(schema::parse_fact_schema(bytes)) == bytes,
              "byte mismatch on schema " + std::to_string(i));

    const auto check = [&](const std::function<void(schema::FactSchema&)>& mutate, const std::string& code) {
      auto bad = s;
      mutate(bad);
      ++mutations;
      o.require(has_code(schema::validate_schema(bad), code), code + " not reported on schema " + std::to_string(i));
      try {
        schema::parse_fact_schema(schema::serialize_fact_schema(bad));
        o.require(false, code + " accepted by the parser");
      } catch (const Error& e) {
        o.require(e.code() == ErrorCode::SchemaInvariantViolation, code + ": wrong error code");
      }
    };
    if (s.facts.size() >= 2) {
      check([](schema::FactSchema& x) { x.facts[1].id = x.facts[0].id; }, "DUPLICATE_FACT_ID");
      check([](schema::FactSchema& x) { x.facts[1].anchor.id = x.facts[0].anchor.id; }, "DUPLICATE_ANCHOR_ID");
    }
    if (s.modifiers.size() >= 2) {
      check([](schema::FactSchema& x) { x.modifiers[1].id = x.modifiers[0].id; }, "DUPLICATE_MODIFIER_ID");
    }
    check([](schema::FactSchema& x) { x.facts[0].modifier_ids.push_back("no_such_modifier"); },
          "DANGLING_MODIFIER_REF");
    for (std::size_t m = 0; m < s.modifiers.size(); ++m) {
      const auto* vs = std::get_if<schema::ValueSet>(&s.modifiers[m].standardizer);
      if (!vs || !vs->max_card) continue;
      check([m](schema::FactSchema& x) {
              auto& target = std::get<schema::ValueSet>(x.modifiers[m].standardizer);
              target.min_card = *target.max_card + 1;
            },
            "CARDINALITY_ORDER");
      break;
    }
  }
  const double t = seconds_since(start);
  o.require(t < 5.0, "runtime " + std::to_string(t) + " s exceeds 5 s");
  if (o.ok) {
    std::ostringstream d;
    d << "100 schemas byte-identical, " << mutations << " mutations rejected, " << t << " s";
    o.detail = d.str();
  }
  return o;
}

// 2 --------------------------------------------------------------------------

Outcome cas_conversion() {
  Outcome o;
  const auto s = test::table1_schema();
  const cas::RadExCasDocument table1{"table1-report", test::kTable1Sentence, "en", {s.schema_id, s.version},
                                     {test::table1_annotation()}};
  o.require(cas::parse_radex_cas(cas::serialize_radex_cas(table1)) == table1, "Table 1 document changed");
  const auto converted = cas::convert_external_cas(test::read_file(test::data_path("table1_inception.xmi")),
                                                   cas::parse_cas_mapping(test::read_file(test::data_path("inception_mapping.json"))),
                                                   s, "table1-report");
  o.require(converted.annotations == table1.annotations, "Inception export converts to different spans");

  const std::regex span_attr("<types:(?:Fact|Anchor|Modifier) [^>]*begin=\"([0-9]+)\" end=\"([0-9]+)\"");
  std::mt19937_64 rng(2002);
  std::size_t mismatches = 0, spans = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto cps = test::random_text(rng, 1 + rng() % 60);
    // oracle: UTF-16 prefix lengths counted directly from the code points
    std::vector<std::size_t> units{0};
    for (char32_t c : cps) units.push_back(units.back() + (c >= 0x10000 ? 2 : 1));
    const unicode::OffsetMap map(cps);
    for (std::size_t k = 0; k <= cps.size(); ++k) {
      if (map.to_utf16(k) != units[k] || map.to_code_point(units[k]) != k) ++mismatches;
    }
    cas::RadExCasDocument doc{"d" + std::to_string(i), unicode::encode(cps), "en", {"s", "1.0.0"}, {}};
    std::vector<std::size_t> expected;
    for (std::size_t n = rng() % 4; n > 0; --n) {
      const std::size_t b = rng() % cps.size();
      const std::size_t e = b + 1 + rng() % (cps.size() - b);
      cas::FactAnnotation a{"f", {b, e}, "a", {b, b + 1}, {}};
      expected.insert(expected.end(), {units[b], units[e], units[b], units[b + 1]});
      if (e - b > 1) {
        a.modifiers.push_back({"m", {b + 1, e}});
        expected.insert(expected.end(), {units[b + 1], units[e]});
      }
      doc.annotations.push_back(a);
    }
    const auto xmi = cas::serialize_radex_cas(doc);
    std::vector<std::size_t> written;
    for (auto it = std::sregex_iterator(xmi.begin(), xmi.end(), span_attr); it != std::sregex_iterator(); ++it) {
      written.push_back(std::stoul((*it)[1]));
      written.push_back(std::stoul((*it)[2]));
    }
    spans += expected.size() / 2;
    if (written != expected) ++mismatches;
    if (!(cas::parse_radex_cas(xmi) == doc)) ++mismatches;
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " offset mismatches");
  if (o.ok) o.detail = "Table 1 equal; 1000 texts, " + std::to_string(spans) + " spans, 0 mismatches";
  return o;
}

// 3 --------------------------------------------------------------------------

iaa::AnnotationSet random_set(std::mt19937_64& rng, const std::string& who) {
  static const std::string kText(80, 'x');
  iaa::AnnotationSet set{who, {}};
  for (int d = 0; d < 3; ++d) {
    cas::RadExCasDocument doc{"doc" + std::to_string(d), kText, "en", {"s", "1.0.0"}, {}};
    std::map<std::string, int> per_label;
    for (const char* fact : {"fa", "fb"}) {
      for (std::size_t k = rng() % 6; k > 0; --k) {
        const std::size_t b = rng() % 60;
        const cas::SpanOffset span{b, b + 1 + rng() % 15};
        cas::FactAnnotation a{fact, span, std::string("x") + fact, {span.begin, span.begin + 1}, {}};
        const std::string mod = rng() % 2 ? "m1" : "m2";
        if (per_label[mod] < 5 && rng() % 2) {
          ++per_label[mod];
          const std::size_t mb = span.begin + rng() % span.length();
          a.modifiers.push_back({mod, {mb, std::min(span.end, mb + 1 + rng() % 4)}});
        }
        doc.annotations.push_back(std::move(a));
      }
    }
    set.documents.emplace(doc.doc_id, std::move(doc));
  }
  return set;
}

bool overlaps(const cas::SpanOffset& x, const cas::SpanOffset& y) {
  return std::max(x.begin, y.begin) < std::min(x.end, y.end);
}

Outcome iaa_oracle() {
  Outcome o;
  std::mt19937_64 rng(3003);
  std::size_t groups = 0, greedy_short = 0;
  for (int pair = 0; pair < 500 && o.ok; ++pair) {
    const auto a = random_set(rng, "a");
    const auto b = random_set(rng, "b");
    for (const auto& [id, doc_a] : a.documents) {
      std::map<std::pair<iaa::Layer, std::string>, std::vector<cas::SpanOffset>> ga, gb;
      for (const auto& s : iaa::labeled_spans(doc_a)) ga[{s.layer, s.label}].push_back(s.span);
      for (const auto& s : iaa::labeled_spans(b.documents.at(id))) gb[{s.layer, s.label}].push_back(s.span);
      for (const auto& [key, sa] : ga) {
        const auto& sb = gb[key];
        o.require(sa.size() <= 5 && sb.size() <= 5, "more than 5 spans per label");
        for (auto mode : {iaa::MatchMode::Exact, iaa::MatchMode::Overlap}) {
          const auto best = test::brute_force_max_matching(sa.size(), sb.size(), [&](auto i, auto j) {
            return mode == iaa::MatchMode::Exact ? sa[i] == sb[j] : overlaps(sa[i], sb[j]);
          });
          ++groups;
          o.require(iaa::match_spans(sa, sb, mode).size() == best, "matching below the exhaustive maximum");
          greedy_short += iaa::greedy_match_spans(sa, sb, mode).size() < best;
        }
      }
    }
    for (auto mode : {iaa::MatchMode::Exact, iaa::MatchMode::Overlap}) {
      auto copy = a;
      copy.annotator_id = "a2";
      for (const auto& s : iaa::pairwise_span_scores(a, copy, mode)) {
        o.require(s.f1 == 1.0 && s.precision == 1.0 && s.recall == 1.0, "self agreement below 1.0");
      }
      const auto report = iaa::aggregate_iaa({a, b}, mode);
      for (const auto& [layer, agg] : report.layers) {
        std::size_t ca = 0, cb = 0, m = 0;
        for (const auto& s : report.scores) {
          if (s.layer != layer) continue;
          ca += s.support.count_a;
          cb += s.support.count_b;
          m += s.support.matched;
        }
        const double micro = ca + cb == 0 ? 1.0 : 2.0 * static_cast<double>(m) / static_cast<double>(ca + cb);
        o.require(std::abs(micro - agg.micro_f1) <= 1e-12, "micro aggregate differs from summed supports");
      }
    }
  }
  if (o.ok) {
    o.detail = std::to_string(groups) + " label groups at the exhaustive maximum (greedy seed alone short in " +
               std::to_string(greedy_short) + "); self f1 = 1.0; micro within 1e-12";
  }
  return o;
}

// 4 --------------------------------------------------------------------------

Outcome metric_fixtures() {
  Outcome o;
  const double qa = metrics::token_f1("no suspicious focal findings", "suspicious focal findings");
  o.require(std::abs(qa - 6.0 / 7.0) <= 1e-9, "token F1 " + std::to_string(qa));
  const std::vector<metrics::Entity> gold{{"lat", 0, 4}, {"neg", 5, 7}, {"size", 9, 14}};
  const auto ent = metrics::evaluate_entity_f1({gold[0], gold[1]}, gold);
  o.require(ent.tp == 2 && ent.fp == 0 && ent.fn == 1, "entity counts");
  o.require(std::abs(ent.average - 0.8) <= 1e-12, "entity F1 " + std::to_string(ent.average));
  o.require(metrics::token_f1("", "") == 1.0, "token F1 both empty");
  o.require(metrics::evaluate_entity_f1({}, {}).average == 1.0, "entity F1 both empty");
  if (o.ok) o.detail = "token F1 = 6/7, entity F1 = 0.8, empty conventions 1.0";
  return o;
}

// 5 --------------------------------------------------------------------------

Outcome synthetic_closure() {
  Outcome o;
  const auto start = Clock::now();
  const auto s = test::table1_schema();
  const auto tmpl = test::table1_template();
  const auto extractor = extraction::build_baseline_extractor(s, test::table1_phrases());
  std::mt19937_64 rng(5005);
  std::size_t recovered = 0, with_cm = 0;
  for (int i = 0; i < 200; ++i) {
    const auto r = test::synthetic_report(rng);
    with_cm += r.text.find(" cm") != std::string::npos;
    const auto filled = filling::fill_template(tmpl, s, extractor.extract(r.text), r.text);
    bool ok = filled.items.size() == 1;
    if (ok) {
      const auto& item = filled.items[0];
      ok = item.status == (r.negated ? filling::FactStatus::Negated : filling::FactStatus::Present);
      bool dignity = false, lat = false, size = false;
      for (const auto& a : item.modifier_answers) {
        if (a.modifier_id == "dignity") dignity = true;
        if (a.modifier_id == "laterality") {
          const auto* m = std::get_if<filling::MappingOutcome>(&a.answer);
          const auto* mapped = m ? std::get_if<filling::Mapped>(m) : nullptr;
          lat = mapped && mapped->values.size() == 1 && mapped->values[0].code == r.laterality_code;
        }
        if (a.modifier_id == "size") {
          const auto* q = std::get_if<filling::Quantity>(&a.answer);
          size = q && q->unit == "mm" && q->value.to_string() == r.size_mm;
        }
      }
      ok = ok && lat && size && dignity == r.suspicious;
    }
    recovered += ok;
  }
  const double t = seconds_since(start);
  o.require(recovered == 200, std::to_string(recovered) + "/200 reports recovered");
  o.require(with_cm > 0 && with_cm < 200, "grammar did not mix mm and cm");
  o.require(t < 10.0, "runtime " + std::to_string(t) + " s exceeds 10 s");
  if (o.ok) {
    std::ostringstream d;
    d << "200/200 reports recovered (" << with_cm << " in cm), " << t << " s";
    o.detail = d.str();
  }
  return o;
}

// 6 --------------------------------------------------------------------------

Outcome filling_fixtures() {
  Outcome o;
  const auto s = test::table1_schema();
  const auto& vs = std::get<schema::ValueSet>(s.find_modifier("laterality")->standardizer);
  const auto& vu = std::get<schema::ValueUnit>(s.find_modifier("size")->standardizer);
  const auto right = filling::map_to_value_set("on the right side", vs);
  const auto* mapped = std::get_if<filling::Mapped>(&right);
  o.require(mapped && mapped->values.size() == 1 && mapped->values[0].code == "24028007" &&
                mapped->values[0].display == "Right",
            "\"on the right side\" not mapped to 24028007 | Right");
  const auto q = filling::standardize_quantity("1,5 cm", vu);
  const auto* quantity = std::get_if<filling::Quantity>(&q);
  o.require(quantity && quantity->value == Decimal(15) && quantity->value.to_string() == "15" && quantity->unit == "mm",
            "\"1,5 cm\" is not exactly 15 mm");
  const auto both = filling::map_to_value_set("left and right", vs);
  const auto* violation = std::get_if<filling::CardinalityViolation>(&both);
  o.require(violation && violation->matched == 2, "\"left and right\" is not a cardinality violation");
  if (o.ok) o.detail = "24028007 | Right; 15 mm exact; cardinality_violation(2, [0..1])";
  return o;
}

// 7 --------------------------------------------------------------------------

Outcome sealed_corpus() {
  Outcome o;
  std::mt19937_64 rng(7007);
  corpus::Corpus c;
  for (int i = 0; i < 1000; ++i) {
    c.push_back({"r" + std::to_string(i), unicode::encode(test::random_text(rng, 1 + rng() % 200)),
                 i % 4 ? "normal" : "suspicious", {{"site", std::to_string(i % 3)}}});
  }
  const auto first = corpus::seal_corpus(c, "passphrase one");
  const auto bytes = first.to_bytes();
  o.require(corpus::open_corpus(corpus::SealedCorpus::from_bytes(bytes), "passphrase one") == c,
            "round trip changed the corpus");
  try {
    corpus::open_corpus(first, "passphrase two");
    o.require(false, "wrong key accepted");
  } catch (const Error& e) {
    o.require(e.code() == ErrorCode::AuthenticationFailure, "wrong key raised another error");
  }
  // same through the command line: nothing may reach stdout
  test::TempDir dir;
  const auto path = (dir.path() / "c.rdxc").string();
  std::ofstream(path, std::ios::binary).write(reinterpret_cast<const char*>(bytes.data()),
                                              static_cast<std::streamsize>(bytes.size()));
  std::ostringstream out, err;
  const int code = cli::dispatch({"corpus", "open", path, "--key", "passphrase two"}, out, err);
  o.require(code == 1, "CLI exit code " + std::to_string(code));
  o.require(out.str().empty(), "CLI emitted " + std::to_string(out.str().size()) + " plaintext bytes");
  o.require(err.str().find("AuthenticationFailure") != std::string::npos, "CLI did not report AuthenticationFailure");
  const auto second = corpus::seal_corpus(c, "passphrase one");
  o.require(second.ciphertext != first.ciphertext, "two seals produced identical ciphertext");
  if (o.ok) o.detail = "1000 docs equal; wrong key -> AuthenticationFailure, 0 bytes out; ciphertexts differ";
  return o;
}

// 8 --------------------------------------------------------------------------

void collect(const Json& node, std::set<std::string>& ids) {
  if (!node.contains("item")) return;
  for (const auto& child : node["item"]) {
    ids.insert(child["linkId"].get<std::string>());
    collect(child, ids);
  }
}

const Json* find_item(const Json& node, const std::string& link_id) {
  if (!node.contains("item")) return nullptr;
  for (const auto& child : node["item"]) {
    if (child["linkId"] == link_id) return &child;
    if (const auto* hit = find_item(child, link_id)) return hit;
  }
  return nullptr;
}

Outcome integration_server() {
  Outcome o;
  const auto s = test::table1_schema();
  const auto gold = test::table1_annotation();
  extraction::ExtractedFact fact{gold.fact_id, gold.span, gold.anchor_id, gold.anchor_span, {}, {}, {}};
  for (const auto& m : gold.modifiers) fact.modifiers.push_back({m.modifier_id, m.span, {}});
  auto broken = nlohmann::json::parse(extraction::extracted_facts_to_json({fact}));
  broken["facts"][0]["end"] = unicode::length(test::kTable1Sentence) + 10;
  test::StubExtractor stub(200, broken.dump());

  test::TempDir dir;
  server::SchemaStore(dir.path()).put_schema(s);
  std::filesystem::create_directories(dir.path() / "phrases");
  std::ofstream(dir.path() / "phrases" / "table1.json") << test::read_file(test::data_path("table1_phrases.json"));
  server::ServerConfig config;
  config.store = dir.path();
  config.remotes = {{"stub", extraction::ExtractorKind::Remote, stub.endpoint(), {}}};
  server::IntegrationServer srv(config);
  const int port = srv.start_background();
  httplib::Client client("127.0.0.1", port);

  const auto q = fhir::template_to_questionnaire(test::table1_template(), s);
  const Json req{{"questionnaire", q}, {"text", test::kTable1Sentence}};
  const auto res = client.Post("/v1/fill", req.dump(), "application/json");
  o.require(res && res->status == 200, "/v1/fill did not answer 200");
  if (res && res->status == 200) {
    const auto body = Json::parse(res->body);
    std::set<std::string> qids, rids;
    collect(q, qids);
    collect(body, rids);
    for (const auto& id : rids) o.require(qids.count(id) == 1, "answered linkId " + id + " not in the Questionnaire");
    const auto* presence = find_item(body, "mass_described.presence");
    o.require(presence && (*presence)["answer"][0]["valueBoolean"] == false, "presence is not false");
    o.require(presence && presence->contains("extension") &&
                  (*presence)["extension"][0]["url"] == fhir::kNegatedExtension &&
                  (*presence)["extension"][0]["valueBoolean"] == true,
              "negated flag missing");
    const auto* lat = find_item(body, "mass_described.laterality");
    o.require(lat && (*lat)["answer"][0]["valueCoding"]["code"] == "24028007", "laterality is not 24028007");
  }

  std::mt19937_64 rng(8008);
  std::size_t round_trips = 0;
  for (int i = 0; i < 100; ++i) {
    const auto rs = test::random_schema(rng);
    const auto t = test::random_template(rs, rng);
    round_trips += fhir::questionnaire_to_template(fhir::template_to_questionnaire(t, rs), rs) == t;
  }
  o.require(round_trips == 100, std::to_string(round_trips) + "/100 template round trips");

  Json stub_req = req;
  stub_req["extractor"] = "stub";
  const auto bad = client.Post("/v1/fill", stub_req.dump(), "application/json");
  o.require(bad && bad->status == 502, "out-of-bounds spans did not yield 502");
  if (bad) {
    const auto err = nlohmann::json::parse(bad->body, nullptr, false);
    o.require(err.is_object() && err.contains("error") && err["error"]["code"] == "InvalidSpans",
              "502 body is not InvalidSpans");
    o.require(bad->body.find("QuestionnaireResponse") == std::string::npos, "a clipped answer was returned");
  }
  srv.stop();
  if (o.ok) {
    o.detail = "Table 1 response mirrors the Questionnaire (presence=false, negated, 24028007); "
               "100/100 round trips; stub -> 502 InvalidSpans; no secondary component built";
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"schema round trip", schema_round_trip},
      {"CAS conversion", cas_conversion},
      {"IAA oracle equivalence", iaa_oracle},
      {"metric fixtures", metric_fixtures},
      {"end-to-end synthetic closure", synthetic_closure},
      {"template filling fixtures", filling_fixtures},
      {"sealed corpus", sealed_corpus},
      {"integration server", integration_server},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  return failed ? 1 : 0;
}
