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

// Serial reference vs. OpenMP kernels on synthetic mammography-style reports.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "radex/corpus.hpp"
#include "radex/extraction.hpp"
#include "radex/iaa.hpp"
#include "radex/schema.hpp"

namespace {

using namespace radex;

schema::FactSchema bench_schema() {
  schema::FactSchema s;
  s.schema_id = "bench";
  s.version = "1.0.0";
  s.language = "en";
  s.modifiers.push_back({"negation", "Negation", schema::ModifierRole::Negation, schema::FreeText{}});
  schema::ValueSet side;
  side.values = {{"7771000", "http://snomed.info/sct", "Left", {"left"}},
                 {"24028007", "http://snomed.info/sct", "Right", {"right"}}};
  s.modifiers.push_back({"laterality", "Laterality", schema::ModifierRole::Plain, side});
  schema::ValueUnit size;
  size.target_unit = "mm";
  size.accepted_units = {{"mm", *Decimal::parse("1")}, {"cm", *Decimal::parse("10")}};
  s.modifiers.push_back({"size", "Size", schema::ModifierRole::Plain, size});
  s.facts.push_back({"mass_described", "Mass", "", {"mass", "Mass", {"focal findings"}},
                     {"negation", "laterality", "size"}});
  s.facts.push_back({"calcifications", "Calcifications", "", {"calc", "Calcifications", {"calcifications"}},
                     {"negation", "laterality"}});
  return s;
}

std::string report(std::mt19937_64& rng) {
  static const char* kSentences[] = {
      "No suspicious focal findings on the left side.",
      "Focal findings of 12 mm on the right side.",
      "Scattered benign calcifications on the left.",
      "No calcifications.",
      "Breast tissue of heterogeneous density.",
      "Focal findings of 1,5 cm in the right breast."};
  std::string out;
  const int n = 4 + static_cast<int>(rng() % 8);
  for (int i = 0; i < n; ++i) {
    if (!out.empty()) out += ' ';
    out += kSentences[rng() % std::size(kSentences)];
  }
  return out;
}

corpus::Corpus make_corpus(std::size_t n) {
  std::mt19937_64 rng(42);
  corpus::Corpus c;
  for (std::size_t i = 0; i < n; ++i) {
    c.push_back({"r" + std::to_string(i), report(rng), i % 3 == 0 ? "abnormal" : "normal", {}});
  }
  return c;
}

std::vector<std::string> texts_of(const corpus::Corpus& c) {
  std::vector<std::string> out;
  for (const auto& r : c) out.push_back(r.text);
  return out;
}

std::pair<iaa::AnnotationSet, iaa::AnnotationSet> make_sets(std::size_t n) {
  const auto s = bench_schema();
  const extraction::BaselineExtractor ex(s, {});
  const auto c = make_corpus(n);
  iaa::AnnotationSet a{"a", {}}, b{"b", {}};
  std::size_t k = 0;
  for (const auto& r : c) {
    cas::RadExCasDocument doc{r.report_id, r.text, "en", {s.schema_id, s.version}, {}};
    cas::RadExCasDocument other = doc;
    for (const auto& f : ex.extract(r.text)) {
      doc.annotations.push_back(f.to_annotation());
      if (++k % 5 != 0) other.annotations.push_back(f.to_annotation());
    }
    a.documents.emplace(r.report_id, std::move(doc));
    b.documents.emplace(r.report_id, std::move(other));
  }
  return {std::move(a), std::move(b)};
}

void BM_CorpusStatsSerial(benchmark::State& state) {
  const auto c = make_corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(corpus::reference::corpus_stats(c));
}

void BM_CorpusStatsParallel(benchmark::State& state) {
  const auto c = make_corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(corpus::corpus_stats(c));
}

void BM_PairwiseSerial(benchmark::State& state) {
  const auto [a, b] = make_sets(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(iaa::reference::pairwise_span_scores(a, b, iaa::MatchMode::Overlap));
  }
}

void BM_PairwiseParallel(benchmark::State& state) {
  const auto [a, b] = make_sets(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(iaa::pairwise_span_scores(a, b, iaa::MatchMode::Overlap));
  }
}

void BM_ExtractSerial(benchmark::State& state) {
  const auto s = bench_schema();
  const extraction::BaselineExtractor ex(s, {});
  const auto texts = texts_of(make_corpus(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(extraction::reference::extract_batch(ex, texts));
}

void BM_ExtractParallel(benchmark::State& state) {
  const auto s = bench_schema();
  const extraction::BaselineExtractor ex(s, {});
  const auto texts = texts_of(make_corpus(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(extraction::extract_batch(ex, texts));
}

}  // namespace

BENCHMARK(BM_CorpusStatsSerial)->Arg(1000)->Arg(10000);
BENCHMARK(BM_CorpusStatsParallel)->Arg(1000)->Arg(10000);
BENCHMARK(BM_PairwiseSerial)->Arg(1000)->Arg(5000);
BENCHMARK(BM_PairwiseParallel)->Arg(1000)->Arg(5000);
BENCHMARK(BM_ExtractSerial)->Arg(1000)->Arg(5000);
BENCHMARK(BM_ExtractParallel)->Arg(1000)->Arg(5000);

BENCHMARK_MAIN();
