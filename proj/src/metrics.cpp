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

#include "radex/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "radex/corpus.hpp"
#include "radex/unicode.hpp"

namespace radex::metrics {

namespace {

std::map<std::string, std::size_t> token_bag(std::string_view text) {
  std::map<std::string, std::size_t> bag;
  for (const auto& t : corpus::tokenize(text)) ++bag[unicode::encode(unicode::to_lower(unicode::decode(t.surface)))];
  return bag;
}

double f1_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  if (tp + fp + fn == 0) return 1.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

}  // namespace

double token_f1(std::string_view prediction, std::string_view gold) {
  const auto p = token_bag(prediction);
  const auto g = token_bag(gold);
  std::size_t np = 0, ng = 0, common = 0;
  for (const auto& [tok, n] : p) np += n;
  for (const auto& [tok, n] : g) {
    ng += n;
    if (auto it = p.find(tok); it != p.end()) common += std::min(n, it->second);
  }
  if (np == 0 && ng == 0) return 1.0;
  if (np == 0 || ng == 0 || common == 0) return 0.0;
  return 2.0 * static_cast<double>(common) / static_cast<double>(np + ng);
}

EvaluationResult evaluate_token_f1(const std::vector<QaItem>& items) {
  EvaluationResult r;
  r.metric = "token_f1";
  double sum = 0.0;
  for (const auto& item : items) {
    const double f = token_f1(item.prediction, item.gold);
    r.per_item.emplace_back(item.id, f);
    sum += f;
  }
  r.average = items.empty() ? 1.0 : sum / static_cast<double>(items.size());
  r.precision = r.recall = r.average;
  return r;
}

EvaluationResult evaluate_entity_f1(const std::vector<Entity>& predicted,
                                    const std::vector<Entity>& gold) {
  return evaluate_entity_f1(std::vector<SequenceItem>{{"", predicted, gold}});
}

EvaluationResult evaluate_entity_f1(const std::vector<SequenceItem>& items) {
  EvaluationResult r;
  r.metric = "entity_f1";
  for (const auto& item : items) {
    const std::set<Entity> p(item.predicted.begin(), item.predicted.end());
    const std::set<Entity> g(item.gold.begin(), item.gold.end());
    std::size_t tp = 0;
    for (const auto& e : p) tp += g.count(e);
    const std::size_t fp = p.size() - tp;
    const std::size_t fn = g.size() - tp;
    r.tp += tp;
    r.fp += fp;
    r.fn += fn;
    r.per_item.emplace_back(item.id, f1_from_counts(tp, fp, fn));
  }
  r.precision = r.tp + r.fp == 0 ? 1.0 : static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
  r.recall = r.tp + r.fn == 0 ? 1.0 : static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
  r.average = f1_from_counts(r.tp, r.fp, r.fn);
  return r;
}

std::string evaluation_to_json(const EvaluationResult& result) {
  nlohmann::ordered_json j;
  j["metric"] = result.metric;
  j["average"] = result.average;
  j["precision"] = result.precision;
  j["recall"] = result.recall;
  if (result.metric == "entity_f1") {
    j["tp"] = result.tp;
    j["fp"] = result.fp;
    j["fn"] = result.fn;
  }
  auto items = nlohmann::ordered_json::array();
  for (const auto& [id, score] : result.per_item) items.push_back({{"id", id}, {"score", score}});
  j["per_item"] = std::move(items);
  return j.dump(2) + "\n";
}

}  // namespace radex::metrics
