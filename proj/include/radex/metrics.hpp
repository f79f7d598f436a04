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

#ifndef RADEX_METRICS_HPP_
#define RADEX_METRICS_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Evaluation metrics for extractive QA (bag-of-tokens F1, as in SQuAD v2)
// and sequence labelling (exact entity-tuple F1, as in seqeval).
namespace radex::metrics {

struct EvaluationResult {
  std::string metric;
  std::vector<std::pair<std::string, double>> per_item;
  double average = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
};

// Both empty -> 1.0; exactly one empty -> 0.0.
double token_f1(std::string_view prediction, std::string_view gold);

struct QaItem {
  std::string id;
  std::string prediction;
  std::string gold;
};

// average = mean per-item token F1.
EvaluationResult evaluate_token_f1(const std::vector<QaItem>& items);

struct Entity {
  std::string label;
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const Entity&, const Entity&) = default;
  friend auto operator<=>(const Entity&, const Entity&) = default;
};

// Micro P/R/F1 over exact (label, begin, end) tuples; duplicates count once.
// average = f1. Nothing predicted and nothing expected scores 1.0.
EvaluationResult evaluate_entity_f1(const std::vector<Entity>& predicted,
                                    const std::vector<Entity>& gold);

struct SequenceItem {
  std::string id;
  std::vector<Entity> predicted;
  std::vector<Entity> gold;
};

EvaluationResult evaluate_entity_f1(const std::vector<SequenceItem>& items);

std::string evaluation_to_json(const EvaluationResult& result);

}  // namespace radex::metrics

#endif  // RADEX_METRICS_HPP_
