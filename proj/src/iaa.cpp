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

#include "radex/iaa.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include <json.hpp>

#include "radex/error.hpp"

namespace radex::iaa {

namespace {

using Key = std::pair<Layer, std::string>;
using SpanGroups = std::map<Key, std::vector<cas::SpanOffset>>;
using Edge = std::pair<std::size_t, std::size_t>;

SpanGroups group_spans(const cas::RadExCasDocument& doc) {
  SpanGroups groups;
  for (auto& s : labeled_spans(doc)) groups[{s.layer, s.label}].push_back(s.span);
  return groups;
}

std::size_t intersection(const cas::SpanOffset& x, const cas::SpanOffset& y) {
  const std::size_t lo = std::max(x.begin, y.begin);
  const std::size_t hi = std::min(x.end, y.end);
  return hi > lo ? hi - lo : 0;
}

std::map<Key, Support> score_document(const cas::RadExCasDocument& a,
                                      const cas::RadExCasDocument& b, MatchMode mode) {
  const SpanGroups ga = group_spans(a);
  const SpanGroups gb = group_spans(b);
  std::set<Key> keys;
  for (const auto& [k, _] : ga) keys.insert(k);
  for (const auto& [k, _] : gb) keys.insert(k);
  std::map<Key, Support> out;
  static const std::vector<cas::SpanOffset> kEmpty;
  for (const auto& k : keys) {
    auto ia = ga.find(k);
    auto ib = gb.find(k);
    const auto& sa = ia == ga.end() ? kEmpty : ia->second;
    const auto& sb = ib == gb.end() ? kEmpty : ib->second;
    out[k] = {sa.size(), sb.size(), match_spans(sa, sb, mode).size()};
  }
  return out;
}

std::vector<std::string> shared_doc_ids(const AnnotationSet& a, const AnnotationSet& b) {
  std::vector<std::string> ids;
  for (const auto& [id, doc] : a.documents) {
    auto it = b.documents.find(id);
    if (it == b.documents.end()) continue;
    if (it->second.text != doc.text) {
      throw Error(ErrorCode::TextMismatch, "document '" + id + "' differs between annotators " +
                                               a.annotator_id + " and " + b.annotator_id);
    }
    ids.push_back(id);
  }
  if (ids.empty()) {
    throw Error(ErrorCode::NoSharedDocuments,
                "annotators " + a.annotator_id + " and " + b.annotator_id + " share no documents");
  }
  return ids;
}

std::vector<AgreementScore> to_scores(const std::map<Key, Support>& totals, const AnnotationSet& a,
                                      const AnnotationSet& b, MatchMode mode) {
  std::vector<AgreementScore> out;
  out.reserve(totals.size());
  for (const auto& [key, support] : totals) {
    const Prf p = score(support);
    out.push_back({key.first, key.second, a.annotator_id, b.annotator_id, mode, p.precision,
                   p.recall, p.f1, support});
  }
  return out;
}

Aggregate aggregate(const std::vector<const AgreementScore*>& scores) {
  Aggregate agg;
  double f1_sum = 0.0;
  for (const auto* s : scores) {
    agg.support += s->support;
    f1_sum += s->f1;
  }
  const Prf micro = score(agg.support);
  agg.micro_precision = micro.precision;
  agg.micro_recall = micro.recall;
  agg.micro_f1 = micro.f1;
  agg.scores = scores.size();
  agg.macro_f1 = scores.empty() ? 1.0 : f1_sum / static_cast<double>(scores.size());
  return agg;
}

nlohmann::ordered_json support_json(const Support& s) {
  nlohmann::ordered_json j;
  j["count_a"] = s.count_a;
  j["count_b"] = s.count_b;
  j["matched"] = s.matched;
  return j;
}

nlohmann::ordered_json aggregate_json(const Aggregate& a) {
  nlohmann::ordered_json j;
  j["micro"]["precision"] = a.micro_precision;
  j["micro"]["recall"] = a.micro_recall;
  j["micro"]["f1"] = a.micro_f1;
  j["micro"]["support"] = support_json(a.support);
  j["macro_f1"] = a.macro_f1;
  j["scores"] = a.scores;
  return j;
}

}  // namespace

const char* to_string(MatchMode mode) { return mode == MatchMode::Exact ? "exact" : "overlap"; }

const char* to_string(Layer layer) {
  switch (layer) {
    case Layer::Fact: return "Fact";
    case Layer::Anchor: return "Anchor";
    default: return "Modifier";
  }
}

MatchMode parse_match_mode(std::string_view name) {
  if (name == "exact") return MatchMode::Exact;
  if (name == "overlap") return MatchMode::Overlap;
  throw Error(ErrorCode::MalformedInput, "match mode must be 'exact' or 'overlap'");
}

std::vector<LabeledSpan> labeled_spans(const cas::RadExCasDocument& doc) {
  std::vector<LabeledSpan> out;
  for (const auto& a : doc.annotations) {
    out.push_back({Layer::Fact, a.fact_id, a.span});
    out.push_back({Layer::Anchor, a.anchor_id, a.anchor_span});
    for (const auto& m : a.modifiers) out.push_back({Layer::Modifier, m.modifier_id, m.span});
  }
  return out;
}

Prf score(const Support& s) {
  if (s.count_a == 0 && s.count_b == 0) return {1.0, 1.0, 1.0};
  Prf p;
  const auto m = static_cast<double>(s.matched);
  p.precision = s.count_a ? m / static_cast<double>(s.count_a) : 0.0;
  p.recall = s.count_b ? m / static_cast<double>(s.count_b) : 0.0;
  p.f1 = 2.0 * m / static_cast<double>(s.count_a + s.count_b);
  return p;
}

std::vector<Edge> greedy_match_spans(std::span<const cas::SpanOffset> a,
                                     std::span<const cas::SpanOffset> b, MatchMode mode) {
  struct Candidate {
    std::size_t weight;
    std::size_t begin;
    std::size_t i;
    std::size_t j;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (mode == MatchMode::Exact) {
        if (a[i] == b[j]) candidates.push_back({0, a[i].begin, i, j});
      } else if (std::size_t w = intersection(a[i], b[j])) {
        candidates.push_back({w, std::min(a[i].begin, b[j].begin), i, j});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    if (x.weight != y.weight) return x.weight > y.weight;
    return std::tie(x.begin, x.i, x.j) < std::tie(y.begin, y.i, y.j);
  });
  std::vector<bool> used_a(a.size()), used_b(b.size());
  std::vector<Edge> out;
  for (const auto& c : candidates) {
    if (used_a[c.i] || used_b[c.j]) continue;
    used_a[c.i] = used_b[c.j] = true;
    out.emplace_back(c.i, c.j);
  }
  return out;
}

std::vector<Edge> match_spans(std::span<const cas::SpanOffset> a,
                              std::span<const cas::SpanOffset> b, MatchMode mode) {
  auto seed = greedy_match_spans(a, b, mode);
  // Identical-offset classes are matched optimally by the greedy pass.
  if (mode == MatchMode::Exact || seed.size() == std::min(a.size(), b.size())) return seed;

  // Adjacency in preference order: larger intersection first.
  std::vector<std::vector<std::size_t>> adj(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (intersection(a[i], b[j])) adj[i].push_back(j);
    }
    std::stable_sort(adj[i].begin(), adj[i].end(), [&](std::size_t x, std::size_t y) {
      return intersection(a[i], b[x]) > intersection(a[i], b[y]);
    });
  }
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> match_a(a.size(), kNone), match_b(b.size(), kNone);
  for (const auto& [i, j] : seed) {
    match_a[i] = j;
    match_b[j] = i;
  }
  std::vector<bool> visited;
  std::function<bool(std::size_t)> augment = [&](std::size_t i) {
    for (std::size_t j : adj[i]) {
      if (visited[j]) continue;
      visited[j] = true;
      if (match_b[j] == kNone || augment(match_b[j])) {
        match_a[i] = j;
        match_b[j] = i;
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (match_a[i] != kNone) continue;
    visited.assign(b.size(), false);
    augment(i);
  }
  std::vector<Edge> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (match_a[i] != kNone) out.emplace_back(i, match_a[i]);
  }
  return out;
}

std::vector<AgreementScore> pairwise_span_scores(const AnnotationSet& a, const AnnotationSet& b,
                                                 MatchMode mode) {
  const auto ids = shared_doc_ids(a, b);
  std::vector<std::map<Key, Support>> per_doc(ids.size());
  const auto n = static_cast<std::ptrdiff_t>(ids.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    per_doc[i] = score_document(a.documents.at(ids[i]), b.documents.at(ids[i]), mode);
  }
  std::map<Key, Support> totals;
  for (const auto& doc : per_doc) {
    for (const auto& [k, s] : doc) totals[k] += s;
  }
  return to_scores(totals, a, b, mode);
}

namespace reference {

std::vector<AgreementScore> pairwise_span_scores(const AnnotationSet& a, const AnnotationSet& b,
                                                 MatchMode mode) {
  std::map<Key, Support> totals;
  for (const auto& id : shared_doc_ids(a, b)) {
    for (const auto& [k, s] : score_document(a.documents.at(id), b.documents.at(id), mode)) {
      totals[k] += s;
    }
  }
  return to_scores(totals, a, b, mode);
}

}  // namespace reference

AnnotationReport aggregate_iaa(const std::vector<AnnotationSet>& sets, MatchMode mode,
                               std::string generated_at) {
  if (sets.size() < 2) {
    throw Error(ErrorCode::MalformedInput, "agreement needs at least two annotation sets");
  }
  AnnotationReport report;
  report.mode = mode;
  report.generated_at = std::move(generated_at);
  bool have_schema = false;
  for (const auto& set : sets) {
    report.annotators.push_back(set.annotator_id);
    for (const auto& [id, doc] : set.documents) {
      if (!have_schema) {
        report.schema = doc.schema;
        have_schema = true;
      } else if (!(doc.schema == report.schema)) {
        throw Error(ErrorCode::SchemaMismatch,
                    "document '" + id + "' of " + set.annotator_id + " references schema " +
                        doc.schema.id + "@" + doc.schema.version + ", others use " +
                        report.schema.id + "@" + report.schema.version);
      }
    }
  }

  for (std::size_t x = 0; x < sets.size(); ++x) {
    for (std::size_t y = x + 1; y < sets.size(); ++y) {
      auto scores = pairwise_span_scores(sets[x], sets[y], mode);
      report.scores.insert(report.scores.end(), scores.begin(), scores.end());
      for (const auto& id : shared_doc_ids(sets[x], sets[y])) {
        Support total;
        for (const auto& [k, s] :
             score_document(sets[x].documents.at(id), sets[y].documents.at(id), mode)) {
          total += s;
        }
        report.documents.push_back(
            {id, sets[x].annotator_id, sets[y].annotator_id, total, score(total).f1});
      }
    }
  }

  std::vector<const AgreementScore*> all;
  for (Layer layer : {Layer::Fact, Layer::Anchor, Layer::Modifier}) {
    std::vector<const AgreementScore*> in_layer;
    for (const auto& s : report.scores) {
      if (s.layer == layer) in_layer.push_back(&s);
    }
    all.insert(all.end(), in_layer.begin(), in_layer.end());
    report.layers[layer] = aggregate(in_layer);
  }
  report.overall = aggregate(all);
  return report;
}

std::string report_to_json(const AnnotationReport& r) {
  nlohmann::ordered_json j;
  j["schema"]["id"] = r.schema.id;
  j["schema"]["version"] = r.schema.version;
  j["mode"] = to_string(r.mode);
  j["generated_at"] = r.generated_at;
  j["conventions"]["vacuous_agreement"] =
      "a label that neither annotator used scores precision = recall = f1 = 1.0";
  j["conventions"]["precision_reference"] = "annotator_a";
  j["annotators"] = r.annotators;
  for (const auto& [layer, agg] : r.layers) j["layers"][to_string(layer)] = aggregate_json(agg);
  j["overall"] = aggregate_json(r.overall);
  j["scores"] = nlohmann::ordered_json::array();
  for (const auto& s : r.scores) {
    nlohmann::ordered_json sj;
    sj["annotator_a"] = s.annotator_a;
    sj["annotator_b"] = s.annotator_b;
    sj["layer"] = to_string(s.layer);
    sj["label"] = s.label;
    sj["precision"] = s.precision;
    sj["recall"] = s.recall;
    sj["f1"] = s.f1;
    sj["support"] = support_json(s.support);
    j["scores"].push_back(std::move(sj));
  }
  j["documents"] = nlohmann::ordered_json::array();
  for (const auto& d : r.documents) {
    nlohmann::ordered_json dj;
    dj["doc_id"] = d.doc_id;
    dj["annotator_a"] = d.annotator_a;
    dj["annotator_b"] = d.annotator_b;
    dj["f1"] = d.f1;
    dj["support"] = support_json(d.support);
    j["documents"].push_back(std::move(dj));
  }
  return j.dump(2) + "\n";
}

std::vector<Disagreement> disagreement_list(const std::vector<AnnotationSet>& sets,
                                            MatchMode mode) {
  for (std::size_t x = 0; x < sets.size(); ++x) {
    for (std::size_t y = x + 1; y < sets.size(); ++y) shared_doc_ids(sets[x], sets[y]);
  }
  std::set<std::string> doc_ids;
  for (const auto& s : sets) {
    for (const auto& [id, _] : s.documents) doc_ids.insert(id);
  }
  std::vector<Disagreement> out;
  std::set<std::tuple<std::string, Layer, std::string, cas::SpanOffset, std::vector<std::string>>>
      seen;
  for (const auto& doc_id : doc_ids) {
    std::vector<const SpanGroups*> groups(sets.size(), nullptr);
    std::vector<SpanGroups> storage(sets.size());
    for (std::size_t x = 0; x < sets.size(); ++x) {
      auto it = sets[x].documents.find(doc_id);
      if (it == sets[x].documents.end()) continue;
      storage[x] = group_spans(it->second);
      groups[x] = &storage[x];
    }
    for (std::size_t x = 0; x < sets.size(); ++x) {
      if (!groups[x]) continue;
      for (const auto& [key, spans] : *groups[x]) {
        // partners[k][y]: annotator y matched span k of annotator x
        std::vector<std::vector<bool>> partners(spans.size(), std::vector<bool>(sets.size()));
        for (std::size_t y = 0; y < sets.size(); ++y) {
          if (y == x || !groups[y]) continue;
          auto it = groups[y]->find(key);
          if (it == groups[y]->end()) continue;
          for (const auto& [i, j] : match_spans(spans, it->second, mode)) partners[i][y] = true;
        }
        for (std::size_t k = 0; k < spans.size(); ++k) {
          std::vector<std::string> present;
          for (std::size_t y = 0; y < sets.size(); ++y) {
            if (y == x || partners[k][y]) present.push_back(sets[y].annotator_id);
          }
          if (present.size() == sets.size()) continue;
          if (seen.emplace(doc_id, key.first, key.second, spans[k], present).second) {
            out.push_back({doc_id, key.first, key.second, spans[k], present});
          }
        }
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Disagreement& p, const Disagreement& q) {
    return std::tie(p.doc_id, p.span.begin, p.span.end, p.layer, p.label) <
           std::tie(q.doc_id, q.span.begin, q.span.end, q.layer, q.label);
  });
  return out;
}

std::string disagreements_to_json(const std::vector<Disagreement>& list) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& d : list) {
    nlohmann::ordered_json dj;
    dj["doc_id"] = d.doc_id;
    dj["layer"] = to_string(d.layer);
    dj["label"] = d.label;
    dj["begin"] = d.span.begin;
    dj["end"] = d.span.end;
    dj["annotators_present"] = d.annotators_present;
    j.push_back(std::move(dj));
  }
  return j.dump(2) + "\n";
}

}  // namespace radex::iaa
