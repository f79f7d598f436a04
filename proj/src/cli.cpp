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

#include "radex/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "radex/cas.hpp"
#include "radex/corpus.hpp"
#include "radex/error.hpp"
#include "radex/extraction.hpp"
#include "radex/filling.hpp"
#include "radex/iaa.hpp"
#include "radex/metrics.hpp"
#include "radex/schema.hpp"
#include "radex/server.hpp"

namespace radex::cli {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path, path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out.flush()) throw Error(ErrorCode::Io, "cannot write " + path, path);
}

// Writes to `output` when set, otherwise to stdout.
void emit(std::ostream& out, const std::string& output, std::string_view bytes) {
  if (output.empty()) {
    out << bytes;
  } else {
    write_file(output, bytes);
  }
}

std::string resolve_key(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("RADEX_CORPUS_KEY"); env && *env) return env;
  throw Error(ErrorCode::MalformedInput, "no key given (use --key or RADEX_CORPUS_KEY)");
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

// One annotation set per directory: the directory name is the annotator,
// every *.xmi file inside is one RadEx CAS document.
iaa::AnnotationSet load_annotation_set(const std::string& dir) {
  iaa::AnnotationSet set;
  set.annotator_id = fs::path(dir).filename().string();
  if (set.annotator_id.empty()) set.annotator_id = fs::path(dir).parent_path().filename().string();
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& e : fs::directory_iterator(dir, ec)) {
    if (e.path().extension() == ".xmi") files.push_back(e.path());
  }
  if (ec) throw Error(ErrorCode::Io, "cannot list " + dir + ": " + ec.message(), dir);
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    auto doc = cas::parse_radex_cas(read_file(f.string()));
    if (doc.doc_id.empty()) doc.doc_id = f.stem().string();
    const std::string id = doc.doc_id;
    if (!set.documents.emplace(id, std::move(doc)).second) {
      throw Error(ErrorCode::MalformedInput, "duplicate document id '" + id + "' in " + dir, dir);
    }
  }
  return set;
}

metrics::Entity read_entity(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("label") || !j.contains("begin") || !j.contains("end")) {
    throw Error(ErrorCode::MalformedInput, "entities need label, begin and end");
  }
  return {j["label"].get<std::string>(), j["begin"].get<std::size_t>(), j["end"].get<std::size_t>()};
}

std::vector<nlohmann::json> read_jsonl_objects(const std::string& path) {
  std::vector<nlohmann::json> out;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedInput, path + ":" + std::to_string(n) + ": " + e.what(), path);
    }
  }
  return out;
}

extraction::PhraseBank load_phrases(const std::string& path) {
  if (path.empty()) return {};
  return extraction::parse_phrase_bank(read_file(path));
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"RadEx: fact schemas, annotation artifacts, corpora, extraction and template filling",
               "radex"};
  app.require_subcommand(1);

  // schema
  auto* schema_cmd = app.add_subcommand("schema", "Fact schemas and report templates");
  schema_cmd->require_subcommand(1);
  std::string schema_file, output, template_file, facts_csv, filter_file, template_id;

  auto* validate = schema_cmd->add_subcommand("validate", "Check a fact schema");
  validate->add_option("schema", schema_file, "Fact schema JSON")->required();

  auto* export_uima = schema_cmd->add_subcommand("export-uima", "Write the UIMA type system");
  export_uima->add_option("schema", schema_file, "Fact schema JSON")->required();
  export_uima->add_option("-o,--output", output, "Output file");

  auto* derive = schema_cmd->add_subcommand("template", "Derive a report template");
  derive->add_option("schema", schema_file, "Fact schema JSON")->required();
  derive->add_option("--facts", facts_csv, "Comma-separated fact ids")->required();
  derive->add_option("--filter", filter_file, "JSON object: fact id -> modifier ids");
  derive->add_option("--id", template_id, "Template id");
  derive->add_option("-o,--output", output, "Output file");

  // annotate
  auto* annotate = app.add_subcommand("annotate", "Annotation tool support");
  annotate->require_subcommand(1);
  std::string tool_id = "inception";
  auto* gen_config = annotate->add_subcommand("gen-config", "Layer configuration for a schema");
  gen_config->add_option("schema", schema_file, "Fact schema JSON")->required();
  gen_config->add_option("--tool", tool_id, "Tool id");
  gen_config->add_option("-o,--output", output, "Output file");

  // cas
  auto* cas_cmd = app.add_subcommand("cas", "CAS files");
  cas_cmd->require_subcommand(1);
  std::string xmi_file, mapping_file, doc_id;
  auto* convert = cas_cmd->add_subcommand("convert", "Tool XMI export to RadEx CAS");
  convert->add_option("xmi", xmi_file, "Tool XMI export")->required();
  convert->add_option("--schema", schema_file, "Fact schema JSON")->required();
  convert->add_option("--mapping", mapping_file, "Type mapping JSON (default: Inception layers)");
  convert->add_option("--doc-id", doc_id, "Document id");
  convert->add_option("-o,--output", output, "Output file");

  // iaa
  auto* iaa_cmd = app.add_subcommand("iaa", "Inter-annotator agreement");
  iaa_cmd->require_subcommand(1);
  std::vector<std::string> set_dirs;
  std::string mode_name = "exact", generated_at;
  auto* iaa_report = iaa_cmd->add_subcommand("report", "Agreement report");
  iaa_report->add_option("sets", set_dirs, "One directory of .xmi files per annotator")->required();
  iaa_report->add_option("--mode", mode_name, "exact or overlap");
  iaa_report->add_option("--generated-at", generated_at, "Timestamp recorded in the report");
  iaa_report->add_option("-o,--output", output, "Output file");
  auto* iaa_diff = iaa_cmd->add_subcommand("diff", "Spans not matched by every annotator");
  iaa_diff->add_option("sets", set_dirs, "One directory of .xmi files per annotator")->required();
  iaa_diff->add_option("--mode", mode_name, "exact or overlap");
  iaa_diff->add_option("-o,--output", output, "Output file");

  // corpus
  auto* corpus_cmd = app.add_subcommand("corpus", "Report corpora (JSON lines)");
  corpus_cmd->require_subcommand(1);
  std::string corpus_file, key;
  std::size_t sample_size = 0;
  std::uint64_t seed = 0;
  auto* fix = corpus_cmd->add_subcommand("fix", "Repair mojibake");
  fix->add_option("corpus", corpus_file)->required();
  fix->add_option("-o,--output", output, "Output file");
  auto* dedup = corpus_cmd->add_subcommand("dedup", "Drop duplicate texts");
  dedup->add_option("corpus", corpus_file)->required();
  dedup->add_option("-o,--output", output, "Output file");
  auto* sample = corpus_cmd->add_subcommand("sample", "Stratified random sample");
  sample->add_option("corpus", corpus_file)->required();
  sample->add_option("-n,--size", sample_size, "Sample size")->required();
  sample->add_option("--seed", seed, "Random seed");
  sample->add_option("-o,--output", output, "Output file");
  auto* stats = corpus_cmd->add_subcommand("stats", "Token statistics");
  stats->add_option("corpus", corpus_file)->required();
  stats->add_option("-o,--output", output, "Output file");
  auto* seal = corpus_cmd->add_subcommand("seal", "Encrypt a corpus");
  seal->add_option("corpus", corpus_file)->required();
  seal->add_option("--key", key, "Passphrase (or RADEX_CORPUS_KEY)");
  seal->add_option("-o,--output", output, "Output file")->required();
  auto* open = corpus_cmd->add_subcommand("open", "Decrypt a sealed corpus");
  open->add_option("sealed", corpus_file)->required();
  open->add_option("--key", key, "Passphrase (or RADEX_CORPUS_KEY)");
  open->add_option("-o,--output", output, "Output file");

  // extract
  auto* extract_cmd = app.add_subcommand("extract", "Extraction and evaluation");
  extract_cmd->require_subcommand(1);
  std::string phrases_file, text_file, items_file;
  auto* run = extract_cmd->add_subcommand("run", "Baseline extraction");
  run->add_option("--schema", schema_file, "Fact schema JSON")->required();
  run->add_option("--phrases", phrases_file, "Phrase bank JSON");
  auto* run_input = run->add_option_group("input");
  run_input->add_option("--text", text_file, "Report text file");
  run_input->add_option("--corpus", corpus_file, "Corpus JSON lines");
  run_input->require_option(1);
  run->add_option("-o,--output", output, "Output file");
  auto* eval_qa = extract_cmd->add_subcommand("eval-qa", "Token F1 over {id,prediction,gold} lines");
  eval_qa->add_option("items", items_file)->required();
  eval_qa->add_option("-o,--output", output, "Output file");
  auto* eval_seq = extract_cmd->add_subcommand("eval-seq", "Entity F1 over {id,predicted,gold} lines");
  eval_seq->add_option("items", items_file)->required();
  eval_seq->add_option("-o,--output", output, "Output file");

  // fill
  auto* fill_cmd = app.add_subcommand("fill", "Template filling");
  fill_cmd->require_subcommand(1);
  auto* fill_run = fill_cmd->add_subcommand("run", "Extract and fill one report");
  fill_run->add_option("--schema", schema_file, "Fact schema JSON")->required();
  fill_run->add_option("--template", template_file, "Report template JSON")->required();
  fill_run->add_option("--text", text_file, "Report text file")->required();
  fill_run->add_option("--phrases", phrases_file, "Phrase bank JSON");
  fill_run->add_option("-o,--output", output, "Output file");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the integration server");
  server::ServerConfig config;
  std::string store_dir, registry_file;
  serve->add_option("--store", store_dir, "Schema/template store directory")->required();
  serve->add_option("--host", config.host, "Bind address");
  serve->add_option("--port", config.port, "Port");
  serve->add_option("--extractors", registry_file, "Remote extractor registry JSON");
  serve->add_option("--default-extractor", config.default_extractor, "Extractor used when none is named");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "run 'radex --help' for usage\n";
    return 2;
  }

  const auto load_schema = [&] { return schema::parse_fact_schema(read_file(schema_file)); };
  const auto load_corpus = [&] { return corpus::parse_jsonl(read_file(corpus_file)); };

  try {
    if (*validate) {
      const auto s = load_schema();
      out << "OK " << s.fact_count() << " facts / " << s.anchor_count() << " anchors / "
          << s.modifier_count() << " modifiers\n";
    } else if (*export_uima) {
      emit(out, output, schema::export_uima_type_system(load_schema()));
    } else if (*derive) {
      const auto s = load_schema();
      std::optional<schema::ModifierFilter> filter;
      if (!filter_file.empty()) {
        const auto j = nlohmann::json::parse(read_file(filter_file), nullptr, false);
        if (!j.is_object()) throw Error(ErrorCode::MalformedInput, "filter must be a JSON object", filter_file);
        filter.emplace();
        for (const auto& [fact, mods] : j.items()) {
          if (!mods.is_array()) throw Error(ErrorCode::MalformedInput, "filter values must be arrays", filter_file);
          auto& list = (*filter)[fact];
          for (const auto& m : mods) {
            if (!m.is_string()) throw Error(ErrorCode::MalformedInput, "modifier ids must be strings", filter_file);
            list.push_back(m.get<std::string>());
          }
        }
      }
      emit(out, output,
           schema::serialize_report_template(
               schema::derive_report_template(s, split_csv(facts_csv), filter, template_id)));
    } else if (*gen_config) {
      emit(out, output,
           cas::serialize_annotation_config(cas::generate_annotation_config(load_schema(), tool_id)));
    } else if (*convert) {
      const auto mapping = mapping_file.empty() ? cas::ExternalCasMapping::inception_default()
                                                : cas::parse_cas_mapping(read_file(mapping_file));
      const auto doc = cas::convert_external_cas(read_file(xmi_file), mapping, load_schema(),
                                                 doc_id.empty() ? fs::path(xmi_file).stem().string() : doc_id);
      emit(out, output, cas::serialize_radex_cas(doc));
    } else if (*iaa_report || *iaa_diff) {
      std::vector<iaa::AnnotationSet> sets;
      for (const auto& dir : set_dirs) sets.push_back(load_annotation_set(dir));
      const auto mode = iaa::parse_match_mode(mode_name);
      if (*iaa_report) {
        emit(out, output, iaa::report_to_json(iaa::aggregate_iaa(sets, mode, generated_at)));
      } else {
        emit(out, output, iaa::disagreements_to_json(iaa::disagreement_list(sets, mode)));
      }
    } else if (*fix) {
      auto c = load_corpus();
      std::size_t repaired = 0;
      for (auto& r : c) {
        auto result = corpus::fix_encoding(r.text);
        if (result.repaired) {
          ++repaired;
          r.text = std::move(result.text);
        }
      }
      emit(out, output, corpus::to_jsonl(c));
      err << "repaired " << repaired << " of " << c.size() << " reports\n";
    } else if (*dedup) {
      const auto result = corpus::deduplicate(load_corpus());
      emit(out, output, corpus::to_jsonl(result.corpus));
      for (const auto& id : result.removed_ids) err << "removed duplicate " << id << "\n";
    } else if (*sample) {
      emit(out, output, corpus::to_jsonl(corpus::stratified_sample(load_corpus(), sample_size, seed)));
    } else if (*stats) {
      emit(out, output, corpus::stats_to_json(corpus::corpus_stats(load_corpus())));
    } else if (*seal) {
      const auto sealed = corpus::seal_corpus(load_corpus(), resolve_key(key));
      const auto bytes = sealed.to_bytes();
      write_file(output, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    } else if (*open) {
      const std::string raw = read_file(corpus_file);
      const auto sealed = corpus::SealedCorpus::from_bytes(
          std::span(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));
      emit(out, output, corpus::to_jsonl(corpus::open_corpus(sealed, resolve_key(key))));
    } else if (*run) {
      const auto s = load_schema();
      const extraction::BaselineExtractor extractor(s, load_phrases(phrases_file));
      for (const auto& id : extractor.empty_lexicon()) {
        err << "warning: fact '" << id << "' has no anchor surface forms besides its label\n";
      }
      if (!text_file.empty()) {
        emit(out, output, extraction::extracted_facts_to_json(extractor.extract(read_file(text_file))) + "\n");
      } else {
        const auto c = load_corpus();
        std::vector<std::string> texts;
        for (const auto& r : c) texts.push_back(r.text);
        const auto results = extraction::extract_batch(extractor, texts);
        std::string lines;
        for (std::size_t i = 0; i < c.size(); ++i) {
          auto j = nlohmann::ordered_json::parse(extraction::extracted_facts_to_json(results[i]));
          nlohmann::ordered_json line;
          line["report_id"] = c[i].report_id;
          line["facts"] = std::move(j["facts"]);
          lines += line.dump() + "\n";
        }
        emit(out, output, lines);
      }
    } else if (*eval_qa) {
      std::vector<metrics::QaItem> items;
      for (const auto& j : read_jsonl_objects(items_file)) {
        items.push_back({j.value("id", std::to_string(items.size())), j.value("prediction", ""),
                         j.value("gold", "")});
      }
      emit(out, output, metrics::evaluation_to_json(metrics::evaluate_token_f1(items)));
    } else if (*eval_seq) {
      std::vector<metrics::SequenceItem> items;
      for (const auto& j : read_jsonl_objects(items_file)) {
        metrics::SequenceItem item;
        item.id = j.value("id", std::to_string(items.size()));
        for (const auto& e : j.value("predicted", nlohmann::json::array())) item.predicted.push_back(read_entity(e));
        for (const auto& e : j.value("gold", nlohmann::json::array())) item.gold.push_back(read_entity(e));
        items.push_back(std::move(item));
      }
      emit(out, output, metrics::evaluation_to_json(metrics::evaluate_entity_f1(items)));
    } else if (*fill_run) {
      const auto s = load_schema();
      const auto tmpl = schema::parse_report_template(read_file(template_file));
      const std::string text = read_file(text_file);
      const extraction::BaselineExtractor extractor(s, load_phrases(phrases_file));
      emit(out, output,
           filling::filled_template_to_json(
               filling::fill_template(tmpl, s, extractor.extract(text), text, server::kBaselineExtractor)));
    } else if (*serve) {
      config.store = store_dir;
      if (!registry_file.empty()) config.remotes = server::parse_extractor_registry(read_file(registry_file));
      server::IntegrationServer srv(config);
      err << "listening on " << config.host << ":" << config.port << "\n";
      if (!srv.listen()) {
        err << "error: cannot bind " << config.host << ":" << config.port << "\n";
        return 1;
      }
    }
  } catch (const Error& e) {
    err << error_code_name(e.code()) << ": " << e.what() << "\n";
    for (const auto& d : e.details()) err << "  " << d << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "MalformedInput: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace radex::cli
