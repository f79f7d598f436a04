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

#ifndef RADEX_SERVER_HPP_
#define RADEX_SERVER_HPP_

#include <filesystem>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "radex/extraction.hpp"
#include "radex/schema.hpp"

// HTTP front end: template filling for report texts arriving with a FHIR
// Questionnaire, plus schema/template storage for the schema editor.
namespace radex::server {

inline constexpr const char* kBaselineExtractor = "baseline";

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path store;
  std::string default_extractor = kBaselineExtractor;
  std::vector<extraction::ExtractorDescriptor> remotes;
  extraction::RemoteOptions remote_options;
};

// Parses {"extractors":[{"name","endpoint"}]}.
std::vector<extraction::ExtractorDescriptor> parse_extractor_registry(std::string_view json_bytes);

// Directory of canonical JSON files:
//   schemas/<id>.json, templates/<id>.json, phrases/<schema id>.json
// Reads see one complete file; writes are serialized and land by rename.
class SchemaStore {
 public:
  explicit SchemaStore(std::filesystem::path root);

  std::vector<schema::FactSchema> schemas() const;
  std::optional<schema::FactSchema> schema(std::string_view id) const;
  // Throws SchemaInvariantViolation for invalid content.
  void put_schema(const schema::FactSchema& schema);

  std::optional<schema::ReportTemplate> report_template(std::string_view id) const;
  // Throws SchemaMismatch when the target schema is missing or differs,
  // SchemaInvariantViolation when the template does not fit it.
  void put_template(const schema::ReportTemplate& tmpl);

  extraction::PhraseBank phrases(std::string_view schema_id) const;

 private:
  std::optional<std::string> read(const std::filesystem::path& rel) const;
  void write(const std::filesystem::path& rel, const std::string& bytes);

  std::filesystem::path root_;
  mutable std::shared_mutex mutex_;
};

struct Response {
  int status = 200;
  std::string body;
};

class IntegrationServer {
 public:
  // Throws MalformedInput when the default extractor is not resolvable.
  explicit IntegrationServer(ServerConfig config);
  ~IntegrationServer();

  Response fill(std::string_view body) const;
  Response preview(std::string_view body) const;
  Response list_schemas() const;
  Response get_schema(std::string_view id) const;
  Response put_schema(std::string_view id, std::string_view body);
  Response get_template(std::string_view id) const;
  Response put_template(std::string_view id, std::string_view body);
  Response list_extractors() const;

  // Routes a request to the handlers above.
  Response handle(std::string_view method, std::string_view path, std::string_view body);

  // Blocking. Returns false when the socket cannot be bound.
  bool listen();
  // Binds an ephemeral port on config.host and serves on a background
  // thread; returns the port.
  int start_background();
  void stop();

 private:
  struct Http;

  const extraction::ExtractorDescriptor* find_extractor(const std::string& name) const;
  std::vector<extraction::ExtractedFact> run_extractor(const extraction::ExtractorDescriptor& d,
                                                       const schema::FactSchema& schema,
                                                       std::string_view text) const;

  ServerConfig config_;
  SchemaStore store_;
  extraction::ExtractorDescriptor baseline_;
  std::unique_ptr<Http> http_;
};

}  // namespace radex::server

#endif  // RADEX_SERVER_HPP_
