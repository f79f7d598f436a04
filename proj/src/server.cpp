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

#include "radex/server.hpp"

#include <httplib.h>

#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "radex/error.hpp"
#include "radex/fhir.hpp"
#include "radex/filling.hpp"
#include "radex/unicode.hpp"

namespace radex::server {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SchemaMismatch:
    case ErrorCode::UnknownLinkId:
    case ErrorCode::UnknownFactId:
    case ErrorCode::SchemaInvariantViolation:
      return 422;
    case ErrorCode::Unreachable:
    case ErrorCode::ProtocolError:
    case ErrorCode::InvalidSpans:
      return 502;
    case ErrorCode::Io:
      return 500;
    default:
      return 400;
  }
}

Response error_response(int status, std::string_view code, const std::string& message,
                        const std::vector<std::string>& detail = {}) {
  Json j;
  j["error"]["code"] = code;
  j["error"]["message"] = message;
  if (!detail.empty()) j["error"]["detail"] = detail;
  return {status, j.dump(2) + "\n"};
}

Response error_response(const Error& e) {
  auto detail = e.details();
  if (detail.empty() && !e.path().empty()) detail.push_back(e.path());
  return error_response(status_for(e.code()), error_code_name(e.code()), e.what(), detail);
}

Response ok(std::string body) { return {200, std::move(body)}; }

nlohmann::json parse_body(std::string_view body) {
  try {
    auto j = nlohmann::json::parse(body.begin(), body.end());
    if (!j.is_object()) throw Error(ErrorCode::MalformedInput, "request body must be a JSON object");
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedInput, std::string("request body is not JSON: ") + e.what());
  }
}

std::string body_string(const nlohmann::json& body, const char* key, bool required) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) {
    if (required) throw Error(ErrorCode::MalformedInput, std::string("missing field '") + key + "'");
    return {};
  }
  if (!it->is_string()) throw Error(ErrorCode::MalformedInput, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::string require_text(const nlohmann::json& body) {
  std::string text = body_string(body, "text", true);
  if (text.empty()) throw Error(ErrorCode::MalformedInput, "text is empty");
  if (!unicode::is_valid_utf8(text)) throw Error(ErrorCode::MalformedInput, "text is not UTF-8");
  return text;
}

void require_slug(std::string_view id) {
  if (!schema::is_slug(id)) throw Error(ErrorCode::MalformedInput, "invalid id '" + std::string(id) + "'");
}

std::string violations_message(const std::vector<schema::Violation>& violations,
                               std::vector<std::string>& details) {
  for (const auto& v : violations) details.push_back(schema::to_string(v));
  return details.front();
}

}  // namespace

std::vector<extraction::ExtractorDescriptor> parse_extractor_registry(std::string_view json_bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_bytes.begin(), json_bytes.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedInput, std::string("extractor registry is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("extractors") || !j["extractors"].is_array()) {
    throw Error(ErrorCode::MalformedInput, "extractor registry lacks an 'extractors' array");
  }
  std::vector<extraction::ExtractorDescriptor> out;
  for (const auto& e : j["extractors"]) {
    if (!e.is_object() || !e.contains("name") || !e["name"].is_string() || !e.contains("endpoint") ||
        !e["endpoint"].is_string() || e["endpoint"].get<std::string>().empty()) {
      throw Error(ErrorCode::MalformedInput, "extractor entries need a name and an endpoint");
    }
    extraction::ExtractorDescriptor d;
    d.name = e["name"].get<std::string>();
    d.kind = extraction::ExtractorKind::Remote;
    d.endpoint = e["endpoint"].get<std::string>();
    out.push_back(std::move(d));
  }
  return out;
}

// --- store ---------------------------------------------------------------------------

SchemaStore::SchemaStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  for (const char* sub : {"schemas", "templates", "phrases"}) fs::create_directories(root_ / sub, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create store at " + root_.string() + ": " + ec.message());
}

std::optional<std::string> SchemaStore::read(const fs::path& rel) const {
  std::shared_lock lock(mutex_);
  std::ifstream in(root_ / rel, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void SchemaStore::write(const fs::path& rel, const std::string& bytes) {
  std::unique_lock lock(mutex_);
  const fs::path target = root_ / rel;
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << bytes;
    if (!out.flush()) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot replace " + target.string() + ": " + ec.message());
}

std::vector<schema::FactSchema> SchemaStore::schemas() const {
  std::vector<std::string> ids;
  {
    std::shared_lock lock(mutex_);
    for (const auto& e : fs::directory_iterator(root_ / "schemas")) {
      if (e.path().extension() == ".json") ids.push_back(e.path().stem().string());
    }
  }
  std::sort(ids.begin(), ids.end());
  std::vector<schema::FactSchema> out;
  for (const auto& id : ids) {
    if (auto s = schema(id)) out.push_back(std::move(*s));
  }
  return out;
}

std::optional<schema::FactSchema> SchemaStore::schema(std::string_view id) const {
  if (!schema::is_slug(id)) return std::nullopt;
  auto bytes = read(fs::path("schemas") / (std::string(id) + ".json"));
  if (!bytes) return std::nullopt;
  return schema::parse_fact_schema(*bytes);
}

void SchemaStore::put_schema(const schema::FactSchema& s) {
  if (auto violations = schema::validate_schema(s); !violations.empty()) {
    std::vector<std::string> details;
    const std::string first = violations_message(violations, details);
    throw Error(ErrorCode::SchemaInvariantViolation, first, violations.front().path, details);
  }
  write(fs::path("schemas") / (s.schema_id + ".json"), schema::serialize_fact_schema(s));
}

std::optional<schema::ReportTemplate> SchemaStore::report_template(std::string_view id) const {
  if (!schema::is_slug(id)) return std::nullopt;
  auto bytes = read(fs::path("templates") / (std::string(id) + ".json"));
  if (!bytes) return std::nullopt;
  return schema::parse_report_template(*bytes);
}

void SchemaStore::put_template(const schema::ReportTemplate& tmpl) {
  const auto s = schema(tmpl.schema_id);
  if (!s || s->version != tmpl.schema_version) {
    throw Error(ErrorCode::SchemaMismatch, "template targets schema " + tmpl.schema_id + "@" +
                                               tmpl.schema_version + ", which is not stored");
  }
  if (auto violations = schema::validate_template(tmpl, *s); !violations.empty()) {
    std::vector<std::string> details;
    const std::string first = violations_message(violations, details);
    throw Error(ErrorCode::SchemaInvariantViolation, first, violations.front().path, details);
  }
  write(fs::path("templates") / (tmpl.template_id + ".json"), schema::serialize_report_template(tmpl));
}

extraction::PhraseBank SchemaStore::phrases(std::string_view schema_id) const {
  if (!schema::is_slug(schema_id)) return {};
  auto bytes = read(fs::path("phrases") / (std::string(schema_id) + ".json"));
  if (!bytes) return {};
  return extraction::parse_phrase_bank(*bytes);
}

// --- server ----------------------------------------------------------------------------

struct IntegrationServer::Http {
  httplib::Server server;
  std::thread thread;
};

IntegrationServer::IntegrationServer(ServerConfig config)
    : config_(std::move(config)), store_(config_.store) {
  baseline_.name = kBaselineExtractor;
  baseline_.kind = extraction::ExtractorKind::Baseline;
  if (!find_extractor(config_.default_extractor)) {
    throw Error(ErrorCode::MalformedInput,
                "default extractor '" + config_.default_extractor + "' is not configured");
  }
}

IntegrationServer::~IntegrationServer() { stop(); }

const extraction::ExtractorDescriptor* IntegrationServer::find_extractor(const std::string& name) const {
  if (name == baseline_.name) return &baseline_;
  for (const auto& d : config_.remotes) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

std::vector<extraction::ExtractedFact> IntegrationServer::run_extractor(
    const extraction::ExtractorDescriptor& d, const schema::FactSchema& schema,
    std::string_view text) const {
  if (d.kind == extraction::ExtractorKind::Remote) {
    return extraction::remote_extract(d, schema, text, config_.remote_options);
  }
  return extraction::BaselineExtractor(schema, store_.phrases(schema.schema_id)).extract(text);
}

Response IntegrationServer::fill(std::string_view body) const {
  try {
    const auto request = parse_body(body);
    if (!request.contains("questionnaire") || !request["questionnaire"].is_object()) {
      throw Error(ErrorCode::MalformedInput, "missing Questionnaire resource");
    }
    const fhir::Json questionnaire = request["questionnaire"];
    const std::string text = require_text(request);
    std::string name = body_string(request, "extractor", false);
    if (name.empty()) name = config_.default_extractor;

    const auto ref = fhir::questionnaire_schema_ref(questionnaire);
    const auto s = store_.schema(ref.id);
    if (!s) throw Error(ErrorCode::SchemaMismatch, "unknown schema '" + ref.id + "'");
    const auto tmpl = fhir::questionnaire_to_template(questionnaire, *s);
    const auto* extractor = find_extractor(name);
    if (!extractor) return error_response(404, "UnknownExtractor", "unknown extractor '" + name + "'");
    const auto extracted = run_extractor(*extractor, *s, text);
    const auto filled = filling::fill_template(tmpl, *s, extracted, text, extractor->name);
    return ok(fhir::filled_to_response(filled, questionnaire).dump(2) + "\n");
  } catch (const Error& e) {
    return error_response(e);
  }
}

Response IntegrationServer::preview(std::string_view body) const {
  try {
    const auto request = parse_body(body);
    const std::string schema_id = body_string(request, "schema_id", true);
    if (!request.contains("fact_ids") || !request["fact_ids"].is_array()) {
      throw Error(ErrorCode::MalformedInput, "missing fact_ids array");
    }
    std::vector<std::string> fact_ids;
    for (const auto& f : request["fact_ids"]) {
      if (!f.is_string()) throw Error(ErrorCode::MalformedInput, "fact_ids must be strings");
      fact_ids.push_back(f.get<std::string>());
    }
    const std::string text = require_text(request);
    std::string name = body_string(request, "extractor", false);
    if (name.empty()) name = config_.default_extractor;

    const auto s = store_.schema(schema_id);
    if (!s) throw Error(ErrorCode::SchemaMismatch, "unknown schema '" + schema_id + "'");
    const auto tmpl = schema::derive_report_template(*s, fact_ids);
    const auto* extractor = find_extractor(name);
    if (!extractor) return error_response(404, "UnknownExtractor", "unknown extractor '" + name + "'");
    const auto extracted = run_extractor(*extractor, *s, text);
    return ok(filling::filled_template_to_json(
        filling::fill_template(tmpl, *s, extracted, text, extractor->name)));
  } catch (const Error& e) {
    return error_response(e);
  }
}

Response IntegrationServer::list_schemas() const {
  try {
    Json j;
    j["schemas"] = Json::array();
    for (const auto& s : store_.schemas()) {
      Json e;
      e["schema_id"] = s.schema_id;
      e["version"] = s.version;
      e["language"] = s.language;
      e["facts"] = s.fact_count();
      e["modifiers"] = s.modifier_count();
      j["schemas"].push_back(std::move(e));
    }
    return ok(j.dump(2) + "\n");
  } catch (const Error& e) {
    return error_response(e);
  }
}

Response IntegrationServer::get_schema(std::string_view id) const {
  try {
    require_slug(id);
    const auto s = store_.schema(id);
    if (!s) return error_response(404, "NotFound", "no schema '" + std::string(id) + "'");
    return ok(schema::serialize_fact_schema(*s));
  } catch (const Error& e) {
    return error_response(e);
  }
}

Response IntegrationServer::put_schema(std::string_view id, std::string_view body) {
  try {
    require_slug(id);
    const auto s = schema::parse_fact_schema(body);
    if (s.schema_id != id) {
      throw Error(ErrorCode::MalformedInput,
                  "schema_id '" + s.schema_id + "' does not match path id '" + std::string(id) + "'");
    }
    store_.put_schema(s);
    return ok(schema::serialize_fact_schema(s));
  } catch (const Error& e) {
    return error_response(e);
  }
}

Response IntegrationServer::get_template(std::string_view id) const {
  try {
    require_slug(id);
    const auto t = store_.report_template(id);
    if (!t) return error_response(404, "NotFound", "no template '" + std::string(id) + "'");
    return ok(schema::serialize_report_template(*t));
  } catch (const Error& e) {
    return error_response(e);
  }
}

Response IntegrationServer::put_template(std::string_view id, std::string_view body) {
  try {
    require_slug(id);
    const auto t = schema::parse_report_template(body);
    if (t.template_id != id) {
      throw Error(ErrorCode::MalformedInput, "template_id '" + t.template_id +
                                                 "' does not match path id '" + std::string(id) + "'");
    }
    store_.put_template(t);
    return ok(schema::serialize_report_template(t));
  } catch (const Error& e) {
    return error_response(e);
  }
}

Response IntegrationServer::list_extractors() const {
  Json j;
  j["default"] = config_.default_extractor;
  j["extractors"] = Json::array();
  j["extractors"].push_back({{"name", baseline_.name}, {"kind", "baseline"}});
  for (const auto& d : config_.remotes) {
    j["extractors"].push_back({{"name", d.name}, {"kind", "remote"}, {"endpoint", d.endpoint}});
  }
  return ok(j.dump(2) + "\n");
}

Response IntegrationServer::handle(std::string_view method, std::string_view path,
                                   std::string_view body) {
  const auto rest_of = [&](std::string_view prefix) -> std::optional<std::string_view> {
    if (path.substr(0, prefix.size()) != prefix) return std::nullopt;
    auto id = path.substr(prefix.size());
    if (id.empty() || id.find('/') != std::string_view::npos) return std::nullopt;
    return id;
  };
  if (path == "/v1/fill" && method == "POST") return fill(body);
  if (path == "/v1/preview" && method == "POST") return preview(body);
  if (path == "/v1/schemas" && method == "GET") return list_schemas();
  if (path == "/v1/extractors" && method == "GET") return list_extractors();
  if (auto id = rest_of("/v1/schemas/")) {
    if (method == "GET") return get_schema(*id);
    if (method == "PUT") return put_schema(*id, body);
    return error_response(405, "MethodNotAllowed", std::string(method) + " not allowed");
  }
  if (auto id = rest_of("/v1/templates/")) {
    if (method == "GET") return get_template(*id);
    if (method == "PUT") return put_template(*id, body);
    return error_response(405, "MethodNotAllowed", std::string(method) + " not allowed");
  }
  return error_response(404, "NotFound", "no route for " + std::string(method) + " " + std::string(path));
}

namespace {

void install_routes(httplib::Server& server, IntegrationServer& self) {
  const auto route = [&self](const httplib::Request& req, httplib::Response& res) {
    const Response r = self.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server.Get(".*", route);
  server.Put(".*", route);
  server.Post(".*", route);
  server.Delete(".*", route);
}

}  // namespace

bool IntegrationServer::listen() {
  if (!http_) http_ = std::make_unique<Http>();
  install_routes(http_->server, *this);
  return http_->server.listen(config_.host, config_.port);
}

int IntegrationServer::start_background() {
  if (!http_) http_ = std::make_unique<Http>();
  install_routes(http_->server, *this);
  const int port = http_->server.bind_to_any_port(config_.host);
  if (port < 0) throw Error(ErrorCode::Io, "cannot bind " + config_.host);
  http_->thread = std::thread([this] { http_->server.listen_after_bind(); });
  http_->server.wait_until_ready();
  return port;
}

void IntegrationServer::stop() {
  if (!http_) return;
  http_->server.stop();
  if (http_->thread.joinable()) http_->thread.join();
}

}  // namespace radex::server
