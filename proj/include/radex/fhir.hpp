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

#ifndef RADEX_FHIR_HPP_
#define RADEX_FHIR_HPP_

#include <string>

#include <json.hpp>

#include "radex/cas.hpp"
#include "radex/filling.hpp"
#include "radex/schema.hpp"

// Report templates as FHIR Questionnaire resources and filled templates as
// QuestionnaireResponse resources. Structural profile only: resource shape,
// linkId scheme and answer types.
//
// linkIds: one group per fact ("<fact>"), children "<fact>.presence"
// (boolean), "<fact>.anchor" (string) and "<fact>.<modifier>" (choice,
// quantity or string by standardizer).
namespace radex::fhir {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaIdExtension =
    "http://radex.org/fhir/StructureDefinition/schema-id";
inline constexpr const char* kSchemaVersionExtension =
    "http://radex.org/fhir/StructureDefinition/schema-version";
inline constexpr const char* kNegatedExtension =
    "http://radex.org/fhir/StructureDefinition/negated";
inline constexpr const char* kMappingOutcomeExtension =
    "http://radex.org/fhir/StructureDefinition/mapping-outcome";
inline constexpr const char* kUnitExtension =
    "http://hl7.org/fhir/StructureDefinition/questionnaire-unit";
inline constexpr const char* kUcumSystem = "http://unitsofmeasure.org";

// Throws SchemaMismatch when the template does not target `schema`.
Json template_to_questionnaire(const schema::ReportTemplate& tmpl,
                               const schema::FactSchema& schema);

// Schema reference carried by a Questionnaire. Throws MalformedInput when
// the resource is not a Questionnaire or lacks the reference.
cas::SchemaRef questionnaire_schema_ref(const Json& questionnaire);

// Throws MalformedInput, SchemaMismatch or UnknownLinkId.
schema::ReportTemplate questionnaire_to_template(const Json& questionnaire,
                                                 const schema::FactSchema& schema);

// Answers only linkIds present in `questionnaire`. Absent facts carry a
// single presence=false answer.
Json filled_to_response(const filling::FilledTemplate& filled, const Json& questionnaire);

}  // namespace radex::fhir

#endif  // RADEX_FHIR_HPP_
