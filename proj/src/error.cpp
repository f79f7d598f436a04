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

#include "radex/error.hpp"

namespace radex {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::SchemaInvariantViolation: return "SchemaInvariantViolation";
    case ErrorCode::UnknownFactId: return "UnknownFactId";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::MalformedXmi: return "MalformedXmi";
    case ErrorCode::UnknownType: return "UnknownType";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::OffsetOutOfBounds: return "OffsetOutOfBounds";
    case ErrorCode::UnmappedType: return "UnmappedType";
    case ErrorCode::OrphanEntity: return "OrphanEntity";
    case ErrorCode::SampleTooLarge: return "SampleTooLarge";
    case ErrorCode::AuthenticationFailure: return "AuthenticationFailure";
    case ErrorCode::MalformedContainer: return "MalformedContainer";
    case ErrorCode::TextMismatch: return "TextMismatch";
    case ErrorCode::NoSharedDocuments: return "NoSharedDocuments";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::ProtocolError: return "ProtocolError";
    case ErrorCode::InvalidSpans: return "InvalidSpans";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::UnknownLinkId: return "UnknownLinkId";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace radex
