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

#ifndef RADEX_ERROR_HPP_
#define RADEX_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace radex {

enum class ErrorCode {
  MalformedInput,
  SchemaInvariantViolation,
  UnknownFactId,
  EmptySelection,
  MalformedXmi,
  UnknownType,
  UnknownLabel,
  OffsetOutOfBounds,
  UnmappedType,
  OrphanEntity,
  SampleTooLarge,
  AuthenticationFailure,
  MalformedContainer,
  TextMismatch,
  NoSharedDocuments,
  Unreachable,
  ProtocolError,
  InvalidSpans,
  SchemaMismatch,
  UnknownLinkId,
  Io,
};

std::string_view error_code_name(ErrorCode code);

// Every failure raised by the library. `path` locates the offending element
// where one exists; `details` lists individual offending entries (spans,
// violations) for errors that aggregate several of them.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string path = {},
        std::vector<std::string> details = {})
      : std::runtime_error(message),
        code_(code),
        path_(std::move(path)),
        details_(std::move(details)) {}

  ErrorCode code() const { return code_; }
  const std::string& path() const { return path_; }
  const std::vector<std::string>& details() const { return details_; }

 private:
  ErrorCode code_;
  std::string path_;
  std::vector<std::string> details_;
};

}  // namespace radex

#endif  // RADEX_ERROR_HPP_
