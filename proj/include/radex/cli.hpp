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

#ifndef RADEX_CLI_HPP_
#define RADEX_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace radex::cli {

// `args` excludes the program name. Returns 0 on success, 1 on data or
// validation failures (diagnostics on `err`), 2 on usage errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace radex::cli

#endif  // RADEX_CLI_HPP_
