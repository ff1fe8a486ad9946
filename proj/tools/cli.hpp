// Copyright 2026 The smattr Authors.
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

#ifndef SMATTR_TOOLS_CLI_HPP_
#define SMATTR_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace smattr::cli {

enum ExitCode : int {
  kOk = 0,
  kBadInput = 1,
  kIoFailure = 2,
  kOracleFailure = 3,
  kSelftestFailure = 4,
};

// args excludes the program name. Results go to `out`, progress and
// diagnostics to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace smattr::cli

#endif  // SMATTR_TOOLS_CLI_HPP_
