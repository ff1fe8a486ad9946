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

#include "smattr/error.hpp"

namespace smattr {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidGeometry:
      return "invalid-geometry";
    case ErrorKind::kInvalidConfig:
      return "invalid-config";
    case ErrorKind::kInvalidArgument:
      return "invalid-argument";
    case ErrorKind::kOracleInput:
      return "oracle-input";
    case ErrorKind::kOracleIo:
      return "oracle-io";
    case ErrorKind::kIo:
      return "io";
    case ErrorKind::kFormat:
      return "format";
  }
  return "unknown";
}

}  // namespace smattr
