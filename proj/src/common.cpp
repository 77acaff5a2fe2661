// Copyright 2026 The land-sim Authors
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

#include "landsim/common.hpp"

namespace landsim {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kEmptyInput: return "EmptyInput";
    case ErrorKind::kInsufficientMatches: return "InsufficientMatches";
    case ErrorKind::kDegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorKind::kNoConsensus: return "NoConsensus";
    case ErrorKind::kProjectiveDegeneracy: return "ProjectiveDegeneracy";
    case ErrorKind::kDegenerateQuad: return "DegenerateQuad";
    case ErrorKind::kNonPositiveDt: return "NonPositiveDt";
    case ErrorKind::kSingularInnovation: return "SingularInnovation";
    case ErrorKind::kEmptyLog: return "EmptyLog";
    case ErrorKind::kIoFailure: return "IoFailure";
    case ErrorKind::kConfigError: return "ConfigError";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace landsim
