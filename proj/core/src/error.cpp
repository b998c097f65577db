// Copyright 2026 The btfuzz Authors.
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

#include "btfuzz/error.hpp"

namespace btfuzz {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDegeneratePath: return "DegeneratePath";
    case ErrorCode::kPointOffPath: return "PointOffPath";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kNonpositiveDuration: return "NonpositiveDuration";
    case ErrorCode::kTooFewStates: return "TooFewStates";
    case ErrorCode::kEmptyOverlap: return "EmptyOverlap";
    case ErrorCode::kUnknownProperty: return "UnknownProperty";
    case ErrorCode::kEmptyDistribution: return "EmptyDistribution";
    case ErrorCode::kDanglingReference: return "DanglingReference";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kUnresolvedTarget: return "UnresolvedTarget";
    case ErrorCode::kScenarioUnboundVariables: return "ScenarioUnboundVariables";
    case ErrorCode::kUnknownParticipant: return "UnknownParticipant";
    case ErrorCode::kNotEgoCollision: return "NotEgoCollision";
    case ErrorCode::kEmptyPopulation: return "EmptyPopulation";
    case ErrorCode::kTooFewPoints: return "TooFewPoints";
    case ErrorCode::kDegenerateSurrogate: return "DegenerateSurrogate";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace btfuzz
