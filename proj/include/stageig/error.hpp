// Copyright 2026 The stageig Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stageig {

enum class ErrorCode {
  EmptyEdgeList,
  IndexOutOfRange,
  DisconnectedGraph,
  NotAPartition,
  PolygonNotClique,
  EdgeUncovered,
  ZeroAmplitude,
  NotNormalized,
  ThetaOutOfRange,
  NoConnectingPath,
  NotReversible,
  NotNonreversible,
  ClosureInconsistent,
  DegenerateBalance,
  DegenerateLift,
  BasisIncomplete,
  NotUnitary,
  FormulaOutOfRange,
  SingularMomentum,
  PatchTooSmall,
  SchemaError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyEdgeList: return "EmptyEdgeList";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::NotAPartition: return "NotAPartition";
    case ErrorCode::PolygonNotClique: return "PolygonNotClique";
    case ErrorCode::EdgeUncovered: return "EdgeUncovered";
    case ErrorCode::ZeroAmplitude: return "ZeroAmplitude";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::ThetaOutOfRange: return "ThetaOutOfRange";
    case ErrorCode::NoConnectingPath: return "NoConnectingPath";
    case ErrorCode::NotReversible: return "NotReversible";
    case ErrorCode::NotNonreversible: return "NotNonreversible";
    case ErrorCode::ClosureInconsistent: return "ClosureInconsistent";
    case ErrorCode::DegenerateBalance: return "DegenerateBalance";
    case ErrorCode::DegenerateLift: return "DegenerateLift";
    case ErrorCode::BasisIncomplete: return "BasisIncomplete";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::FormulaOutOfRange: return "FormulaOutOfRange";
    case ErrorCode::SingularMomentum: return "SingularMomentum";
    case ErrorCode::PatchTooSmall: return "PatchTooSmall";
    case ErrorCode::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

/// Every failure raised by the library. `code()` identifies the condition,
/// `what()` carries a human-readable message naming the offending item.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace stageig
