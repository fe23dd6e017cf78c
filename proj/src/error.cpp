// Copyright 2026 The dhtk Authors
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

#include "dhtk/error.hpp"

namespace dhtk {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::AsymmetricMatrix: return "AsymmetricMatrix";
    case ErrorKind::TriangleViolation: return "TriangleViolation";
    case ErrorKind::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorKind::NonpositiveDistance: return "NonpositiveDistance";
    case ErrorKind::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorKind::NonpositiveWeight: return "NonpositiveWeight";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::NonpositiveEps: return "NonpositiveEps";
    case ErrorKind::MixedSpaces: return "MixedSpaces";
    case ErrorKind::BadVertex: return "BadVertex";
    case ErrorKind::StepNotInEntourage: return "StepNotInEntourage";
    case ErrorKind::IllegalMove: return "IllegalMove";
    case ErrorKind::EndpointRemoval: return "EndpointRemoval";
    case ErrorKind::EntourageTooSmall: return "EntourageTooSmall";
    case ErrorKind::NotChained: return "NotChained";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::EndpointMismatch: return "EndpointMismatch";
    case ErrorKind::NotConnected: return "NotConnected";
    case ErrorKind::NotALoop: return "NotALoop";
    case ErrorKind::UndecidedMerge: return "UndecidedMerge";
    case ErrorKind::RadiusExceeded: return "RadiusExceeded";
    case ErrorKind::BasepointMismatch: return "BasepointMismatch";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::UndecidedEquivalence: return "UndecidedEquivalence";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

}  // namespace dhtk
