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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dhtk {

enum class ErrorKind {
  AsymmetricMatrix,
  TriangleViolation,
  NonzeroDiagonal,
  NonpositiveDistance,
  DisconnectedGraph,
  NonpositiveWeight,
  BadParams,
  NonpositiveEps,
  MixedSpaces,
  BadVertex,
  StepNotInEntourage,
  IllegalMove,
  EndpointRemoval,
  EntourageTooSmall,
  NotChained,
  PreconditionViolated,
  EndpointMismatch,
  NotConnected,
  NotALoop,
  UndecidedMerge,
  RadiusExceeded,
  BasepointMismatch,
  BudgetExhausted,
  UndecidedEquivalence,
  ParseError,
  Unsupported,
};

std::string_view to_string(ErrorKind kind);

/// Domain error raised by every module. `index()` carries the offending
/// position (chain step, matrix row, vertex) when one exists, else -1.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, long index = -1)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        index_(index) {}

  ErrorKind kind() const noexcept { return kind_; }
  long index() const noexcept { return index_; }

 private:
  ErrorKind kind_;
  long index_;
};

}  // namespace dhtk
