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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dhtk/complex.hpp"
#include "dhtk/sampling.hpp"

namespace dhtk {

enum class Command { Validate, Generate, Spectrum, Cover, Nullity, Equivalent, Bound, SelfTest, Check };

/// One fully parsed invocation. Exactly one input source is set for
/// commands that need a space.
struct CommandSpec {
  Command command = Command::Validate;

  std::optional<std::string> generate;  // KIND:params or a generator JSON file
  std::optional<std::string> matrix;    // CSV path
  std::optional<std::string> graph;     // graph JSON path

  std::string kind = "hcs";  // spectrum kind: hcs, cs, ecs, nc, es, mls
  std::optional<std::string> eps;
  std::optional<std::string> eps2;
  bool open = false;  // metric entourages from --eps use d < eps
  std::optional<std::string> entourage;
  std::optional<std::string> entourage2;
  std::optional<std::string> chain;
  std::optional<std::string> radius;
  std::optional<std::string> length_bound;
  std::size_t budget = kDefaultSearchBudget;
  std::optional<std::string> family;

  bool strict = false;
  std::string format = "json";  // json or table
  std::optional<std::string> out;
  std::optional<std::string> certificates;  // directory
  std::optional<std::string> plot;          // step-plot data file
  std::optional<std::string> check_certificate;
  std::uint64_t seed = kDefaultSeed;
  std::size_t samples = 200;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUndecided = 2;

/// Dispatches one command. Primary output goes to `out` (or --out),
/// diagnostics to `err`; returns the process exit status.
int run(const CommandSpec& spec, std::ostream& out, std::ostream& err);

/// Parses argv (without the program name); usage errors return nullopt
/// after printing to `err`, --help prints to `out` and also returns nullopt
/// with `exit_code` set.
std::optional<CommandSpec> parse_command_line(const std::vector<std::string>& args, std::ostream& out,
                                              std::ostream& err, int& exit_code);

/// parse_command_line followed by run.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dhtk
