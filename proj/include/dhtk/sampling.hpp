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
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dhtk/chains.hpp"

namespace dhtk {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 20260101;

/// Uniform index in [0, n); n > 0.
std::size_t pick(Rng& rng, std::size_t n);

struct NamedSpace {
  std::string name;
  SpacePtr space;
};

/// Small circles, tori and wedges plus a few random graphs, all under 40
/// vertices so exhaustive checks stay cheap.
std::vector<NamedSpace> sample_spaces(Rng& rng);

/// Connected random graph: a unit-weight spanning path plus chords of
/// weight 1, 3/2 or 2. The unit path keeps the base entourage connected.
SpacePtr random_graph_space(Rng& rng, std::size_t n, std::size_t extra_edges);

/// Closed or strict metric entourage at a random realized distance, never
/// finer than the base entourage.
Entourage random_metric_entourage(const SpacePtr& space, Rng& rng);

/// Base entourage plus cliques on `cliques` random base-connected vertex
/// sets of at most `max_size` points; chained by construction.
Entourage random_chained_entourage(const SpacePtr& space, Rng& rng, std::size_t cliques,
                                   std::size_t max_size);

/// Random walk of exactly `steps` steps along non-diagonal pairs of `e`.
std::vector<Vertex> random_walk(const Entourage& e, Vertex start, std::size_t steps, Rng& rng);

/// Random walk closed up by a shortest base-pair path back to its start.
std::vector<Vertex> random_loop(const Entourage& e, std::size_t steps, Rng& rng);

/// Shortest path in hops along pairs of `e` (inclusive of both ends).
std::vector<Vertex> hop_path(const Entourage& e, Vertex from, Vertex to);

struct SelfTestLine {
  std::string name;
  std::size_t samples = 0;   // evaluated draws
  std::size_t failures = 0;
  std::size_t skipped = 0;   // draws outside the property's preconditions
};

/// Names accepted by run_property, in self-test order.
std::vector<std::string> property_names();

/// Evaluates one named property on `samples` draws, cycling through
/// `spaces`. Draws outside its preconditions are skipped and redrawn; a
/// domain error inside a draw counts as a failure.
SelfTestLine run_property(std::string_view name, const std::vector<NamedSpace>& spaces, Rng& rng,
                          std::size_t samples);

/// Seeded property checks over the sample spaces; `samples` per property.
std::vector<SelfTestLine> run_selftest(std::uint64_t seed, std::size_t samples);

}  // namespace dhtk
