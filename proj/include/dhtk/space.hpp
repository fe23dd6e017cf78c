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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dhtk/rational.hpp"

namespace dhtk {

using Vertex = std::uint32_t;

/// Lengths are exact multiples of the owning space's common denominator.
using Units = std::int64_t;

/// A finite metric space with an exact distance table.
///
/// Distances are stored as integer multiples of `1 / denominator()`, where the
/// denominator is the lcm of every input denominator, so all path sums stay
/// exact without rational normalisation in the inner loops. Immutable once
/// built; share it through `SpacePtr`.
class FiniteMetricSpace {
 public:
  std::size_t size() const noexcept { return n_; }
  std::int64_t denominator() const noexcept { return denominator_; }

  Units units(Vertex i, Vertex j) const { return units_[i * n_ + j]; }
  Rational distance(Vertex i, Vertex j) const { return to_rational(units(i, j)); }
  Rational to_rational(Units u) const { return make_rational(u, denominator_); }

  /// Smallest positive distance; the stand-in for "arbitrarily fine".
  Units base_units() const noexcept { return values_.empty() ? 0 : values_.front(); }
  Rational base_scale() const { return to_rational(base_units()); }
  Units diameter_units() const noexcept { return values_.empty() ? 0 : values_.back(); }
  Rational diameter() const { return to_rational(diameter_units()); }

  /// Sorted distinct positive distances.
  const std::vector<Units>& distance_values() const noexcept { return values_; }

  /// Index of units(i, j) in distance_values(), or -1 on the diagonal.
  int rank(Vertex i, Vertex j) const { return ranks_[i * n_ + j]; }

  /// Smallest integer u with u / denominator >= value (value >= 0).
  Units ceil_units(const Rational& value) const;

  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Builds from an integer table already scaled by `denominator`; validates
  /// every invariant (symmetry, zero diagonal, positivity, triangle).
  static FiniteMetricSpace from_units(std::size_t n, std::int64_t denominator,
                                      std::vector<Units> units,
                                      std::vector<std::string> labels = {});

 private:
  FiniteMetricSpace() = default;

  std::size_t n_ = 0;
  std::int64_t denominator_ = 1;
  std::vector<Units> units_;
  std::vector<int> ranks_;
  std::vector<Units> values_;
  std::vector<std::string> labels_;
};

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

struct WeightedEdge {
  Vertex i = 0;
  Vertex j = 0;
  Rational weight;
};

SpacePtr from_distance_matrix(const std::vector<std::vector<Rational>>& matrix,
                              std::vector<std::string> labels = {});

/// Shortest-path metric of a connected graph with positive weights.
SpacePtr from_weighted_graph(std::size_t n, const std::vector<WeightedEdge>& edges);

struct CircleParams {
  int n = 0;
  Rational length;
};

/// p x q grid on the flat torus. With `triangulated` every unit square gets
/// its (+1,+1) diagonal at weight max(Lx/p, Ly/q), so the finest scale
/// already fills every cell with triads.
struct TorusParams {
  int p = 0;
  int q = 0;
  Rational lx;
  Rational ly;
  bool triangulated = true;
};

/// Cycles sharing vertex 0; cycle k has nodes[k] vertices (shared one
/// included) and circumference lengths[k].
struct WedgeParams {
  std::vector<Rational> lengths;
  std::vector<int> nodes;
};

using GeneratorSpec = std::variant<CircleParams, TorusParams, WedgeParams>;

SpacePtr generate(const GeneratorSpec& spec);

struct CoveringNumber {
  std::size_t count = 0;
  bool exact = false;
};

inline constexpr std::size_t kDefaultExactCoverThreshold = 64;

/// Minimum number of open eps-balls centred at vertices covering the space.
/// Exact branch-and-bound up to `exact_threshold` vertices, greedy above it.
CoveringNumber covering_number(const FiniteMetricSpace& space, const Rational& eps,
                               std::size_t exact_threshold = kDefaultExactCoverThreshold);

}  // namespace dhtk
