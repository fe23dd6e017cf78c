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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "dhtk/space.hpp"

namespace dhtk {

using VertexSet = boost::dynamic_bitset<>;

/// How an entourage was obtained; carried for reports only.
struct Provenance {
  enum class Kind { Metric, Union, Compose, Intersection, Custom };
  Kind kind = Kind::Custom;
  Rational eps;        // Metric only.
  bool strict = false;  // Metric only.
  int power = 1;        // Compose only.

  std::string describe() const;
};

/// Symmetric reflexive relation on the vertices of one space, stored as one
/// bitset row per vertex. Rows are balls: row(x) = B(x, E).
class Entourage {
 public:
  /// Symmetrizes `rows` and sets the diagonal.
  Entourage(SpacePtr space, std::vector<VertexSet> rows, Provenance provenance = {});

  const SpacePtr& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool contains(Vertex i, Vertex j) const { return rows_[i].test(j); }
  const VertexSet& row(Vertex x) const { return rows_[x]; }
  const Provenance& provenance() const noexcept { return provenance_; }

  /// Unordered off-diagonal pairs.
  std::size_t pair_count() const;
  bool is_full() const;
  bool is_subset_of(const Entourage& other) const;
  bool same_relation(const Entourage& other) const { return rows_ == other.rows_; }

 private:
  SpacePtr space_;
  std::vector<VertexSet> rows_;
  Provenance provenance_;
};

/// Pairs with d < eps (strict) or d <= eps (closed).
Entourage metric_entourage(const SpacePtr& space, const Rational& eps, bool strict);

/// Closed metric entourage at an exact distance value given in space units.
Entourage closed_entourage_units(const SpacePtr& space, Units value);

/// Closed metric entourage at the smallest positive distance.
Entourage base_entourage(const SpacePtr& space);

Entourage identity_entourage(const SpacePtr& space);
Entourage full_entourage(const SpacePtr& space);
Entourage custom_entourage(const SpacePtr& space,
                           const std::vector<std::pair<Vertex, Vertex>>& pairs);

/// (x, z) related iff an E-chain of at most k steps joins them.
Entourage compose(const Entourage& e, int k);

/// Pointwise union; throws MixedSpaces if members are bound to different spaces.
Entourage entourage_union(const std::vector<Entourage>& members);

/// Pointwise intersection of two entourages on the same space.
Entourage intersect(const Entourage& e, const Entourage& f);

/// First distance value with a pair outside E, as units; nullopt when E is
/// the full relation (unbounded).
std::optional<Units> sigma_units(const Entourage& e);
std::optional<Rational> sigma(const Entourage& e);

VertexSet ball(const Entourage& e, Vertex x);

struct ChainedResult {
  bool chained = true;
  std::optional<std::pair<Vertex, Vertex>> witness;
  explicit operator bool() const noexcept { return chained; }
};

/// Every related pair must be joined by base-scale edges inside the
/// intersection of their balls. On failure the first violating pair
/// (lexicographic) is the witness.
ChainedResult is_chained(const Entourage& e);

/// Vertices reachable from `from` using `edges` without leaving `allowed`.
VertexSet reach_within(const Entourage& edges, Vertex from, const VertexSet& allowed);

}  // namespace dhtk
