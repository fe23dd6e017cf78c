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
#include <memory>
#include <optional>
#include <vector>

#include "dhtk/complex.hpp"

namespace dhtk {

using LiftId = std::size_t;

/// One point of the cover: a homotopy class of chains from the basepoint.
struct LiftedPoint {
  Vertex base = 0;
  std::optional<GroupKey> key;        // set when the deck group has a faithful key
  std::vector<Vertex> representative;  // a chain from the basepoint in this class
  Units distance = 0;                  // lifted distance from the basepoint lift
  std::size_t layer = 0;               // BFS layer in the lifted graph
};

struct LiftedEdge {
  LiftId from = 0;
  LiftId to = 0;
  Units length = 0;
};

/// Radius-bounded ball of the entourage cover around the basepoint lift.
class CoverBall {
 public:
  const GroupPresentation& presentation() const noexcept { return *pres_; }
  const SpacePtr& space() const noexcept { return pres_->space(); }
  Units radius_units() const noexcept { return radius_; }
  Rational radius() const { return space()->to_rational(radius_); }

  const std::vector<LiftedPoint>& points() const noexcept { return points_; }
  const std::vector<LiftedEdge>& edges() const noexcept { return edges_; }
  LiftId basepoint_lift() const noexcept { return 0; }

  /// Lifted neighbour of `from` over base vertex `to`, if inside the ball.
  std::optional<LiftId> neighbour(LiftId from, Vertex to) const;
  const std::vector<std::pair<Vertex, LiftId>>& neighbours(LiftId id) const { return adjacency_[id]; }

  std::vector<LiftId> fiber(Vertex v) const;
  /// Lift with the given key over v, when keys are in use.
  std::optional<LiftId> find(Vertex v, const GroupKey& key) const;
  bool keyed() const noexcept { return keyed_; }

 private:
  friend CoverBall build_cover_ball(const EntouragePtr& e, const Rational& radius,
                                    std::size_t budget);
  std::shared_ptr<const GroupPresentation> pres_;
  Units radius_ = 0;
  bool keyed_ = false;
  std::vector<LiftedPoint> points_;
  std::vector<LiftedEdge> edges_;
  std::vector<std::vector<std::pair<Vertex, LiftId>>> adjacency_;  // sorted by vertex
};

/// Explores (vertex, class) states by lifted distance up to `radius`.
/// Classes use the group's faithful key when it has one; otherwise states
/// merge only on a Null verdict and an Unknown verdict raises UndecidedMerge.
CoverBall build_cover_ball(const EntouragePtr& e, const Rational& radius,
                           std::size_t budget = kDefaultSearchBudget);

/// The unique lift starting at `start`. Throws BasepointMismatch when start
/// does not project to the chain's first point, RadiusExceeded on leaving
/// the ball.
std::vector<LiftId> lift_chain(const CoverBall& cb, const Chain& chain, LiftId start);

struct LiftedDistance {
  Units units = 0;
  Rational value;
  /// False when a shorter path might leave the ball; value is then an
  /// upper bound.
  bool exact = true;
};

LiftedDistance lifted_distance(const CoverBall& cb, LiftId u, LiftId v);

enum class Equivalence { Equivalent, Inequivalent, Unknown };
const char* to_string(Equivalence e);

/// Compares the kernels of the maps from the intersection's deck group to
/// the two deck groups: each side's refined triads must be null in the
/// other entourage.
Equivalence covers_equivalent(const EntouragePtr& e, const EntouragePtr& f,
                              std::size_t budget = kDefaultSearchBudget);

}  // namespace dhtk
