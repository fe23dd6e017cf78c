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

#include "dhtk/entourage.hpp"

namespace dhtk {

using EntouragePtr = std::shared_ptr<const Entourage>;

inline EntouragePtr share(Entourage e) { return std::make_shared<const Entourage>(std::move(e)); }

/// Insert(pos, v) puts v at index pos, between the old points pos-1 and pos.
/// Remove(pos) deletes the point at index pos. Endpoints are never touched.
struct Move {
  enum class Op { Insert, Remove };
  Op op = Op::Remove;
  std::size_t pos = 0;
  Vertex vertex = 0;

  static Move insert(std::size_t pos, Vertex v) { return {Op::Insert, pos, v}; }
  static Move remove(std::size_t pos) { return {Op::Remove, pos, 0}; }
  bool operator==(const Move&) const = default;
};

/// Nonempty vertex sequence whose consecutive pairs lie in the entourage.
class Chain {
 public:
  const std::vector<Vertex>& points() const noexcept { return points_; }
  const EntouragePtr& entourage() const noexcept { return entourage_; }
  const Entourage& relation() const noexcept { return *entourage_; }

  std::size_t steps() const noexcept { return points_.size() - 1; }
  Units length_units() const;
  Rational length() const;
  Vertex front() const { return points_.front(); }
  Vertex back() const { return points_.back(); }
  bool is_loop() const { return points_.front() == points_.back(); }
  /// Every point equal; the null representative of a loop.
  bool is_constant() const;

  bool operator==(const Chain& other) const { return points_ == other.points_; }

 private:
  friend Chain validate_chain(EntouragePtr e, std::vector<Vertex> points);
  Chain(EntouragePtr e, std::vector<Vertex> points)
      : entourage_(std::move(e)), points_(std::move(points)) {}

  EntouragePtr entourage_;
  std::vector<Vertex> points_;
};

/// Throws StepNotInEntourage with the index of the first bad step.
Chain validate_chain(EntouragePtr e, std::vector<Vertex> points);

/// A replayable homotopy certificate.
struct MoveSequence {
  Chain start;
  std::vector<Move> moves;
  Chain end;
};

/// Legality of one move on a raw point sequence; never throws.
bool move_is_legal(const Entourage& e, const std::vector<Vertex>& points, const Move& move);

/// Applies a move in place after checking legality (throws on failure).
void apply_move_inplace(const Entourage& e, std::vector<Vertex>& points, const Move& move);

Chain apply_move(const Chain& chain, const Move& move);

/// Replays from `start`; throws IllegalMove/EndpointRemoval with the move index.
Chain replay(const Chain& start, const std::vector<Move>& moves);

/// True iff the moves replay legally from start and reach end exactly.
bool verify(const MoveSequence& seq);

struct NormalizeResult {
  Chain chain;
  MoveSequence homotopy;
};

/// Removes every interior point whose two adjacent steps are both shorter
/// than eps/2. Requires the strict eps-entourage inside the chain's
/// entourage. With `pad_to`, duplicates of the last point are inserted
/// before it until the step count equals *pad_to.
NormalizeResult normalize(const Chain& chain, const Rational& eps,
                          std::optional<std::size_t> pad_to = std::nullopt);

struct RefineResult {
  Chain refined;
  /// Homotopy from the refined chain back to the original.
  MoveSequence to_original;
};

/// Fills every step that is not an F-step with the lexicographically first
/// shortest F-path inside the intersection of the endpoints' balls.
RefineResult refine(const Chain& chain, const EntouragePtr& fine);

/// Moves carrying alpha to beta pointwise through F-close points. Needs
/// alpha an F-chain, beta an E-chain (E = alpha's entourage) with the same
/// endpoints and length, each (alpha_i, beta_i) in F, and F composed with
/// itself inside E. Emits four moves per differing interior index.
MoveSequence close_homotopy(const Chain& alpha, const std::vector<Vertex>& beta,
                            const Entourage& fine);

Chain concat(const Chain& a, const Chain& b);
Chain reverse(const Chain& a);

}  // namespace dhtk
