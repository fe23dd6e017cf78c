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

#include "dhtk/chains.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "dhtk/error.hpp"

namespace dhtk {

Units Chain::length_units() const {
  const auto& space = *entourage_->space();
  Units total = 0;
  for (std::size_t i = 1; i < points_.size(); ++i) total += space.units(points_[i - 1], points_[i]);
  return total;
}

Rational Chain::length() const { return entourage_->space()->to_rational(length_units()); }

bool Chain::is_constant() const {
  return std::all_of(points_.begin(), points_.end(), [&](Vertex v) { return v == points_[0]; });
}

Chain validate_chain(EntouragePtr e, std::vector<Vertex> points) {
  if (points.empty()) throw Error(ErrorKind::BadParams, "a chain needs at least one point");
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i] >= e->size())
      throw Error(ErrorKind::BadVertex, "point " + std::to_string(i) + " is not a vertex",
                  static_cast<long>(i));
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    if (!e->contains(points[i], points[i + 1]))
      throw Error(ErrorKind::StepNotInEntourage,
                  "step " + std::to_string(i) + " (" + std::to_string(points[i]) + "," +
                      std::to_string(points[i + 1]) + ") is not in the entourage",
                  static_cast<long>(i));
  return Chain(std::move(e), std::move(points));
}

bool move_is_legal(const Entourage& e, const std::vector<Vertex>& points, const Move& move) {
  const std::size_t len = points.size();
  if (move.op == Move::Op::Insert) {
    if (move.pos < 1 || move.pos >= len || move.vertex >= e.size()) return false;
    return e.contains(points[move.pos - 1], move.vertex) && e.contains(move.vertex, points[move.pos]);
  }
  if (move.pos < 1 || move.pos + 1 >= len) return false;
  return e.contains(points[move.pos - 1], points[move.pos + 1]);
}

void apply_move_inplace(const Entourage& e, std::vector<Vertex>& points, const Move& move) {
  const std::size_t len = points.size();
  if (move.op == Move::Op::Remove) {
    if (move.pos == 0 || move.pos + 1 == len)
      throw Error(ErrorKind::EndpointRemoval, "position " + std::to_string(move.pos) +
                                                  " is an endpoint",
                  static_cast<long>(move.pos));
    if (move.pos >= len)
      throw Error(ErrorKind::IllegalMove, "remove position out of range",
                  static_cast<long>(move.pos));
    if (!e.contains(points[move.pos - 1], points[move.pos + 1]))
      throw Error(ErrorKind::IllegalMove, "bridged pair (" + std::to_string(points[move.pos - 1]) +
                                              "," + std::to_string(points[move.pos + 1]) +
                                              ") is not in the entourage",
                  static_cast<long>(move.pos));
    points.erase(points.begin() + static_cast<std::ptrdiff_t>(move.pos));
    return;
  }
  if (move.pos < 1 || move.pos >= len)
    throw Error(ErrorKind::IllegalMove, "insert position must lie strictly inside the chain",
                static_cast<long>(move.pos));
  if (move.vertex >= e.size())
    throw Error(ErrorKind::BadVertex, "inserted vertex out of range", static_cast<long>(move.pos));
  if (!e.contains(points[move.pos - 1], move.vertex) || !e.contains(move.vertex, points[move.pos]))
    throw Error(ErrorKind::IllegalMove, "inserted vertex " + std::to_string(move.vertex) +
                                            " is not related to both neighbours",
                static_cast<long>(move.pos));
  points.insert(points.begin() + static_cast<std::ptrdiff_t>(move.pos), move.vertex);
}

Chain apply_move(const Chain& chain, const Move& move) {
  std::vector<Vertex> points = chain.points();
  apply_move_inplace(chain.relation(), points, move);
  return validate_chain(chain.entourage(), std::move(points));
}

Chain replay(const Chain& start, const std::vector<Move>& moves) {
  std::vector<Vertex> points = start.points();
  for (std::size_t k = 0; k < moves.size(); ++k) {
    try {
      apply_move_inplace(start.relation(), points, moves[k]);
    } catch (const Error& err) {
      throw Error(err.kind(), "move " + std::to_string(k) + ": " + err.what(),
                  static_cast<long>(k));
    }
  }
  return validate_chain(start.entourage(), std::move(points));
}

bool verify(const MoveSequence& seq) {
  try {
    return replay(seq.start, seq.moves).points() == seq.end.points();
  } catch (const Error&) {
    return false;
  }
}

NormalizeResult normalize(const Chain& chain, const Rational& eps,
                          std::optional<std::size_t> pad_to) {
  if (eps <= 0) throw Error(ErrorKind::NonpositiveEps, "eps must be positive");
  const auto& space = chain.relation().space();
  if (!metric_entourage(space, eps, true).is_subset_of(chain.relation()))
    throw Error(ErrorKind::EntourageTooSmall, "strict " + format_rational(eps) +
                                                  "-entourage is not contained in the chain's");
  // d < eps/2  <=>  2 * units < ceil(eps * den).
  const Units limit = space->ceil_units(eps);
  auto short_step = [&](Vertex a, Vertex b) { return 2 * space->units(a, b) < limit; };

  std::vector<Vertex> points = chain.points();
  std::vector<Move> moves;
  std::size_t i = 1;
  while (i + 1 < points.size()) {
    if (short_step(points[i - 1], points[i]) && short_step(points[i], points[i + 1])) {
      moves.push_back(Move::remove(i));
      points.erase(points.begin() + static_cast<std::ptrdiff_t>(i));
      if (i > 1) --i;
    } else {
      ++i;
    }
  }
  if (pad_to) {
    if (*pad_to < points.size() - 1 || (points.size() < 2 && *pad_to > 0))
      throw Error(ErrorKind::PreconditionViolated,
                  "cannot pad a chain of " + std::to_string(points.size() - 1) + " steps to " +
                      std::to_string(*pad_to));
    while (points.size() - 1 < *pad_to) {
      const std::size_t pos = points.size() - 1;
      moves.push_back(Move::insert(pos, points.back()));
      points.insert(points.begin() + static_cast<std::ptrdiff_t>(pos), points.back());
    }
  }
  Chain result = validate_chain(chain.entourage(), std::move(points));
  return {result, MoveSequence{chain, std::move(moves), result}};
}

namespace {

/// Lexicographically first shortest path from a to b using `fine` edges
/// inside `allowed`; empty when unreachable.
std::vector<Vertex> shortest_path_within(const Entourage& fine, Vertex a, Vertex b,
                                         const VertexSet& allowed) {
  const std::size_t n = fine.size();
  constexpr int kUnseen = std::numeric_limits<int>::max();
  std::vector<int> to_b(n, kUnseen);
  std::deque<Vertex> queue{b};
  to_b[b] = 0;
  while (!queue.empty() && to_b[a] == kUnseen) {
    const Vertex v = queue.front();
    queue.pop_front();
    const VertexSet next = fine.row(v) & allowed;
    for (auto w = next.find_first(); w != VertexSet::npos; w = next.find_next(w))
      if (to_b[w] == kUnseen) {
        to_b[w] = to_b[v] + 1;
        queue.push_back(static_cast<Vertex>(w));
      }
  }
  if (to_b[a] == kUnseen) return {};
  std::vector<Vertex> path{a};
  Vertex cur = a;
  while (cur != b) {
    const VertexSet next = fine.row(cur) & allowed;
    for (auto w = next.find_first(); w != VertexSet::npos; w = next.find_next(w))
      if (to_b[w] == to_b[cur] - 1) {
        cur = static_cast<Vertex>(w);
        break;
      }
    path.push_back(cur);
  }
  return path;
}

}  // namespace

RefineResult refine(const Chain& chain, const EntouragePtr& fine) {
  const Entourage& coarse = chain.relation();
  if (fine->space() != coarse.space())
    throw Error(ErrorKind::MixedSpaces, "refining entourage is bound to another space");
  if (!fine->is_subset_of(coarse))
    throw Error(ErrorKind::PreconditionViolated,
                "refining entourage is not contained in the chain's entourage");
  const auto& pts = chain.points();
  std::vector<Vertex> refined{pts.front()};
  std::vector<std::size_t> inserted_per_gap;
  for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
    const Vertex a = pts[j], b = pts[j + 1];
    if (fine->contains(a, b)) {
      refined.push_back(b);
      inserted_per_gap.push_back(0);
      continue;
    }
    const VertexSet allowed = coarse.row(a) & coarse.row(b);
    const auto path = shortest_path_within(*fine, a, b, allowed);
    if (path.empty())
      throw Error(ErrorKind::NotChained,
                  "no fine path joins " + std::to_string(a) + " and " + std::to_string(b) +
                      " inside their common ball",
                  static_cast<long>(j));
    refined.insert(refined.end(), path.begin() + 1, path.end());
    inserted_per_gap.push_back(path.size() - 2);
  }
  // Every inserted point of gap j lies in the ball of the gap's left end, so
  // deleting them left to right only ever bridges pairs in that ball.
  std::vector<Move> moves;
  for (std::size_t j = 0; j < inserted_per_gap.size(); ++j)
    for (std::size_t k = 0; k < inserted_per_gap[j]; ++k) moves.push_back(Move::remove(j + 1));
  Chain fine_chain = validate_chain(fine, refined);
  Chain as_coarse = validate_chain(chain.entourage(), std::move(refined));
  return {fine_chain, MoveSequence{as_coarse, std::move(moves), chain}};
}

MoveSequence close_homotopy(const Chain& alpha, const std::vector<Vertex>& beta,
                            const Entourage& fine) {
  const Entourage& coarse = alpha.relation();
  const auto& x = alpha.points();
  if (beta.size() != x.size())
    throw Error(ErrorKind::PreconditionViolated, "beta must have as many points as alpha");
  if (beta.front() != x.front() || beta.back() != x.back())
    throw Error(ErrorKind::PreconditionViolated, "beta must share alpha's endpoints",
                beta.front() != x.front() ? 0 : static_cast<long>(x.size() - 1));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (beta[i] >= coarse.size())
      throw Error(ErrorKind::BadVertex, "beta point out of range", static_cast<long>(i));
    if (!fine.contains(x[i], beta[i]))
      throw Error(ErrorKind::PreconditionViolated,
                  "(alpha_i, beta_i) not in the fine entourage at " + std::to_string(i),
                  static_cast<long>(i));
    if (i + 1 < x.size() && !fine.contains(x[i], x[i + 1]))
      throw Error(ErrorKind::PreconditionViolated,
                  "alpha step " + std::to_string(i) + " is not a fine step", static_cast<long>(i));
    if (i + 1 < x.size() && !coarse.contains(beta[i], beta[i + 1]))
      throw Error(ErrorKind::PreconditionViolated,
                  "beta step " + std::to_string(i) + " is not in alpha's entourage",
                  static_cast<long>(i));
  }
  if (!compose(fine, 2).is_subset_of(coarse))
    throw Error(ErrorKind::PreconditionViolated,
                "the fine entourage composed with itself is not inside alpha's entourage");

  std::vector<Move> moves;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    if (x[i] == beta[i]) continue;
    // ... y_{i-1} x_i x_{i+1}  ->  y_{i-1} x_i y_i x_i x_{i+1}  ->  y_{i-1} y_i x_{i+1}
    moves.push_back(Move::insert(i + 1, x[i]));
    moves.push_back(Move::insert(i + 1, beta[i]));
    moves.push_back(Move::remove(i));
    moves.push_back(Move::remove(i + 1));
  }
  Chain end = validate_chain(alpha.entourage(), beta);
  return MoveSequence{alpha, std::move(moves), end};
}

Chain concat(const Chain& a, const Chain& b) {
  if (a.back() != b.front())
    throw Error(ErrorKind::EndpointMismatch, "first chain ends at " + std::to_string(a.back()) +
                                                 " but second starts at " +
                                                 std::to_string(b.front()));
  if (a.entourage() != b.entourage() && !a.relation().same_relation(b.relation()))
    throw Error(ErrorKind::MixedSpaces, "chains are certified against different entourages");
  std::vector<Vertex> points = a.points();
  points.insert(points.end(), b.points().begin() + 1, b.points().end());
  return validate_chain(a.entourage(), std::move(points));
}

Chain reverse(const Chain& a) {
  std::vector<Vertex> points(a.points().rbegin(), a.points().rend());
  return validate_chain(a.entourage(), std::move(points));
}

}  // namespace dhtk
