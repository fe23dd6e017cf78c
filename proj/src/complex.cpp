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

#include "dhtk/complex.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <set>
#include <tuple>
#include <unordered_map>

#include "dhtk/error.hpp"

namespace dhtk {

std::vector<Vertex> GroupPresentation::tree_path(Vertex v) const {
  std::vector<Vertex> path{v};
  while (path.back() != 0) path.push_back(parent_[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

GroupPresentation build_presentation(const EntouragePtr& e, bool check_chained) {
  const std::size_t n = e->size();
  GroupPresentation pres;
  pres.entourage_ = e;
  pres.n_ = n;

  constexpr Vertex kUnseen = static_cast<Vertex>(-1);
  // A failed chainedness check is the more specific diagnosis.
  if (check_chained) {
    const ChainedResult chained = is_chained(*e);
    if (!chained)
      throw Error(ErrorKind::NotChained,
                  "pair (" + std::to_string(chained.witness->first) + "," +
                      std::to_string(chained.witness->second) +
                      ") is not joined at the base scale inside its balls",
                  static_cast<long>(chained.witness->first));
  }

  pres.parent_.assign(n, kUnseen);
  pres.depth_.assign(n, 0);
  pres.parent_[0] = 0;
  std::deque<Vertex> queue{0};
  std::size_t reached = 1;
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop_front();
    const VertexSet& row = e->row(v);
    for (auto w = row.find_first(); w != VertexSet::npos; w = row.find_next(w))
      if (pres.parent_[w] == kUnseen) {
        pres.parent_[w] = v;
        pres.depth_[w] = pres.depth_[v] + 1;
        queue.push_back(static_cast<Vertex>(w));
        ++reached;
      }
  }
  if (reached != n) {
    Vertex missing = 0;
    while (pres.parent_[missing] != kUnseen) ++missing;
    throw Error(ErrorKind::NotConnected,
                "vertex " + std::to_string(missing) + " is not reachable from the basepoint",
                static_cast<long>(missing));
  }
  pres.symbols_.assign(n * n, 0);
  for (Vertex i = 0; i < n; ++i) {
    const VertexSet& row = e->row(i);
    for (auto j = row.find_next(i); j != VertexSet::npos; j = row.find_next(j)) {
      ++pres.edge_count_;
      const auto jv = static_cast<Vertex>(j);
      if (pres.parent_[jv] == i || pres.parent_[i] == jv) continue;
      const auto g = static_cast<Symbol>(pres.generators_.size() + 1);
      pres.generators_.emplace_back(i, jv);
      pres.symbols_[i * n + j] = g;
      pres.symbols_[j * n + i] = -g;
    }
  }

  for (Vertex a = 0; a < n; ++a) {
    const VertexSet& ra = e->row(a);
    for (auto b = ra.find_next(a); b != VertexSet::npos; b = ra.find_next(b)) {
      const VertexSet common = ra & e->row(static_cast<Vertex>(b));
      for (auto c = common.find_next(b); c != VertexSet::npos; c = common.find_next(c)) {
        const Triad t{a, static_cast<Vertex>(b), static_cast<Vertex>(c)};
        pres.triads_.push_back(t);
        Word w;
        for (const auto& [x, y] : {std::pair{t[0], t[1]}, std::pair{t[1], t[2]}, std::pair{t[2], t[0]}})
          if (const Symbol s = pres.step_symbol(x, y); s != 0) w.push_back(s);
        pres.relators_.push_back(std::move(w));
      }
    }
  }
  pres.group_ = std::make_shared<const ReducedGroup>(pres.generators_.size(), pres.relators_);
  return pres;
}

Word loop_word(const GroupPresentation& pres, const std::vector<Vertex>& loop) {
  if (loop.empty() || loop.front() != loop.back())
    throw Error(ErrorKind::NotALoop, "chain does not end where it starts");
  const Entourage& e = *pres.entourage();
  Word w;
  w.reserve(loop.size());
  for (std::size_t i = 0; i + 1 < loop.size(); ++i) {
    if (loop[i] >= e.size() || loop[i + 1] >= e.size() || !e.contains(loop[i], loop[i + 1]))
      throw Error(ErrorKind::StepNotInEntourage,
                  "step " + std::to_string(i) + " is not in the presentation's entourage",
                  static_cast<long>(i));
    if (const Symbol s = pres.step_symbol(loop[i], loop[i + 1]); s != 0) w.push_back(s);
  }
  return free_reduce(w);
}

Word loop_word(const GroupPresentation& pres, const Chain& loop) {
  return loop_word(pres, loop.points());
}

AbelianInvariants h1(const GroupPresentation& pres) { return pres.group().invariants(); }

std::vector<std::int64_t> h1_image(const GroupPresentation& pres, const Chain& loop) {
  return pres.group().h1_image(loop_word(pres, loop));
}

bool GroupKey::is_identity() const {
  return word.empty() && std::all_of(h1.begin(), h1.end(), [](std::int64_t x) { return x == 0; });
}

std::optional<GroupKey> group_key(const GroupPresentation& pres, const Word& w) {
  const ReducedGroup& g = pres.group();
  if (!g.has_faithful_key()) return std::nullopt;
  GroupKey key;
  if (g.key_is_h1()) key.h1 = g.h1_image(w);
  else key.word = *g.reduced_word(w);
  return key;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Null: return "null";
    case Verdict::NonNull: return "non-null";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::FreeReduction: return "free_reduction";
    case Strategy::Abelianization: return "abelianization";
    case Strategy::BoundedSearch: return "bounded_search";
  }
  return "bounded_search";
}

std::optional<bool> null_by_structure(const GroupPresentation& pres,
                                      const std::vector<Vertex>& loop) {
  const Word w = loop_word(pres, loop);
  if (w.empty()) return true;
  const auto key = group_key(pres, w);
  if (!key) return std::nullopt;
  return key->is_identity();
}

namespace {

/// Applies a removal in place and records it.
void remove_at(const Entourage& e, std::vector<Vertex>& pts, std::vector<Move>& moves,
               std::size_t pos) {
  const Move m = Move::remove(pos);
  apply_move_inplace(e, pts, m);
  moves.push_back(m);
}

void insert_at(const Entourage& e, std::vector<Vertex>& pts, std::vector<Move>& moves,
               std::size_t pos, Vertex v) {
  const Move m = Move::insert(pos, v);
  apply_move_inplace(e, pts, m);
  moves.push_back(m);
}

/// Removes spurs (a b a -> a a) and duplicates until none remain.
void free_collapse(const Entourage& e, std::vector<Vertex>& pts, std::vector<Move>& moves) {
  std::size_t i = 1;
  while (i + 1 < pts.size()) {
    if (pts[i - 1] == pts[i + 1] || pts[i] == pts[i - 1] || pts[i] == pts[i + 1]) {
      remove_at(e, pts, moves, i);
      if (i > 1) --i;
    } else {
      ++i;
    }
  }
}

/// Removes any interior point whose neighbours are related.
void greedy_removal(const Entourage& e, std::vector<Vertex>& pts, std::vector<Move>& moves) {
  std::size_t i = 1;
  while (i + 1 < pts.size()) {
    if (e.contains(pts[i - 1], pts[i + 1])) {
      remove_at(e, pts, moves, i);
      if (i > 1) --i;
    } else {
      ++i;
    }
  }
}

bool constant(const std::vector<Vertex>& pts) {
  return std::all_of(pts.begin(), pts.end(), [&](Vertex v) { return v == pts.front(); });
}

/// Loop inside one ball: insert the centre after the basepoint, then delete
/// everything between it and the end.
bool star_cone(const Entourage& e, std::vector<Vertex>& pts, std::vector<Move>& moves) {
  if (pts.size() < 3) return constant(pts);
  VertexSet common = e.row(pts[0]);
  for (Vertex p : pts) common &= e.row(p);
  const auto centre = common.find_first();
  if (centre == VertexSet::npos) return false;
  insert_at(e, pts, moves, 1, static_cast<Vertex>(centre));
  while (pts.size() > 3) remove_at(e, pts, moves, 2);
  remove_at(e, pts, moves, 1);
  return true;
}

/// Cuts the chain into maximal arcs whose points all lie in the ball of the
/// arc's first point and collapses every arc to its two ends.
void arc_cone(const Entourage& e, std::vector<Vertex>& pts, std::vector<Move>& moves) {
  std::size_t s = 0;
  while (s + 1 < pts.size()) {
    std::size_t t = s + 1;
    while (t + 1 < pts.size() && e.contains(pts[s], pts[t + 1])) ++t;
    for (std::size_t k = s + 1; k < t; ++k) remove_at(e, pts, moves, s + 1);
    s += 1;
  }
}

std::vector<Move> inverted(const std::vector<Move>& forward, std::vector<Vertex> start,
                           const Entourage& e) {
  // Record the removed vertices so every removal can be undone.
  std::vector<Move> undo;
  for (const Move& m : forward) {
    if (m.op == Move::Op::Remove) undo.push_back(Move::insert(m.pos, start[m.pos]));
    else undo.push_back(Move::remove(m.pos));
    apply_move_inplace(e, start, m);
  }
  std::reverse(undo.begin(), undo.end());
  return undo;
}

std::optional<std::vector<Move>> refine_and_cone(const Chain& loop) {
  const Entourage& e = loop.relation();
  const EntouragePtr base = share(base_entourage(e.space()));
  if (!base->is_subset_of(e)) return std::nullopt;
  std::optional<RefineResult> found;
  try {
    found.emplace(refine(loop, base));
  } catch (const Error&) {
    return std::nullopt;
  }
  const RefineResult& refined = *found;
  std::vector<Move> moves =
      inverted(refined.to_original.moves, refined.to_original.start.points(), e);
  std::vector<Vertex> pts = refined.refined.points();
  arc_cone(e, pts, moves);
  greedy_removal(e, pts, moves);
  if (constant(pts) || star_cone(e, pts, moves)) return moves;
  return std::nullopt;
}

struct VectorHash {
  std::size_t operator()(const std::vector<Vertex>& v) const noexcept {
    std::size_t h = v.size();
    for (Vertex x : v) h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

/// Best-first search over chains ordered by (length, steps). Insertions may
/// not raise the length above the start's nor the step count by more than 2.
std::optional<std::vector<Move>> bounded_search(const Chain& loop, std::size_t budget,
                                                std::size_t& expanded) {
  const Entourage& e = loop.relation();
  const FiniteMetricSpace& space = *e.space();
  const Units max_length = loop.length_units();
  const std::size_t max_steps = loop.steps() + 2;

  struct Node {
    std::vector<Vertex> pts;
    std::size_t parent;
    Move move;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::vector<Vertex>, std::size_t, VectorHash> seen;
  using Item = std::tuple<Units, std::size_t, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> frontier;

  auto length_of = [&](const std::vector<Vertex>& p) {
    Units l = 0;
    for (std::size_t i = 1; i < p.size(); ++i) l += space.units(p[i - 1], p[i]);
    return l;
  };
  auto push = [&](std::vector<Vertex> pts, std::size_t parent, Move move) {
    if (seen.count(pts)) return;
    const Units l = length_of(pts);
    const std::size_t steps = pts.size() - 1;
    seen.emplace(pts, nodes.size());
    frontier.emplace(l, steps, nodes.size());
    nodes.push_back({std::move(pts), parent, move});
  };
  push(loop.points(), static_cast<std::size_t>(-1), Move{});

  while (!frontier.empty() && expanded < budget) {
    const auto [len, steps, idx] = frontier.top();
    frontier.pop();
    ++expanded;
    const std::vector<Vertex> pts = nodes[idx].pts;
    if (constant(pts)) {
      std::vector<Move> moves;
      for (std::size_t k = idx; nodes[k].parent != static_cast<std::size_t>(-1); k = nodes[k].parent)
        moves.push_back(nodes[k].move);
      std::reverse(moves.begin(), moves.end());
      return moves;
    }
    for (std::size_t pos = 1; pos + 1 < pts.size(); ++pos)
      if (e.contains(pts[pos - 1], pts[pos + 1])) {
        std::vector<Vertex> next = pts;
        next.erase(next.begin() + static_cast<std::ptrdiff_t>(pos));
        push(std::move(next), idx, Move::remove(pos));
      }
    if (steps + 1 > max_steps) continue;
    for (std::size_t pos = 1; pos < pts.size(); ++pos) {
      const Vertex a = pts[pos - 1], b = pts[pos];
      const VertexSet cand = e.row(a) & e.row(b);
      const Units base_len = len - space.units(a, b);
      for (auto v = cand.find_first(); v != VertexSet::npos; v = cand.find_next(v)) {
        const auto vv = static_cast<Vertex>(v);
        if (vv == a || vv == b) continue;
        if (base_len + space.units(a, vv) + space.units(vv, b) > max_length) continue;
        std::vector<Vertex> next = pts;
        next.insert(next.begin() + static_cast<std::ptrdiff_t>(pos), vv);
        push(std::move(next), idx, Move::insert(pos, vv));
      }
    }
  }
  return std::nullopt;
}

NullityVerdict null_verdict(const Chain& loop, std::vector<Move> moves, Strategy strategy) {
  NullityVerdict v;
  const Chain end = replay(loop, moves);
  if (!end.is_constant())
    throw Error(ErrorKind::PreconditionViolated, "contraction did not reach a constant chain");
  v.verdict = Verdict::Null;
  v.strategy = strategy;
  v.certificate = MoveSequence{loop, std::move(moves), end};
  return v;
}

}  // namespace

std::optional<MoveSequence> constructive_contraction(const Chain& loop) {
  const Entourage& e = loop.relation();
  std::vector<Vertex> pts = loop.points();
  std::vector<Move> moves;
  greedy_removal(e, pts, moves);
  bool done = constant(pts);
  if (!done) {
    std::vector<Move> cone_moves;
    std::vector<Vertex> cone_pts = pts;
    if (star_cone(e, cone_pts, cone_moves)) {
      moves.insert(moves.end(), cone_moves.begin(), cone_moves.end());
      done = true;
    }
  }
  if (!done) {
    const Chain reduced = validate_chain(loop.entourage(), pts);
    if (auto more = refine_and_cone(reduced)) {
      moves.insert(moves.end(), more->begin(), more->end());
      done = true;
    }
  }
  if (!done) return std::nullopt;
  Chain end = replay(loop, moves);
  return MoveSequence{loop, std::move(moves), std::move(end)};
}

NullityVerdict decide_null(const GroupPresentation& pres, const Chain& input, std::size_t budget,
                           StrategyMask mask) {
  if (!input.is_loop()) throw Error(ErrorKind::NotALoop, "chain does not end where it starts");
  const Chain loop = validate_chain(pres.entourage(), input.points());
  const Entourage& e = *pres.entourage();
  if (loop.is_constant()) return null_verdict(loop, {}, Strategy::FreeReduction);

  const Word w = loop_word(pres, loop);
  const ReducedGroup& group = pres.group();
  if (mask.free_reduction) {
    if (w.empty() || pres.triads().empty()) {
      // Without triads every legal removal is a spur or a duplicate, so the
      // collapse decides exactly; an empty word collapses in any case.
      std::vector<Vertex> pts = loop.points();
      std::vector<Move> moves;
      free_collapse(e, pts, moves);
      if (constant(pts)) return null_verdict(loop, std::move(moves), Strategy::FreeReduction);
    }
    if (pres.triads().empty()) {
      NullityVerdict v;
      v.verdict = Verdict::NonNull;
      v.strategy = Strategy::FreeReduction;
      v.word = w;
      v.h1 = group.h1_image(w);
      return v;
    }
    if (group.shape() == GroupShape::Free && group.has_words()) {
      const Word reduced = *group.reduced_word(w);
      if (!reduced.empty()) {
        NullityVerdict v;
        v.verdict = Verdict::NonNull;
        v.strategy = Strategy::FreeReduction;
        v.word = reduced;
        v.h1 = group.h1_image(w);
        return v;
      }
    }
  }
  if (mask.abelianization) {
    auto image = group.h1_image(w);
    if (std::any_of(image.begin(), image.end(), [](std::int64_t x) { return x != 0; })) {
      NullityVerdict v;
      v.verdict = Verdict::NonNull;
      v.strategy = Strategy::Abelianization;
      v.h1 = std::move(image);
      return v;
    }
  }
  if (mask.search) {
    if (auto contraction = constructive_contraction(loop))
      return null_verdict(loop, std::move(contraction->moves), Strategy::BoundedSearch);
    std::size_t expanded = 0;
    if (auto moves = bounded_search(loop, budget, expanded)) {
      auto v = null_verdict(loop, std::move(*moves), Strategy::BoundedSearch);
      v.states = expanded;
      return v;
    }
    NullityVerdict v;
    v.states = expanded;
    return v;
  }
  return NullityVerdict{};
}

KernelGenerator conjugated_refined_triad(const GroupPresentation& fine, const EntouragePtr& coarse,
                                         const Triad& t) {
  const Chain triad_loop = validate_chain(coarse, {t[0], t[1], t[2], t[0]});
  const RefineResult refined = refine(triad_loop, fine.entourage());
  std::vector<Vertex> pts = fine.tree_path(t[0]);
  const auto& body = refined.refined.points();
  pts.insert(pts.end(), body.begin() + 1, body.end());
  const auto back = fine.tree_path(t[0]);
  pts.insert(pts.end(), back.rbegin() + 1, back.rend());
  return {t, validate_chain(fine.entourage(), std::move(pts))};
}

MoveSequence contract_refined_triad(const KernelGenerator& gen, const EntouragePtr& coarse,
                                    const EntouragePtr& fine) {
  const Chain triad_loop = validate_chain(coarse, {gen.triad[0], gen.triad[1], gen.triad[2], gen.triad[0]});
  const RefineResult refined = refine(triad_loop, fine);
  const Chain start = validate_chain(coarse, gen.loop.points());
  // The refined triad starts where the tree path to its first vertex ends.
  std::size_t offset = 0;
  while (offset < start.points().size() && start.points()[offset] != gen.triad[0]) ++offset;
  std::vector<Vertex> pts = start.points();
  std::vector<Move> moves;
  for (const Move& m : refined.to_original.moves) {
    const Move shifted{m.op, m.pos + offset, m.vertex};
    apply_move_inplace(*coarse, pts, shifted);
    moves.push_back(shifted);
  }
  remove_at(*coarse, pts, moves, offset + 1);
  remove_at(*coarse, pts, moves, offset + 1);
  free_collapse(*coarse, pts, moves);
  Chain end = validate_chain(coarse, pts);
  if (!end.is_constant())
    throw Error(ErrorKind::PreconditionViolated, "triad contraction did not reach a constant chain");
  return MoveSequence{start, std::move(moves), std::move(end)};
}

std::vector<KernelGenerator> kernel_generators(const GroupPresentation& fine,
                                               const EntouragePtr& coarse) {
  const Entourage& f = *fine.entourage();
  if (!f.is_subset_of(*coarse))
    throw Error(ErrorKind::PreconditionViolated, "fine entourage is not inside the coarse one");
  const ReducedGroup& group = fine.group();
  const bool abelian = group.shape() == GroupShape::Trivial ||
                       group.shape() == GroupShape::Cyclic || group.shape() == GroupShape::Abelian;
  const bool free_words = group.shape() == GroupShape::Free && group.has_words();

  std::set<std::vector<std::int64_t>> seen_h1;
  std::set<Word> seen_words;
  std::vector<KernelGenerator> out;
  const std::size_t n = coarse->size();
  for (Vertex a = 0; a < n; ++a) {
    const VertexSet& ra = coarse->row(a);
    for (auto b = ra.find_next(a); b != VertexSet::npos; b = ra.find_next(b)) {
      const VertexSet common = ra & coarse->row(static_cast<Vertex>(b));
      for (auto c = common.find_next(b); c != VertexSet::npos; c = common.find_next(c)) {
        const Triad t{a, static_cast<Vertex>(b), static_cast<Vertex>(c)};
        if (f.contains(t[0], t[1]) && f.contains(t[1], t[2]) && f.contains(t[0], t[2])) continue;
        KernelGenerator gen = conjugated_refined_triad(fine, coarse, t);
        const Word w = loop_word(fine, gen.loop);
        if (abelian) {
          if (!seen_h1.insert(group.h1_image(w)).second) continue;
        } else if (free_words) {
          if (!seen_words.insert(canonical_relator(*group.reduced_word(w))).second) continue;
        } else if (!seen_words.insert(w).second) {
          continue;
        }
        out.push_back(std::move(gen));
      }
    }
  }
  return out;
}

}  // namespace dhtk
