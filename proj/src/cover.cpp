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

#include "dhtk/cover.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>

#include "dhtk/error.hpp"

namespace dhtk {

std::optional<LiftId> CoverBall::neighbour(LiftId from, Vertex to) const {
  const auto& adj = adjacency_[from];
  const auto it = std::lower_bound(adj.begin(), adj.end(), std::make_pair(to, LiftId{0}));
  if (it == adj.end() || it->first != to) return std::nullopt;
  return it->second;
}

std::vector<LiftId> CoverBall::fiber(Vertex v) const {
  std::vector<LiftId> out;
  for (LiftId i = 0; i < points_.size(); ++i)
    if (points_[i].base == v) out.push_back(i);
  return out;
}

std::optional<LiftId> CoverBall::find(Vertex v, const GroupKey& key) const {
  for (LiftId i = 0; i < points_.size(); ++i)
    if (points_[i].base == v && points_[i].key && *points_[i].key == key) return i;
  return std::nullopt;
}

namespace {

/// Appends one step to a key.
GroupKey extend_key(const ReducedGroup& g, const GroupKey& key, Symbol s) {
  GroupKey out = key;
  if (s == 0) return out;
  if (g.key_is_h1()) {
    g.h1_accumulate(out.h1, s);
  } else {
    const Word step = *g.reduced_word({s});
    out.word.insert(out.word.end(), step.begin(), step.end());
    out.word = free_reduce(out.word);
  }
  return out;
}

}  // namespace

CoverBall build_cover_ball(const EntouragePtr& e, const Rational& radius, std::size_t budget) {
  if (radius < 0) throw Error(ErrorKind::BadParams, "radius must be nonnegative");
  CoverBall cb;
  cb.pres_ = std::make_shared<const GroupPresentation>(build_presentation(e));
  const GroupPresentation& pres = *cb.pres_;
  const ReducedGroup& group = pres.group();
  const FiniteMetricSpace& space = *e->space();
  const Units limit = space.ceil_units(radius);
  // Lifted distances are sums of units, so d <= radius <=> units <= floor.
  cb.radius_ = space.to_rational(limit) == radius ? limit : limit - 1;
  cb.keyed_ = group.has_faithful_key();

  struct Node {
    LiftedPoint point;
    bool settled = false;
  };
  std::vector<Node> nodes;
  std::map<std::pair<Vertex, GroupKey>, LiftId> by_key;
  std::vector<std::vector<LiftId>> by_vertex(space.size());
  std::vector<std::vector<std::pair<Vertex, LiftId>>> adjacency;

  GroupKey identity;
  if (cb.keyed_) {
    if (group.key_is_h1()) identity.h1.assign(group.h1_dimension(), 0);
  }
  auto create = [&](Vertex v, std::optional<GroupKey> key, std::vector<Vertex> rep, Units dist) {
    const LiftId id = nodes.size();
    nodes.push_back({LiftedPoint{v, key, std::move(rep), dist, 0}, false});
    adjacency.emplace_back();
    if (key) by_key.emplace(std::make_pair(v, *key), id);
    by_vertex[v].push_back(id);
    return id;
  };
  create(0, cb.keyed_ ? std::optional<GroupKey>(identity) : std::nullopt, {0}, 0);

  // Finds or creates the class of rep(u) followed by a step to w.
  auto identify = [&](LiftId u, Vertex w) -> LiftId {
    const Vertex v = nodes[u].point.base;
    std::vector<Vertex> rep = nodes[u].point.representative;
    rep.push_back(w);
    constexpr Units kUnreached = std::numeric_limits<Units>::max();
    if (cb.keyed_) {
      GroupKey key = extend_key(group, *nodes[u].point.key, pres.step_symbol(v, w));
      const auto it = by_key.find({w, key});
      if (it != by_key.end()) return it->second;
      return create(w, std::move(key), std::move(rep), kUnreached);
    }
    for (LiftId z : by_vertex[w]) {
      std::vector<Vertex> loop = rep;
      const auto& other = nodes[z].point.representative;
      loop.insert(loop.end(), other.rbegin() + 1, other.rend());
      const Chain chain = validate_chain(e, loop);
      const NullityVerdict verdict = decide_null(pres, chain, budget);
      if (verdict.verdict == Verdict::Null) return z;
      if (verdict.verdict == Verdict::Unknown) {
        std::string pts;
        for (Vertex x : loop) pts += (pts.empty() ? "" : ",") + std::to_string(x);
        throw Error(ErrorKind::UndecidedMerge, "nullity of loop [" + pts + "] is undecided",
                    static_cast<long>(z));
      }
    }
    return create(w, std::nullopt, std::move(rep), kUnreached);
  };

  using Item = std::pair<Units, LiftId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  queue.emplace(0, 0);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (nodes[u].settled || d != nodes[u].point.distance) continue;
    if (d > cb.radius_) break;
    nodes[u].settled = true;
    const Vertex v = nodes[u].point.base;
    const VertexSet& row = e->row(v);
    for (auto w = row.find_first(); w != VertexSet::npos; w = row.find_next(w)) {
      if (w == v) continue;
      const auto wv = static_cast<Vertex>(w);
      const LiftId z = identify(u, wv);
      adjacency[u].emplace_back(wv, z);
      const Units nd = d + space.units(v, wv);
      if (!nodes[z].settled && nd < nodes[z].point.distance) {
        nodes[z].point.distance = nd;
        std::vector<Vertex> rep = nodes[u].point.representative;
        rep.push_back(wv);
        nodes[z].point.representative = std::move(rep);
        queue.emplace(nd, z);
      }
    }
  }

  // Keep settled nodes only, renumbered in settle order of ids.
  std::vector<LiftId> remap(nodes.size(), std::numeric_limits<LiftId>::max());
  for (LiftId i = 0; i < nodes.size(); ++i)
    if (nodes[i].settled) {
      remap[i] = cb.points_.size();
      cb.points_.push_back(std::move(nodes[i].point));
    }
  cb.adjacency_.resize(cb.points_.size());
  for (LiftId i = 0; i < nodes.size(); ++i) {
    if (remap[i] == std::numeric_limits<LiftId>::max()) continue;
    for (const auto& [w, z] : adjacency[i]) {
      if (remap[z] == std::numeric_limits<LiftId>::max()) continue;
      cb.adjacency_[remap[i]].emplace_back(w, remap[z]);
      if (remap[i] < remap[z])
        cb.edges_.push_back({remap[i], remap[z], space.units(cb.points_[remap[i]].base, w)});
    }
    std::sort(cb.adjacency_[remap[i]].begin(), cb.adjacency_[remap[i]].end());
  }
  // BFS layers from the basepoint lift.
  std::vector<bool> seen(cb.points_.size(), false);
  std::deque<LiftId> bfs{0};
  seen[0] = true;
  while (!bfs.empty()) {
    const LiftId u = bfs.front();
    bfs.pop_front();
    for (const auto& [w, z] : cb.adjacency_[u])
      if (!seen[z]) {
        seen[z] = true;
        cb.points_[z].layer = cb.points_[u].layer + 1;
        bfs.push_back(z);
      }
  }
  return cb;
}

std::vector<LiftId> lift_chain(const CoverBall& cb, const Chain& chain, LiftId start) {
  if (start >= cb.points().size())
    throw Error(ErrorKind::BadVertex, "no such lifted point", static_cast<long>(start));
  if (cb.points()[start].base != chain.front())
    throw Error(ErrorKind::BasepointMismatch,
                "lift starts over " + std::to_string(cb.points()[start].base) +
                    " but the chain starts at " + std::to_string(chain.front()));
  std::vector<LiftId> out{start};
  const auto& pts = chain.points();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i] == pts[i - 1]) {
      out.push_back(out.back());
      continue;
    }
    if (!cb.presentation().entourage()->contains(pts[i - 1], pts[i]))
      throw Error(ErrorKind::StepNotInEntourage, "step " + std::to_string(i - 1) +
                                                     " is not in the cover's entourage",
                  static_cast<long>(i - 1));
    const auto next = cb.neighbour(out.back(), pts[i]);
    if (!next)
      throw Error(ErrorKind::RadiusExceeded,
                  "lift leaves the ball at step " + std::to_string(i - 1),
                  static_cast<long>(i - 1));
    out.push_back(*next);
  }
  return out;
}

LiftedDistance lifted_distance(const CoverBall& cb, LiftId u, LiftId v) {
  const auto& pts = cb.points();
  if (u >= pts.size() || v >= pts.size())
    throw Error(ErrorKind::BadVertex, "no such lifted point");
  const FiniteMetricSpace& space = *cb.space();
  constexpr Units kInf = std::numeric_limits<Units>::max();
  std::vector<Units> dist(pts.size(), kInf);
  using Item = std::pair<Units, LiftId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[u] = 0;
  queue.emplace(0, u);
  while (!queue.empty()) {
    const auto [d, x] = queue.top();
    queue.pop();
    if (d != dist[x]) continue;
    if (x == v) break;
    for (const auto& [w, z] : cb.neighbours(x)) {
      const Units nd = d + space.units(pts[x].base, w);
      if (nd < dist[z]) {
        dist[z] = nd;
        queue.emplace(nd, z);
      }
    }
  }
  LiftedDistance out;
  out.units = dist[v];
  out.value = space.to_rational(dist[v]);
  out.exact = dist[v] <= 2 * cb.radius_units() - pts[u].distance - pts[v].distance;
  return out;
}

const char* to_string(Equivalence e) {
  switch (e) {
    case Equivalence::Equivalent: return "equivalent";
    case Equivalence::Inequivalent: return "inequivalent";
    case Equivalence::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

/// Decides whether every refined triad of `side` that is not a triad of
/// `common` dies in `other`. Gap refinements are cached per pair.
Verdict kernel_contained(const GroupPresentation& common, const EntouragePtr& side,
                         const GroupPresentation& other, std::size_t budget) {
  const Entourage& d = *common.entourage();
  const Entourage& s = *side;
  const ReducedGroup& og = other.group();
  const bool keyed = og.has_faithful_key();
  const EntouragePtr common_ptr = common.entourage();

  std::map<std::pair<Vertex, Vertex>, std::vector<Vertex>> gaps;
  auto gap = [&](Vertex a, Vertex b) -> const std::vector<Vertex>& {
    auto it = gaps.find({a, b});
    if (it != gaps.end()) return it->second;
    const Chain step = validate_chain(side, {a, b});
    const RefineResult r = refine(step, common_ptr);
    return gaps.emplace(std::make_pair(a, b), r.refined.points()).first->second;
  };
  std::map<std::pair<Vertex, Vertex>, GroupKey> gap_keys;
  auto gap_key = [&](Vertex a, Vertex b) -> const GroupKey& {
    auto it = gap_keys.find({a, b});
    if (it != gap_keys.end()) return it->second;
    const auto& path = gap(a, b);
    Word w;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      if (const Symbol sym = other.step_symbol(path[i], path[i + 1]); sym != 0) w.push_back(sym);
    GroupKey key;
    if (og.key_is_h1()) key.h1 = og.h1_image(w);
    else key.word = *og.reduced_word(w);
    return gap_keys.emplace(std::make_pair(a, b), std::move(key)).first->second;
  };

  bool unknown = false;
  std::set<std::vector<Vertex>> tried;
  for (Vertex a = 0; a < s.size(); ++a) {
    const VertexSet& ra = s.row(a);
    for (auto bi = ra.find_next(a); bi != VertexSet::npos; bi = ra.find_next(bi)) {
      const auto b = static_cast<Vertex>(bi);
      const VertexSet both = ra & s.row(b);
      for (auto ci = both.find_next(b); ci != VertexSet::npos; ci = both.find_next(ci)) {
        const auto c = static_cast<Vertex>(ci);
        if (d.contains(a, b) && d.contains(b, c) && d.contains(a, c)) continue;
        if (keyed) {
          const GroupKey& k1 = gap_key(a, b);
          const GroupKey& k2 = gap_key(b, c);
          const GroupKey& k3 = gap_key(c, a);
          GroupKey total;
          if (og.key_is_h1()) {
            total.h1 = k1.h1;
            for (std::size_t i = 0; i < total.h1.size(); ++i) total.h1[i] += k2.h1[i] + k3.h1[i];
            og.h1_normalize(total.h1);
          } else {
            total.word = k1.word;
            total.word.insert(total.word.end(), k2.word.begin(), k2.word.end());
            total.word.insert(total.word.end(), k3.word.begin(), k3.word.end());
            total.word = free_reduce(total.word);
          }
          if (!total.is_identity()) return Verdict::NonNull;
          continue;
        }
        std::vector<Vertex> loop = gap(a, b);
        for (const auto& part : {gap(b, c), gap(c, a)}) loop.insert(loop.end(), part.begin() + 1, part.end());
        if (!tried.insert(loop).second) continue;
        const NullityVerdict v = decide_null(other, validate_chain(other.entourage(), loop), budget);
        if (v.verdict == Verdict::NonNull) return Verdict::NonNull;
        if (v.verdict == Verdict::Unknown) unknown = true;
      }
    }
  }
  return unknown ? Verdict::Unknown : Verdict::Null;
}

}  // namespace

Equivalence covers_equivalent(const EntouragePtr& e, const EntouragePtr& f, std::size_t budget) {
  if (e->space() != f->space())
    throw Error(ErrorKind::MixedSpaces, "entourages are bound to different spaces");
  const GroupPresentation pe = build_presentation(e);
  const GroupPresentation pf = build_presentation(f);
  if (e->same_relation(*f)) return Equivalence::Equivalent;
  const EntouragePtr common = share(intersect(*e, *f));
  const GroupPresentation pd = build_presentation(common);
  const Verdict ef = kernel_contained(pd, e, pf, budget);
  if (ef == Verdict::NonNull) return Equivalence::Inequivalent;
  const Verdict fe = kernel_contained(pd, f, pe, budget);
  if (fe == Verdict::NonNull) return Equivalence::Inequivalent;
  if (ef == Verdict::Unknown || fe == Verdict::Unknown) return Equivalence::Unknown;
  return Equivalence::Equivalent;
}

}  // namespace dhtk
