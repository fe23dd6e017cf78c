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

#include "dhtk/entourage.hpp"

#include <limits>

#include "dhtk/error.hpp"

namespace dhtk {

std::string Provenance::describe() const {
  switch (kind) {
    case Kind::Metric:
      return std::string(strict ? "metric(<" : "metric(<=") + format_rational(eps) + ")";
    case Kind::Union: return "union";
    case Kind::Compose: return "compose^" + std::to_string(power);
    case Kind::Intersection: return "intersection";
    case Kind::Custom: return "custom";
  }
  return "custom";
}

Entourage::Entourage(SpacePtr space, std::vector<VertexSet> rows, Provenance provenance)
    : space_(std::move(space)), rows_(std::move(rows)), provenance_(std::move(provenance)) {
  const std::size_t n = space_->size();
  if (rows_.size() != n) throw Error(ErrorKind::BadParams, "entourage row count mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (rows_[i].size() != n) throw Error(ErrorKind::BadParams, "entourage row width mismatch");
    rows_[i].set(i);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (auto j = rows_[i].find_first(); j != VertexSet::npos; j = rows_[i].find_next(j))
      rows_[j].set(i);
}

std::size_t Entourage::pair_count() const {
  std::size_t total = 0;
  for (const auto& r : rows_) total += r.count();
  return (total - rows_.size()) / 2;
}

bool Entourage::is_full() const {
  for (const auto& r : rows_)
    if (!r.all()) return false;
  return true;
}

bool Entourage::is_subset_of(const Entourage& other) const {
  if (other.rows_.size() != rows_.size()) return false;
  for (std::size_t i = 0; i < rows_.size(); ++i)
    if (!rows_[i].is_subset_of(other.rows_[i])) return false;
  return true;
}

namespace {

std::vector<VertexSet> empty_rows(std::size_t n) { return std::vector<VertexSet>(n, VertexSet(n)); }

Entourage threshold_entourage(const SpacePtr& space, Units limit, bool strict,
                              Provenance provenance) {
  const std::size_t n = space->size();
  auto rows = empty_rows(n);
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = 0; j < n; ++j) {
      const Units d = space->units(i, j);
      if (strict ? d < limit : d <= limit) rows[i].set(j);
    }
  return Entourage(space, std::move(rows), std::move(provenance));
}

}  // namespace

Entourage metric_entourage(const SpacePtr& space, const Rational& eps, bool strict) {
  if (eps <= 0) throw Error(ErrorKind::NonpositiveEps, "eps must be positive");
  // d < eps  <=>  units < ceil(eps * den);  d <= eps  <=>  units <= floor(eps * den).
  const Units ceil_u = space->ceil_units(eps);
  const bool exact = space->to_rational(ceil_u) == eps;
  Provenance p{Provenance::Kind::Metric, eps, strict, 1};
  if (strict) return threshold_entourage(space, ceil_u, true, std::move(p));
  return threshold_entourage(space, exact ? ceil_u : ceil_u - 1, false, std::move(p));
}

Entourage closed_entourage_units(const SpacePtr& space, Units value) {
  return threshold_entourage(space, value, false,
                             {Provenance::Kind::Metric, space->to_rational(value), false, 1});
}

Entourage base_entourage(const SpacePtr& space) {
  return closed_entourage_units(space, space->base_units());
}

Entourage identity_entourage(const SpacePtr& space) {
  return Entourage(space, empty_rows(space->size()));
}

Entourage full_entourage(const SpacePtr& space) {
  auto rows = empty_rows(space->size());
  for (auto& r : rows) r.set();
  return Entourage(space, std::move(rows));
}

Entourage custom_entourage(const SpacePtr& space,
                           const std::vector<std::pair<Vertex, Vertex>>& pairs) {
  const std::size_t n = space->size();
  auto rows = empty_rows(n);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    if (i >= n || j >= n)
      throw Error(ErrorKind::BadVertex, "pair " + std::to_string(k) + " names a missing vertex",
                  static_cast<long>(k));
    rows[i].set(j);
  }
  return Entourage(space, std::move(rows));
}

Entourage compose(const Entourage& e, int k) {
  if (k < 1) throw Error(ErrorKind::BadParams, "compose power must be positive");
  const std::size_t n = e.size();
  std::vector<VertexSet> reach(n);
  for (Vertex x = 0; x < n; ++x) reach[x] = e.row(x);
  // Frontier expansion per source: reach grows by one hop per round.
  for (Vertex x = 0; x < n; ++x) {
    VertexSet frontier = reach[x];
    for (int step = 1; step < k && frontier.any(); ++step) {
      VertexSet next(n);
      for (auto v = frontier.find_first(); v != VertexSet::npos; v = frontier.find_next(v))
        next |= e.row(static_cast<Vertex>(v));
      next -= reach[x];
      reach[x] |= next;
      frontier = std::move(next);
    }
  }
  return Entourage(e.space(), std::move(reach), {Provenance::Kind::Compose, 0, false, k});
}

Entourage entourage_union(const std::vector<Entourage>& members) {
  if (members.empty()) throw Error(ErrorKind::BadParams, "union of no entourages");
  const auto& space = members.front().space();
  std::vector<VertexSet> rows(space->size());
  for (Vertex x = 0; x < space->size(); ++x) rows[x] = members.front().row(x);
  for (std::size_t m = 1; m < members.size(); ++m) {
    if (members[m].space() != space)
      throw Error(ErrorKind::MixedSpaces, "union member " + std::to_string(m) +
                                              " is bound to a different space",
                  static_cast<long>(m));
    for (Vertex x = 0; x < space->size(); ++x) rows[x] |= members[m].row(x);
  }
  if (members.size() == 1) return members.front();
  return Entourage(space, std::move(rows), {Provenance::Kind::Union, 0, false, 1});
}

Entourage intersect(const Entourage& e, const Entourage& f) {
  if (e.space() != f.space())
    throw Error(ErrorKind::MixedSpaces, "intersection of entourages on different spaces");
  std::vector<VertexSet> rows(e.size());
  for (Vertex x = 0; x < e.size(); ++x) rows[x] = e.row(x) & f.row(x);
  return Entourage(e.space(), std::move(rows), {Provenance::Kind::Intersection, 0, false, 1});
}

std::optional<Units> sigma_units(const Entourage& e) {
  const auto& space = *e.space();
  int first_missing = std::numeric_limits<int>::max();
  for (Vertex i = 0; i < e.size(); ++i) {
    VertexSet missing = ~e.row(i);
    for (auto j = missing.find_first(); j != VertexSet::npos; j = missing.find_next(j))
      first_missing = std::min(first_missing, space.rank(i, static_cast<Vertex>(j)));
  }
  if (first_missing == std::numeric_limits<int>::max()) return std::nullopt;
  return space.distance_values()[static_cast<std::size_t>(first_missing)];
}

std::optional<Rational> sigma(const Entourage& e) {
  const auto u = sigma_units(e);
  if (!u) return std::nullopt;
  return e.space()->to_rational(*u);
}

VertexSet ball(const Entourage& e, Vertex x) {
  if (x >= e.size())
    throw Error(ErrorKind::BadVertex, "vertex " + std::to_string(x) + " out of range",
                static_cast<long>(x));
  return e.row(x);
}

VertexSet reach_within(const Entourage& edges, Vertex from, const VertexSet& allowed) {
  VertexSet reached(edges.size());
  reached.set(from);
  VertexSet frontier = reached;
  while (frontier.any()) {
    VertexSet next(edges.size());
    for (auto v = frontier.find_first(); v != VertexSet::npos; v = frontier.find_next(v))
      next |= edges.row(static_cast<Vertex>(v));
    next &= allowed;
    next -= reached;
    reached |= next;
    frontier = std::move(next);
  }
  return reached;
}

ChainedResult is_chained(const Entourage& e) {
  const Entourage base = base_entourage(e.space());
  for (Vertex x = 0; x < e.size(); ++x) {
    const VertexSet& bx = e.row(x);
    for (auto y = bx.find_next(x); y != VertexSet::npos; y = bx.find_next(y)) {
      // Adjacent at the base scale needs no search.
      if (base.contains(x, static_cast<Vertex>(y))) continue;
      const VertexSet allowed = bx & e.row(static_cast<Vertex>(y));
      if (!reach_within(base, x, allowed).test(y))
        return {false, std::make_pair(x, static_cast<Vertex>(y))};
    }
  }
  return {};
}

}  // namespace dhtk
