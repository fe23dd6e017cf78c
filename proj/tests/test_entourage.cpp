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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dhtk/entourage.hpp"
#include "dhtk/error.hpp"
#include "dhtk/sampling.hpp"
#include "oracles.hpp"

using namespace dhtk;

namespace {

Rational q(std::int64_t a, std::int64_t b = 1) { return make_rational(a, b); }

oracle::Relation relation_of(const Entourage& e) {
  oracle::Relation r;
  for (Vertex i = 0; i < e.size(); ++i)
    for (Vertex j = 0; j < e.size(); ++j)
      if (e.contains(i, j)) r.insert({static_cast<int>(i), static_cast<int>(j)});
  return r;
}

std::set<Vertex> members(const VertexSet& s) {
  std::set<Vertex> out;
  for (auto v = s.find_first(); v != VertexSet::npos; v = s.find_next(v)) out.insert(static_cast<Vertex>(v));
  return out;
}

const SpacePtr& c12() {
  static const SpacePtr s = generate(CircleParams{12, q(1)});
  return s;
}

}  // namespace

TEST_CASE("metric entourages on the 12-point circle") {
  const Entourage strict = metric_entourage(c12(), q(1, 12), true);
  for (Vertex x = 0; x < 12; ++x) CHECK(strict.row(x).count() == 1);
  const Entourage closed = metric_entourage(c12(), q(1, 12), false);
  for (Vertex x = 0; x < 12; ++x) CHECK(closed.row(x).count() == 3);
  const Entourage e = metric_entourage(c12(), q(3, 10), true);
  for (Vertex x = 0; x < 12; ++x) CHECK(e.row(x).count() == 7);
  CHECK(members(ball(e, 0)) == std::set<Vertex>{9, 10, 11, 0, 1, 2, 3});
  CHECK_THROWS_AS(metric_entourage(c12(), q(0), true), Error);
  CHECK_THROWS_AS(ball(e, 12), Error);
}

TEST_CASE("metric entourage relation matches a distance scan") {
  Rng rng(3);
  for (const auto& [name, space] : sample_spaces(rng)) {
    for (Units u : space->distance_values()) {
      const Rational eps = space->to_rational(u);
      const Entourage open = metric_entourage(space, eps, true);
      const Entourage closed = metric_entourage(space, eps, false);
      for (Vertex i = 0; i < space->size(); ++i)
        for (Vertex j = 0; j < space->size(); ++j) {
          CHECK(open.contains(i, j) == (space->distance(i, j) < eps));
          CHECK(closed.contains(i, j) == (space->distance(i, j) <= eps));
        }
    }
  }
}

TEST_CASE("composition") {
  const Entourage id = identity_entourage(c12());
  CHECK(compose(id, 5).same_relation(id));
  const Entourage base = metric_entourage(c12(), q(1, 12), false);
  CHECK(compose(base, 6).is_full());
  CHECK_FALSE(compose(base, 5).is_full());
  CHECK(compose(base, 1).same_relation(base));

  Rng rng(5);
  for (const auto& [name, space] : sample_spaces(rng)) {
    const Entourage e = random_chained_entourage(space, rng, 2, 4);
    const auto r = relation_of(e);
    for (int k = 1; k <= 4; ++k) {
      const Entourage p = compose(e, k);
      CHECK(relation_of(p) == oracle::power(r, static_cast<int>(space->size()), k));
      CHECK(compose(e, k).is_subset_of(compose(e, k + 1)));
    }
    CHECK(compose(e, static_cast<int>(space->size())).same_relation(compose(e, static_cast<int>(space->size()) + 3)));
  }
}

TEST_CASE("union and intersection") {
  const Entourage a = metric_entourage(c12(), q(1, 12), false);
  const Entourage b = metric_entourage(c12(), q(1, 6), false);
  CHECK(entourage_union({a}).same_relation(a));
  CHECK(entourage_union({a, b}).same_relation(b));
  CHECK(intersect(a, b).same_relation(a));

  const Entourage p = custom_entourage(c12(), {{0, 5}});
  const Entourage r = custom_entourage(c12(), {{3, 9}});
  const Entourage u = entourage_union({p, r});
  CHECK(u.contains(0, 5));
  CHECK(u.contains(9, 3));
  for (Vertex x = 0; x < 12; ++x) CHECK(u.row(x) == (p.row(x) | r.row(x)));

  const SpacePtr other = generate(CircleParams{12, q(1)});
  CHECK_THROWS_AS(entourage_union({a, base_entourage(other)}), Error);
  try {
    entourage_union({a, base_entourage(other)});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MixedSpaces);
  }
}

TEST_CASE("custom entourages are symmetric and reflexive") {
  const Entourage e = custom_entourage(c12(), {{2, 7}});
  CHECK(e.contains(7, 2));
  for (Vertex x = 0; x < 12; ++x) CHECK(e.contains(x, x));
  CHECK(e.provenance().kind == Provenance::Kind::Custom);
  CHECK_THROWS_AS(custom_entourage(c12(), {{0, 12}}), Error);
}

TEST_CASE("sigma") {
  CHECK_FALSE(sigma(full_entourage(c12())).has_value());
  CHECK(*sigma(metric_entourage(c12(), q(3, 10), true)) == q(1, 3));
  CHECK(*sigma(identity_entourage(c12())) == q(1, 12));

  Rng rng(9);
  for (const auto& [name, space] : sample_spaces(rng)) {
    for (Units u : space->distance_values()) {
      const Rational eps = space->to_rational(u);
      const auto s = sigma(metric_entourage(space, eps, true));
      CHECK((!s || *s >= eps));
    }
    // Scan oracle on random chained members.
    for (int t = 0; t < 5; ++t) {
      const Entourage e = random_chained_entourage(space, rng, 3, 5);
      std::optional<Rational> expected;
      for (Units u : space->distance_values()) {
        bool missing = false;
        for (Vertex i = 0; i < space->size() && !missing; ++i)
          for (Vertex j = 0; j < space->size() && !missing; ++j)
            missing = space->units(i, j) == u && !e.contains(i, j);
        if (missing) {
          expected = space->to_rational(u);
          break;
        }
      }
      CHECK(sigma(e) == expected);
    }
  }
}

TEST_CASE("ball monotonicity for nested metric entourages") {
  Rng rng(13);
  for (const auto& [name, space] : sample_spaces(rng)) {
    const auto& v = space->distance_values();
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
      const Entourage a = closed_entourage_units(space, v[k]);
      const Entourage b = closed_entourage_units(space, v[k + 1]);
      for (Vertex x = 0; x < space->size(); ++x) CHECK(ball(a, x).is_subset_of(ball(b, x)));
    }
  }
}

TEST_CASE("chainedness") {
  for (int n : {5, 12, 17})
    for (Units u : generate(CircleParams{n, q(1)})->distance_values()) {
      const SpacePtr s = generate(CircleParams{n, q(1)});
      CHECK(is_chained(closed_entourage_units(s, u)).chained);
    }
  const ChainedResult bad = is_chained(custom_entourage(c12(), {{0, 6}}));
  CHECK_FALSE(bad.chained);
  REQUIRE(bad.witness.has_value());
  CHECK(std::pair<Vertex, Vertex>(std::minmax(bad.witness->first, bad.witness->second)) == std::pair<Vertex, Vertex>{0, 6});
  CHECK(is_chained(identity_entourage(c12())).chained);

  Rng rng(17);
  for (const auto& [name, space] : sample_spaces(rng)) {
    const auto base = relation_of(base_entourage(space));
    const int n = static_cast<int>(space->size());
    for (int t = 0; t < 6; ++t) {
      const Entourage e = t % 2 ? random_chained_entourage(space, rng, 2, 6)
                                : custom_entourage(space, {{static_cast<Vertex>(pick(rng, n)),
                                                            static_cast<Vertex>(pick(rng, n))}});
      CHECK(is_chained(e).chained == oracle::chained(relation_of(e), base, n));
    }
    // Unions of chained members stay chained.
    std::vector<Entourage> parts;
    for (int t = 0; t < 3; ++t) parts.push_back(random_chained_entourage(space, rng, 2, 5));
    CHECK(is_chained(entourage_union(parts)).chained);
  }
}
