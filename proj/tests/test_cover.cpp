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

#include <numeric>

#include "dhtk/cover.hpp"
#include "dhtk/error.hpp"
#include "dhtk/sampling.hpp"

using namespace dhtk;

namespace {

Rational q(std::int64_t a, std::int64_t b = 1) { return make_rational(a, b); }

SpacePtr circle(int n) { return generate(CircleParams{n, q(1)}); }

EntouragePtr closed(const SpacePtr& s, const Rational& eps) { return share(metric_entourage(s, eps, false)); }

std::vector<Vertex> full_turn(Vertex n) {
  std::vector<Vertex> out(n + 1);
  std::iota(out.begin(), out.end() - 1, 0);
  out.back() = 0;
  return out;
}

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::Unsupported;
}

}  // namespace

TEST_CASE("trivial covers") {
  const SpacePtr tri = from_distance_matrix({{q(0), q(1), q(1)}, {q(1), q(0), q(1)}, {q(1), q(1), q(0)}});
  CHECK(build_cover_ball(share(full_entourage(tri)), q(10)).points().size() == 3);
  const SpacePtr c12 = circle(12);
  const CoverBall cb = build_cover_ball(closed(c12, q(2, 5)), q(10));
  CHECK(cb.points().size() == 12);
  for (Vertex v = 0; v < 12; ++v) CHECK(cb.fiber(v).size() == 1);
}

TEST_CASE("universal cover of the 12-point circle") {
  const SpacePtr c12 = circle(12);
  const CoverBall cb = build_cover_ball(closed(c12, q(1, 6)), q(3, 2));
  // The line unrolled: lifts at positions -18..18 in steps of 1/12.
  CHECK(cb.points().size() == 37);
  const auto lifts = cb.fiber(0);
  REQUIRE(lifts.size() == 3);
  std::vector<Rational> d;
  for (LiftId id : lifts) d.push_back(c12->to_rational(cb.points()[id].distance));
  std::sort(d.begin(), d.end());
  CHECK(d == std::vector<Rational>{q(0), q(1), q(1)});
  for (LiftId id : lifts)
    if (id != cb.basepoint_lift()) CHECK(lifted_distance(cb, cb.basepoint_lift(), id).value == 1);
  CHECK(lifted_distance(cb, 5, 5).value == 0);
}

TEST_CASE("lifting chains") {
  const SpacePtr c12 = circle(12);
  const EntouragePtr e = closed(c12, q(1, 6));
  const CoverBall cb = build_cover_ball(e, q(3, 2));
  const auto constant = lift_chain(cb, validate_chain(e, {0, 0, 0}), cb.basepoint_lift());
  CHECK(std::all_of(constant.begin(), constant.end(), [&](LiftId x) { return x == cb.basepoint_lift(); }));

  const auto turn = lift_chain(cb, validate_chain(e, full_turn(12)), cb.basepoint_lift());
  CHECK(turn.back() != cb.basepoint_lift());
  CHECK(cb.points()[turn.back()].base == 0);

  const auto there_and_back = lift_chain(cb, validate_chain(e, {0, 2, 4, 3, 1, 0}), cb.basepoint_lift());
  CHECK(there_and_back.back() == cb.basepoint_lift());

  CHECK(kind_of([&] { lift_chain(cb, validate_chain(e, {1, 2}), cb.basepoint_lift()); }) ==
        ErrorKind::BasepointMismatch);
  std::vector<Vertex> twice = full_turn(12);
  const auto again = full_turn(12);
  twice.insert(twice.end(), again.begin() + 1, again.end());
  CHECK(kind_of([&] { lift_chain(cb, validate_chain(e, twice), cb.basepoint_lift()); }) ==
        ErrorKind::RadiusExceeded);
}

TEST_CASE("local isometry, neighbour injectivity and deck action") {
  Rng rng(61);
  for (const auto& [name, space] : sample_spaces(rng)) {
    for (int t = 0; t < 3; ++t) {
      const EntouragePtr e = share(t == 0 ? base_entourage(space) : random_chained_entourage(space, rng, 2, 4));
      const CoverBall cb = build_cover_ball(e, space->diameter() * 2);
      for (const auto& edge : cb.edges()) {
        const Vertex a = cb.points()[edge.from].base, b = cb.points()[edge.to].base;
        CHECK(edge.length == space->units(a, b));
        CHECK(e->contains(a, b));
      }
      for (LiftId id = 0; id < cb.points().size(); ++id) {
        std::set<Vertex> seen;
        for (const auto& [v, other] : cb.neighbours(id)) {
          CHECK(seen.insert(v).second);
          CHECK(cb.points()[other].base == v);
        }
      }
      // Lifting a loop then a chain equals lifting the concatenation.
      for (int s = 0; s < 5; ++s) {
        const Chain loop = validate_chain(e, random_loop(*e, pick(rng, 4), rng));
        std::vector<Vertex> pts = hop_path(*e, 0, loop.front());
        const auto back = hop_path(*e, loop.front(), 0);
        std::vector<Vertex> based = pts;
        based.insert(based.end(), loop.points().begin() + 1, loop.points().end());
        based.insert(based.end(), back.begin() + 1, back.end());
        const Chain lambda = validate_chain(e, based);
        const Chain alpha = validate_chain(e, random_walk(*e, 0, pick(rng, 4), rng));
        try {
          const auto l1 = lift_chain(cb, lambda, cb.basepoint_lift());
          const auto l2 = lift_chain(cb, alpha, l1.back());
          const auto l12 = lift_chain(cb, concat(lambda, alpha), cb.basepoint_lift());
          CHECK(l2.back() == l12.back());
        } catch (const Error& err) {
          CHECK(err.kind() == ErrorKind::RadiusExceeded);
        }
      }
      // Every base vertex has a lift over each deck translate near the basepoint.
      const Units inner = cb.radius_units() - space->diameter_units();
      std::size_t near = 0;
      for (LiftId id : cb.fiber(0)) near += cb.points()[id].distance <= inner;
      for (Vertex v = 0; v < space->size(); ++v) CHECK(cb.fiber(v).size() >= near);
    }
  }
}

TEST_CASE("lifted distance matches base distance on lifted edges") {
  Rng rng(67);
  for (const auto& [name, space] : sample_spaces(rng)) {
    const EntouragePtr e = share(random_chained_entourage(space, rng, 1, 4));
    const CoverBall cb = build_cover_ball(e, space->diameter() * 2);
    for (int s = 0; s < 20 && !cb.edges().empty(); ++s) {
      const LiftedEdge& edge = cb.edges()[pick(rng, cb.edges().size())];
      const LiftedDistance d = lifted_distance(cb, edge.from, edge.to);
      const Units base = space->units(cb.points()[edge.from].base, cb.points()[edge.to].base);
      if (d.exact) CHECK(d.units == base);
      CHECK(d.units <= base);
    }
  }
}

TEST_CASE("cover equivalence examples") {
  const SpacePtr c12 = circle(12);
  const EntouragePtr e = closed(c12, q(1, 6));
  CHECK(covers_equivalent(e, e) == Equivalence::Equivalent);

  const SpacePtr c60 = circle(60);
  CHECK(covers_equivalent(closed(c60, q(1, 5)), closed(c60, q(1, 4))) == Equivalence::Equivalent);
  CHECK(covers_equivalent(closed(c60, q(1, 4)), closed(c60, q(2, 5))) == Equivalence::Inequivalent);
  CHECK(kind_of([&] { covers_equivalent(e, share(custom_entourage(c12, {{0, 6}}))); }) == ErrorKind::NotChained);
}

TEST_CASE("every chained entourage on a circle gives the trivial or the universal cover") {
  Rng rng(71);
  for (int n : {9, 12, 20}) {
    const SpacePtr s = circle(n);
    const EntouragePtr base = share(base_entourage(s));
    const EntouragePtr full = share(full_entourage(s));
    for (int t = 0; t < 12; ++t) {
      const EntouragePtr e = share(t % 2 ? random_chained_entourage(s, rng, 1 + pick(rng, 3), 1 + pick(rng, n))
                                         : random_metric_entourage(s, rng));
      const Equivalence to_base = covers_equivalent(e, base);
      const Equivalence to_full = covers_equivalent(e, full);
      CHECK(to_base != Equivalence::Unknown);
      CHECK(to_full != Equivalence::Unknown);
      CHECK(((to_base == Equivalence::Equivalent) != (to_full == Equivalence::Equivalent)));
    }
  }
}
