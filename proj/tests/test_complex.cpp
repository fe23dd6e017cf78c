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

#include "dhtk/complex.hpp"
#include "dhtk/error.hpp"
#include "dhtk/sampling.hpp"
#include "oracles.hpp"

using namespace dhtk;

namespace {

Rational q(std::int64_t a, std::int64_t b = 1) { return make_rational(a, b); }

const SpacePtr& c12() {
  static const SpacePtr s = generate(CircleParams{12, q(1)});
  return s;
}

EntouragePtr closed(const SpacePtr& s, const Rational& eps) { return share(metric_entourage(s, eps, false)); }

std::vector<Vertex> full_turn(Vertex n) {
  std::vector<Vertex> out(n + 1);
  std::iota(out.begin(), out.end() - 1, 0);
  out.back() = 0;
  return out;
}

bool is_zero(const std::vector<std::int64_t>& v) {
  return std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; });
}

bool replays_to_constant(const MoveSequence& m, const Chain& loop) {
  return m.start.points() == loop.points() && verify(m) && m.end.is_constant() &&
         replay(m.start, m.moves).points() == m.end.points();
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

TEST_CASE("presentation counts") {
  const GroupPresentation p1 = build_presentation(closed(c12(), q(1, 12)));
  CHECK(p1.edge_count() == 12);
  CHECK(p1.generators().size() == 1);
  CHECK(p1.triads().empty());
  CHECK(p1.group().invariants().rank == 1);

  const GroupPresentation p2 = build_presentation(closed(c12(), q(1, 6)));
  CHECK(p2.edge_count() == 24);
  CHECK(p2.generators().size() == 13);
  CHECK(p2.triads().size() == 12);

  const SpacePtr tri = from_distance_matrix({{q(0), q(1), q(1)}, {q(1), q(0), q(1)}, {q(1), q(1), q(0)}});
  const GroupPresentation p3 = build_presentation(share(full_entourage(tri)));
  CHECK(p3.edge_count() == 3);
  CHECK(p3.generators().size() == 1);
  CHECK(p3.triads().size() == 1);
  CHECK(p3.group().shape() == GroupShape::Trivial);
  CHECK(h1(p3).trivial());
}

TEST_CASE("presentation structure matches enumeration") {
  Rng rng(41);
  for (const auto& [name, space] : sample_spaces(rng)) {
    for (int t = 0; t < 3; ++t) {
      const EntouragePtr e = share(t == 0 ? base_entourage(space) : random_chained_entourage(space, rng, 2, 4));
      const GroupPresentation p = build_presentation(e);
      const Vertex n = static_cast<Vertex>(space->size());
      std::size_t edges = 0, tree = 0, triads = 0;
      for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j) {
          if (!e->contains(i, j)) continue;
          ++edges;
          const bool is_tree = p.parent(j) == i || p.parent(i) == j;
          tree += is_tree;
          CHECK((p.step_symbol(i, j) == 0) == is_tree);
          CHECK(p.step_symbol(i, j) == -p.step_symbol(j, i));
          for (Vertex k = j + 1; k < n; ++k) triads += e->contains(i, k) && e->contains(j, k);
        }
      CHECK(p.edge_count() == edges);
      CHECK(tree == n - 1);
      CHECK(p.generators().size() == edges - tree);
      CHECK(p.triads().size() == triads);
      CHECK(std::is_sorted(p.triads().begin(), p.triads().end()));
      for (std::size_t k = 0; k < p.triads().size(); ++k) {
        const Triad& tr = p.triads()[k];
        CHECK(canonical_relator(loop_word(p, {tr[0], tr[1], tr[2], tr[0]})) ==
              canonical_relator(p.relators()[k]));
      }
      // The group abelianizes like the full relator matrix.
      std::vector<std::vector<std::int64_t>> m;
      for (const auto& r : p.relators()) {
        std::vector<std::int64_t> row(p.generators().size(), 0);
        for (Symbol s : r) row[generator_of(s)] += s > 0 ? 1 : -1;
        m.push_back(row);
      }
      const auto [rank, torsion] = oracle::abelian_invariants(m, static_cast<int>(p.generators().size()));
      CHECK(h1(p).rank == static_cast<std::size_t>(rank));
      CHECK(h1(p).torsion.size() == torsion.size());
    }
  }
}

TEST_CASE("loop words") {
  const GroupPresentation p = build_presentation(closed(c12(), q(1, 12)));
  const EntouragePtr e = p.entourage();
  CHECK(loop_word(p, validate_chain(e, {4})).empty());
  const Word w = loop_word(p, validate_chain(e, full_turn(12)));
  CHECK(w.size() == 1);
  const Chain a = validate_chain(e, {3, 4, 5, 6, 5, 4, 3});
  CHECK(loop_word(p, a).empty());
  const Chain turn = validate_chain(e, full_turn(12));
  CHECK(loop_word(p, concat(turn, reverse(turn))).empty());
  CHECK(kind_of([&] { loop_word(p, validate_chain(e, {0, 1})); }) == ErrorKind::NotALoop);

  Rng rng(43);
  for (const auto& [name, space] : sample_spaces(rng)) {
    const EntouragePtr f = share(random_chained_entourage(space, rng, 2, 4));
    const GroupPresentation pf = build_presentation(f);
    for (int t = 0; t < 10; ++t) {
      const Chain x = validate_chain(f, random_loop(*f, pick(rng, 10), rng));
      std::vector<Vertex> ypts = random_loop(*f, pick(rng, 10), rng);
      // Re-base y at x's basepoint through a path and back.
      const auto to = hop_path(*f, x.front(), ypts.front());
      std::vector<Vertex> yb(to);
      yb.insert(yb.end(), ypts.begin() + 1, ypts.end());
      yb.insert(yb.end(), to.rbegin() + 1, to.rend());
      const Chain y = validate_chain(f, yb);
      Word xy = loop_word(pf, x);
      const Word wy = loop_word(pf, y);
      xy.insert(xy.end(), wy.begin(), wy.end());
      CHECK(loop_word(pf, concat(x, y)) == free_reduce(xy));
      CHECK(loop_word(pf, reverse(x)) == inverse(loop_word(pf, x)));
    }
  }
}

TEST_CASE("abelian invariants of sample complexes") {
  CHECK(h1(build_presentation(closed(c12(), q(1, 6)))).rank == 1);
  CHECK(h1(build_presentation(closed(c12(), q(1, 6)))).torsion.empty());
  const SpacePtr torus = generate(TorusParams{8, 8, q(1), q(1), true});
  const AbelianInvariants t = h1(build_presentation(closed(torus, q(1, 4))));
  CHECK(t.rank == 2);
  CHECK(t.torsion.empty());
  CHECK(h1(build_presentation(closed(c12(), q(1, 3)))).trivial());
}

TEST_CASE("12x13 relator matrix at the 1/6 scale") {
  const GroupPresentation p = build_presentation(closed(c12(), q(1, 6)));
  std::vector<std::vector<std::int64_t>> m;
  for (const auto& r : p.relators()) {
    std::vector<std::int64_t> row(13, 0);
    for (Symbol s : r) row[generator_of(s)] += s > 0 ? 1 : -1;
    m.push_back(row);
  }
  CHECK(m.size() == 12);
  const auto [rank, torsion] = oracle::abelian_invariants(m, 13);
  CHECK(rank == 1);
  CHECK(torsion.empty());
}

TEST_CASE("decide_null examples") {
  const GroupPresentation p6 = build_presentation(closed(c12(), q(1, 6)));
  const NullityVerdict constant = decide_null(p6, validate_chain(p6.entourage(), {5}));
  CHECK(constant.verdict == Verdict::Null);
  REQUIRE(constant.certificate.has_value());
  CHECK(constant.certificate->moves.empty());

  const Chain turn6 = validate_chain(p6.entourage(), full_turn(12));
  const NullityVerdict v6 = decide_null(p6, turn6);
  CHECK(v6.verdict == Verdict::NonNull);
  CHECK(v6.strategy == Strategy::Abelianization);
  REQUIRE(v6.h1.size() == 1);
  CHECK(std::abs(v6.h1[0]) == 1);

  const GroupPresentation p25 = build_presentation(closed(c12(), q(2, 5)));
  const Chain turn25 = validate_chain(p25.entourage(), full_turn(12));
  const NullityVerdict v25 = decide_null(p25, turn25);
  CHECK(v25.verdict == Verdict::Null);
  REQUIRE(v25.certificate.has_value());
  CHECK(replays_to_constant(*v25.certificate, turn25));

  const GroupPresentation p1 = build_presentation(closed(c12(), q(1, 12)));
  const NullityVerdict free_v = decide_null(p1, validate_chain(p1.entourage(), full_turn(12)));
  CHECK(free_v.verdict == Verdict::NonNull);

  CHECK(kind_of([&] { decide_null(p6, validate_chain(p6.entourage(), {0, 1})); }) == ErrorKind::NotALoop);
  CHECK(kind_of([] { build_presentation(share(custom_entourage(c12(), {{0, 6}}))); }) == ErrorKind::NotChained);
  CHECK(kind_of([] { build_presentation(share(identity_entourage(c12()))); }) == ErrorKind::NotConnected);
}

TEST_CASE("strategies never contradict and certificates check out") {
  Rng rng(47);
  const StrategyMask masks[] = {{true, true, true}, {true, false, false}, {false, true, false}, {false, false, true}};
  for (const auto& [name, space] : sample_spaces(rng)) {
    for (int t = 0; t < 6; ++t) {
      const EntouragePtr e = share(t % 2 ? random_chained_entourage(space, rng, 2, 5)
                                         : random_metric_entourage(space, rng));
      if (!is_chained(*e)) continue;
      const GroupPresentation p = build_presentation(e);
      for (int s = 0; s < 4; ++s) {
        const Chain loop = validate_chain(e, random_loop(*e, pick(rng, 10), rng));
        bool null = false, nonnull = false;
        for (const auto& mask : masks) {
          const NullityVerdict v = decide_null(p, loop, 20000, mask);
          if (v.verdict == Verdict::Null) {
            null = true;
            REQUIRE(v.certificate.has_value());
            CHECK(replays_to_constant(*v.certificate, loop));
          } else if (v.verdict == Verdict::NonNull) {
            nonnull = true;
            if (!v.h1.empty()) {
              CHECK_FALSE(is_zero(v.h1));
              CHECK(p.group().h1_image(loop_word(p, loop)) == v.h1);
            } else {
              CHECK_FALSE(v.word.empty());
            }
          }
        }
        CHECK_FALSE((null && nonnull));
        if (const auto structural = null_by_structure(p, loop.points())) {
          CHECK_FALSE((*structural && nonnull));
          CHECK_FALSE((!*structural && null));
        }
      }
    }
  }
}

TEST_CASE("legal moves preserve the class") {
  Rng rng(53);
  for (const auto& [name, space] : sample_spaces(rng)) {
    const EntouragePtr e = share(random_chained_entourage(space, rng, 3, 5));
    const GroupPresentation p = build_presentation(e);
    for (int t = 0; t < 20; ++t) {
      std::vector<Vertex> pts = random_loop(*e, 2 + pick(rng, 8), rng);
      const Word before = loop_word(p, pts);
      Move m = Move::remove(0);
      bool found = false;
      for (int tries = 0; tries < 20 && !found; ++tries) {
        if (pick(rng, 2) == 0 && pts.size() > 2) m = Move::remove(1 + pick(rng, pts.size() - 2));
        else m = Move::insert(1 + pick(rng, pts.size() - 1), static_cast<Vertex>(pick(rng, space->size())));
        found = move_is_legal(*e, pts, m);
      }
      if (!found) continue;
      apply_move_inplace(*e, pts, m);
      const Word after = loop_word(p, pts);
      CHECK(p.group().h1_image(before) == p.group().h1_image(after));
      if (p.relators().empty()) CHECK(free_reduce(before) == free_reduce(after));
      if (p.group().has_words() && p.group().shape() == GroupShape::Free)
        CHECK(*p.group().reduced_word(before) == *p.group().reduced_word(after));
    }
  }
}

TEST_CASE("short loops at the strict scale are null") {
  Rng rng(59);
  for (const auto& [name, space] : sample_spaces(rng)) {
    const auto& values = space->distance_values();
    for (std::size_t k = 1; k < values.size(); ++k) {
      const Rational eps = space->to_rational(values[k]);
      const EntouragePtr e = share(metric_entourage(space, eps, true));
      if (!is_chained(*e)) continue;
      const GroupPresentation p = build_presentation(e);
      for (int t = 0; t < 5; ++t) {
        // Triangles with all sides below eps have length below 3 eps.
        const auto a = static_cast<Vertex>(pick(rng, space->size()));
        const VertexSet& row = e->row(a);
        std::vector<Vertex> nb;
        for (auto v = row.find_first(); v != VertexSet::npos; v = row.find_next(v)) nb.push_back(static_cast<Vertex>(v));
        const Vertex b = nb[pick(rng, nb.size())], c = nb[pick(rng, nb.size())];
        if (!e->contains(b, c)) continue;
        const Chain loop = validate_chain(e, {a, b, c, a});
        CHECK(loop.length() < 3 * eps);
        const NullityVerdict v = decide_null(p, loop);
        CHECK(v.verdict == Verdict::Null);
        if (v.certificate) CHECK(replays_to_constant(*v.certificate, loop));
      }
    }
  }
}

TEST_CASE("kernel generators on the 12-point circle") {
  const GroupPresentation fine = build_presentation(closed(c12(), q(1, 6)));
  for (const auto& gen : kernel_generators(fine, fine.entourage()))
    CHECK(decide_null(fine, gen.loop).verdict == Verdict::Null);

  const auto gens = kernel_generators(fine, closed(c12(), q(2, 5)));
  bool generator_found = false;
  for (const auto& gen : gens) {
    const auto img = h1_image(fine, gen.loop);
    if (img.size() == 1 && std::abs(img[0]) == 1) generator_found = true;
    CHECK(gen.loop.front() == fine.basepoint());
    CHECK(gen.loop.is_loop());
  }
  CHECK(generator_found);

  const EntouragePtr d4 = closed(c12(), q(1, 4));
  for (const auto& gen : kernel_generators(fine, d4)) {
    CHECK(is_zero(h1_image(fine, gen.loop)));
    const NullityVerdict v = decide_null(fine, gen.loop);
    CHECK(v.verdict == Verdict::Null);
    const MoveSequence m = contract_refined_triad(gen, d4, fine.entourage());
    CHECK(verify(m));
    CHECK(m.end.is_constant());
  }
}
