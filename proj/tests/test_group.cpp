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

#include <random>

#include "dhtk/group.hpp"
#include "oracles.hpp"

using namespace dhtk;

namespace {

Symbol g(int i) { return symbol_of(static_cast<std::size_t>(i)); }
Symbol G(int i) { return symbol_of(static_cast<std::size_t>(i), true); }

Word rotate(const Word& w, std::size_t k) {
  Word out(w.begin() + static_cast<long>(k), w.end());
  out.insert(out.end(), w.begin(), w.begin() + static_cast<long>(k));
  return out;
}

std::vector<std::vector<std::int64_t>> relator_matrix(const std::vector<Word>& rels, int gens) {
  std::vector<std::vector<std::int64_t>> m;
  for (const auto& r : rels) {
    std::vector<std::int64_t> row(gens, 0);
    for (Symbol s : r) row[generator_of(s)] += s > 0 ? 1 : -1;
    m.push_back(row);
  }
  return m;
}

std::vector<std::int64_t> torsion_of(const AbelianInvariants& inv) {
  std::vector<std::int64_t> out;
  for (const auto& t : inv.torsion) out.push_back(static_cast<std::int64_t>(t));
  return out;
}

/// Determinant by fraction-exact elimination.
Rational determinant(const std::vector<std::vector<BigInt>>& m) {
  const std::size_t n = m.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = Rational(m[i][j]);
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const Rational f = a[r][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return det;
}

}  // namespace

TEST_CASE("word reduction") {
  CHECK(free_reduce({g(0), G(0)}).empty());
  CHECK(free_reduce({g(0), g(1), G(1), g(2)}) == Word{g(0), g(2)});
  CHECK(cyclic_reduce({G(0), g(1), g(0)}) == Word{g(1)});
  CHECK(inverse({g(0), G(1)}) == Word{g(1), G(0)});
  const Word w{g(0), g(1), G(2), g(1)};
  for (std::size_t k = 0; k < w.size(); ++k) {
    CHECK(canonical_relator(rotate(w, k)) == canonical_relator(w));
    CHECK(canonical_relator(inverse(rotate(w, k))) == canonical_relator(w));
    CHECK(canonical_cyclic(rotate(w, k)) == canonical_cyclic(w));
  }
  CHECK(canonical_relator(w) != canonical_relator({g(0), g(1), g(2), g(1)}));
}

TEST_CASE("Smith normal form matches the elimination oracle") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 200; ++t) {
    const int rows = 1 + static_cast<int>(rng() % 6);
    const int cols = 1 + static_cast<int>(rng() % 6);
    std::vector<std::vector<std::int64_t>> m(rows, std::vector<std::int64_t>(cols));
    std::vector<std::vector<BigInt>> b(rows, std::vector<BigInt>(cols));
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) b[i][j] = m[i][j] = static_cast<std::int64_t>(rng() % 9) - 4;
    const auto [rank, torsion] = oracle::abelian_invariants(m, cols);
    const AbelianInvariants inv = abelian_invariants(b, cols);
    CHECK(inv.rank == static_cast<std::size_t>(rank));
    CHECK(torsion_of(inv) == torsion);
    for (std::size_t k = 1; k < inv.torsion.size(); ++k) CHECK(inv.torsion[k] % inv.torsion[k - 1] == 0);

    const SmithForm snf = smith_normal_form(b, cols);
    CHECK(abs(determinant(snf.column_transform)) == 1);
  }
}

TEST_CASE("small presentations") {
  const ReducedGroup free2(2, {});
  CHECK(free2.shape() == GroupShape::Free);
  CHECK(free2.invariants().rank == 2);
  CHECK(free2.has_faithful_key());
  CHECK_FALSE(free2.key_is_h1());
  CHECK(free2.reduced_word({g(0), g(1), G(0)})->size() == 3);

  const ReducedGroup z3(1, {{g(0), g(0), g(0)}});
  CHECK(z3.shape() == GroupShape::Cyclic);
  CHECK(torsion_of(z3.invariants()) == std::vector<std::int64_t>{3});
  CHECK(z3.h1_image({g(0), g(0), g(0), g(0)}) == z3.h1_image({g(0)}));

  const ReducedGroup z2(2, {{g(0), g(1), G(0), G(1)}});
  CHECK(z2.shape() == GroupShape::Abelian);
  CHECK(z2.invariants().rank == 2);
  CHECK(z2.invariants().torsion.empty());

  const ReducedGroup collapsed(2, {{g(0), g(1)}});
  CHECK(collapsed.invariants().rank == 1);
  CHECK(collapsed.h1_image({g(0), g(1)}) == std::vector<std::int64_t>(collapsed.h1_dimension(), 0));

  const ReducedGroup trivial(3, {{g(0)}, {g(1), G(2)}, {g(2), g(0)}});
  CHECK(trivial.shape() == GroupShape::Trivial);
  CHECK(trivial.invariants().trivial());

  const ReducedGroup general(2, {{g(0), g(0), g(1), g(1), g(1)}});
  CHECK(general.shape() == GroupShape::General);
  CHECK_FALSE(general.has_faithful_key());
}

TEST_CASE("reduced groups agree with the relator-matrix oracle") {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 300; ++t) {
    const int gens = 1 + static_cast<int>(rng() % 6);
    const int nrel = static_cast<int>(rng() % 7);
    std::vector<Word> rels;
    for (int r = 0; r < nrel; ++r) {
      Word w;
      const int len = 1 + static_cast<int>(rng() % 4);
      for (int k = 0; k < len; ++k) {
        const int gi = static_cast<int>(rng() % gens);
        w.push_back(rng() % 2 ? g(gi) : G(gi));
      }
      rels.push_back(w);
    }
    const ReducedGroup group(static_cast<std::size_t>(gens), rels);
    const auto [rank, torsion] = oracle::abelian_invariants(relator_matrix(rels, gens), gens);
    CHECK(group.invariants().rank == static_cast<std::size_t>(rank));
    CHECK(torsion_of(group.invariants()) == torsion);

    const std::vector<std::int64_t> zero(group.h1_dimension(), 0);
    for (const auto& r : rels) {
      CHECK(group.h1_image(r) == zero);
      if (group.has_words() && group.shape() == GroupShape::Free) CHECK(group.reduced_word(r)->empty());
    }
    // h1_image is additive.
    Word a, b;
    for (int k = 0; k < 5; ++k) {
      a.push_back(rng() % 2 ? g(static_cast<int>(rng() % gens)) : G(static_cast<int>(rng() % gens)));
      b.push_back(rng() % 2 ? g(static_cast<int>(rng() % gens)) : G(static_cast<int>(rng() % gens)));
    }
    Word ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    std::vector<std::int64_t> sum = group.h1_image(a);
    const auto hb = group.h1_image(b);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += hb[i];
    group.h1_normalize(sum);
    CHECK(group.h1_image(ab) == sum);
    if (group.has_words()) {
      Word wa = *group.reduced_word(a), wb = *group.reduced_word(b);
      wa.insert(wa.end(), wb.begin(), wb.end());
      CHECK(free_reduce(wa) == *group.reduced_word(ab));
    }
  }
}
