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

#include "dhtk/error.hpp"
#include "dhtk/sampling.hpp"
#include "dhtk/spectra.hpp"

using namespace dhtk;

namespace {

Rational q(std::int64_t a, std::int64_t b = 1) { return make_rational(a, b); }

using Multiset = std::vector<std::pair<Rational, std::size_t>>;

Multiset values_of(const SpectrumReport& r) {
  Multiset out;
  for (const auto& v : r.values) out.emplace_back(v.value, v.multiplicity);
  return out;
}

/// First Betti number of the triad complex over Q: edges - (n - 1) - rank
/// of the triangle boundary matrix. Built from the distance table alone.
std::size_t betti1(const SpacePtr& s, Units bound) {
  const std::size_t n = s->size();
  std::map<std::pair<Vertex, Vertex>, std::size_t> edge;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j)
      if (s->units(i, j) <= bound) edge.emplace(std::make_pair(i, j), edge.size());
  std::vector<std::vector<Rational>> rows;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j)
      for (Vertex k = j + 1; k < n; ++k)
        if (s->units(i, j) <= bound && s->units(j, k) <= bound && s->units(i, k) <= bound) {
          std::vector<Rational> row(edge.size(), 0);
          row[edge[{i, j}]] += 1;
          row[edge[{j, k}]] += 1;
          row[edge[{i, k}]] -= 1;
          rows.push_back(std::move(row));
        }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < edge.size() && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r)
      if (rows[r][c] != 0) {
        const Rational f = rows[r][c] / rows[rank][c];
        for (std::size_t j = c; j < edge.size(); ++j) rows[r][j] -= f * rows[rank][j];
      }
    ++rank;
  }
  return edge.size() - (n - 1) - rank;
}

/// Values where the rational Betti number drops, with the size of the drop.
Multiset betti_scan(const SpacePtr& s) {
  Multiset out;
  const auto& v = s->distance_values();
  std::size_t prev = betti1(s, v[0]);
  for (std::size_t k = 1; k < v.size() && prev > 0; ++k) {
    const std::size_t cur = betti1(s, v[k]);
    if (cur < prev) out.emplace_back(s->to_rational(v[k]), prev - cur);
    prev = cur;
  }
  return out;
}

SpacePtr wedge() { return generate(WedgeParams{{q(1), q(3, 2)}, {12, 18}}); }

}  // namespace

TEST_CASE("homotopy critical spectrum examples") {
  const SpacePtr c12 = generate(CircleParams{12, q(1)});
  const SpectrumReport hcs = homotopy_critical_spectrum(c12);
  CHECK(values_of(hcs) == Multiset{{q(1, 3), 1}});
  CHECK(hcs.completeness == Completeness::Exact);
  CHECK(values_of(hcs) == betti_scan(c12));

  const SpacePtr t6 = generate(TorusParams{6, 6, q(1), q(1), true});
  CHECK(values_of(homotopy_critical_spectrum(t6)) == Multiset{{q(1, 3), 2}});
  CHECK(betti_scan(t6) == Multiset{{q(1, 3), 2}});

  const SpacePtr t12 = generate(TorusParams{12, 12, q(1), q(1), true});
  CHECK(values_of(homotopy_critical_spectrum(t12)) == Multiset{{q(1, 3), 2}});

  const SpectrumReport w = homotopy_critical_spectrum(wedge());
  CHECK(w.value_list() == std::vector<Rational>{q(1, 3), q(1, 2)});
  CHECK(values_of(w) == betti_scan(wedge()));
}

TEST_CASE("HCS agrees with the Betti scan and certificates verify") {
  Rng rng(73);
  for (const auto& [name, space] : sample_spaces(rng)) {
    const SpectrumReport hcs = homotopy_critical_spectrum(space);
    INFO(name);
    CHECK(std::is_sorted(hcs.values.begin(), hcs.values.end(),
                         [](const auto& a, const auto& b) { return a.value < b.value; }));
    for (const auto& v : hcs.values) {
      CHECK(v.multiplicity >= 1);
      REQUIRE_FALSE(v.certificates.empty());
      const SpectralCertificate& c = hcs.certificates[v.certificates.front()];
      CHECK(verify_certificate(c));
      CHECK(c.coarse->provenance().describe() == "metric(<=" + format_rational(v.value) + ")");
    }
    // Torsion-free sample spaces: H1 drops are visible over Q.
    if (name.rfind("graph", 0) != 0) CHECK(values_of(hcs) == betti_scan(space));
  }
}

TEST_CASE("tampered certificates fail") {
  const SpacePtr c12 = generate(CircleParams{12, q(1)});
  SpectralCertificate c = homotopy_critical_spectrum(c12).certificates.front();
  CHECK(verify_certificate(c));
  SpectralCertificate zero = c;
  for (auto& x : zero.h1) x = 0;
  CHECK_FALSE(verify_certificate(zero));
  SpectralCertificate cut = c;
  cut.contraction->moves.pop_back();
  CHECK_FALSE(verify_certificate(cut));
}

TEST_CASE("covering spectrum is 3/2 of HCS") {
  Rng rng(79);
  CHECK(values_of(covering_spectrum(generate(CircleParams{12, q(1)}))) == Multiset{{q(1, 2), 1}});
  CHECK(values_of(covering_spectrum(generate(TorusParams{6, 6, q(1), q(1), true}))) == Multiset{{q(1, 2), 2}});
  CHECK(covering_spectrum(wedge()).value_list() == std::vector<Rational>{q(1, 2), q(3, 4)});
  for (const auto& [name, space] : sample_spaces(rng)) {
    const SpectrumReport hcs = homotopy_critical_spectrum(space);
    const SpectrumReport cs = covering_spectrum(hcs);
    REQUIRE(cs.values.size() == hcs.values.size());
    for (std::size_t i = 0; i < cs.values.size(); ++i) {
      CHECK(cs.values[i].value == hcs.values[i].value * q(3, 2));
      CHECK(cs.values[i].multiplicity == hcs.values[i].multiplicity);
    }
  }
}

TEST_CASE("NC profile and ECS") {
  const SpacePtr c12 = generate(CircleParams{12, q(1)});
  // One member of size 1/6: NC drops from 1 to 0 past its size.
  const SpectrumReport single = nc_profile(c12, {share(base_entourage(c12))});
  CHECK(single.value_list() == std::vector<Rational>{q(1, 6)});
  for (const auto& p : single.profile) CHECK(p.classes == (p.eps <= q(1, 6) ? 1u : 0u));
  CHECK(single.completeness == Completeness::RelativeToFamily);

  const SpacePtr c24 = generate(CircleParams{24, q(1)});
  const SpectrumReport ecs = nc_profile(c24, metric_family(c24));
  CHECK(ecs.value_list() == std::vector<Rational>{q(1, 3)});
  for (const auto& p : ecs.profile) CHECK(p.classes == (p.eps <= q(1, 3) ? 2u : 1u));

  CHECK_THROWS_AS(nc_profile(c12, {share(custom_entourage(c12, {{0, 6}}))}), Error);
}

TEST_CASE("two thirds of CS lies in ECS on generator spaces") {
  for (const SpacePtr& s : {generate(CircleParams{12, q(1)}), generate(CircleParams{18, q(3, 2)}), wedge()}) {
    const SpectrumReport cs = covering_spectrum(s);
    const SpectrumReport ecs = nc_profile(s, metric_family(s));
    for (const auto& v : cs.values) {
      const Rational scaled = v.value * q(2, 3);
      CHECK(std::find(ecs.value_list().begin(), ecs.value_list().end(), scaled) != ecs.value_list().end());
    }
  }
}

TEST_CASE("entourage spectrum and inclusion chain") {
  const SpacePtr c12 = generate(CircleParams{12, q(1)});
  const SpectrumReport es = entourage_spectrum(c12);
  CHECK(values_of(es) == Multiset{{q(1), 1}});
  for (const auto& c : es.certificates) CHECK(verify_certificate(c));

  const SpectrumReport wes = entourage_spectrum(wedge());
  for (const Rational& v : {q(1), q(3, 2)}) {
    const auto list = wes.value_list();
    CHECK(std::find(list.begin(), list.end(), v) != list.end());
  }

  // Doubling CS lands in ES only when every essential cycle length is three
  // times a realized distance; off-grid discretizations shift HCS upward.
  const std::vector<std::pair<std::string, SpacePtr>> aligned = {
      {"circle12", c12},
      {"circle9", generate(CircleParams{9, q(3, 2)})},
      {"wedge6+9", generate(WedgeParams{{q(1), q(3, 2)}, {6, 9}})},
      {"wedge12+18", wedge()},
      {"torus6", generate(TorusParams{6, 6, q(1), q(1), true})}};
  for (const auto& [name, space] : aligned) {
    INFO(name);
    const SpectrumReport cs = covering_spectrum(space);
    const SpectrumReport ess = entourage_spectrum(space);
    for (const auto& c : ess.certificates) CHECK(verify_certificate(c));
    std::vector<SpectralValue> doubled = cs.values;
    for (auto& v : doubled) v.value *= 2;
    CHECK(multiset_included(doubled, ess.values));
  }

  Rng rng(83);
  for (const auto& [name, space] : sample_spaces(rng)) {
    INFO(name);
    const SpectrumReport ess = entourage_spectrum(space);
    for (const auto& c : ess.certificates) CHECK(verify_certificate(c));
    if (ess.values.empty()) continue;
    const Rational bound = ess.values.back().value;
    const SpectrumReport mls = minimum_length_spectrum(share(base_entourage(space)), bound);
    CHECK(multiset_included(ess.values, mls.values));
  }
}

TEST_CASE("minimum length spectrum") {
  const SpacePtr c60 = generate(CircleParams{60, q(1)});
  const SpectrumReport mls = minimum_length_spectrum(share(base_entourage(c60)), q(5, 2));
  CHECK(values_of(mls) == Multiset{{q(1), 1}, {q(2), 1}});
  CHECK(minimum_length_spectrum(share(base_entourage(wedge())), q(8, 5)).value_list() ==
        std::vector<Rational>{q(1), q(3, 2)});
  const SpacePtr path = from_weighted_graph(4, {{0, 1, q(1)}, {1, 2, q(1)}, {2, 3, q(1)}});
  CHECK(minimum_length_spectrum(share(base_entourage(path)), q(100)).values.empty());
  CHECK_THROWS_AS(minimum_length_spectrum(share(base_entourage(c60)), q(0)), Error);
}

TEST_CASE("T2 bound") {
  const SpacePtr c12 = generate(CircleParams{12, q(1)});
  const T2Bound b = t2_bound(*c12, q(1));
  CHECK(b.quarter.count == 3);
  CHECK(b.half.count == 2);
  CHECK(b.log2_bound == boost::multiprecision::pow(BigInt(3), 80));
  CHECK(b.log2_digits == b.log2_bound.str().size());
  const T2Bound big = t2_bound(*c12, q(3));
  CHECK(big.quarter.count == 1);
  CHECK(big.half.count == 1);
  CHECK(big.log2_bound == 1);
  CHECK(big.admits(2));
  CHECK_FALSE(big.admits(3));
  CHECK_THROWS_AS(t2_bound(*c12, q(0)), Error);
}
