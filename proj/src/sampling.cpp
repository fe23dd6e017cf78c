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

#include "dhtk/sampling.hpp"

#include <algorithm>
#include <deque>
#include <optional>

#include "dhtk/complex.hpp"
#include "dhtk/cover.hpp"
#include "dhtk/error.hpp"

namespace dhtk {

std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

SpacePtr random_graph_space(Rng& rng, std::size_t n, std::size_t extra_edges) {
  static const Rational kChordWeights[] = {make_rational(1), make_rational(3, 2), make_rational(2)};
  std::vector<WeightedEdge> edges;
  for (Vertex i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, make_rational(1)});
  for (std::size_t k = 0; k < extra_edges; ++k) {
    const auto a = static_cast<Vertex>(pick(rng, n));
    const auto b = static_cast<Vertex>(pick(rng, n));
    if (a != b) edges.push_back({a, b, kChordWeights[pick(rng, 3)]});
  }
  return from_weighted_graph(n, edges);
}

std::vector<NamedSpace> sample_spaces(Rng& rng) {
  std::vector<NamedSpace> out;
  out.push_back({"circle(12,1)", generate(CircleParams{12, make_rational(1)})});
  out.push_back({"circle(9,3/2)", generate(CircleParams{9, make_rational(3, 2)})});
  out.push_back({"torus(5x5,1,1)", generate(TorusParams{5, 5, make_rational(1), make_rational(1), true})});
  out.push_back({"torus(4x6,1,3/2,square)",
                 generate(TorusParams{4, 6, make_rational(1), make_rational(3, 2), false})});
  out.push_back({"wedge((1,3/2),(6,9))",
                 generate(WedgeParams{{make_rational(1), make_rational(3, 2)}, {6, 9}})});
  out.push_back({"wedge((1,1,2),(5,5,10))",
                 generate(WedgeParams{{make_rational(1), make_rational(1), make_rational(2)}, {5, 5, 10}})});
  out.push_back({"graph(10)", random_graph_space(rng, 10, 4)});
  out.push_back({"graph(16)", random_graph_space(rng, 16, 8)});
  return out;
}

Entourage random_metric_entourage(const SpacePtr& space, Rng& rng) {
  const auto& values = space->distance_values();
  if (values.empty()) return full_entourage(space);
  const std::size_t k = pick(rng, values.size());
  const bool strict = k > 0 && pick(rng, 2) == 1;
  return metric_entourage(space, space->to_rational(values[k]), strict);
}

Entourage random_chained_entourage(const SpacePtr& space, Rng& rng, std::size_t cliques,
                                   std::size_t max_size) {
  const Entourage base = base_entourage(space);
  const std::size_t n = space->size();
  std::vector<VertexSet> rows(n, VertexSet(n));
  for (Vertex i = 0; i < n; ++i) rows[i] = base.row(i);
  for (std::size_t c = 0; c < cliques && n > 0; ++c) {
    // Grow a base-connected set; its clique keeps every pair joinable inside.
    const std::size_t target = 1 + pick(rng, std::max<std::size_t>(max_size, 1));
    std::vector<Vertex> members{static_cast<Vertex>(pick(rng, n))};
    VertexSet in(n);
    in.set(members.front());
    while (members.size() < target) {
      VertexSet frontier(n);
      for (Vertex m : members) frontier |= base.row(m);
      frontier -= in;
      if (frontier.none()) break;
      std::size_t skip = pick(rng, frontier.count());
      auto v = frontier.find_first();
      while (skip-- > 0) v = frontier.find_next(v);
      members.push_back(static_cast<Vertex>(v));
      in.set(v);
    }
    for (Vertex m : members) rows[m] |= in;
  }
  Provenance p;
  p.kind = Provenance::Kind::Custom;
  return Entourage(space, std::move(rows), p);
}

std::vector<Vertex> random_walk(const Entourage& e, Vertex start, std::size_t steps, Rng& rng) {
  std::vector<Vertex> out{start};
  for (std::size_t s = 0; s < steps; ++s) {
    const VertexSet& row = e.row(out.back());
    const std::size_t degree = row.count() - 1;
    if (degree == 0) break;
    std::size_t skip = pick(rng, degree);
    auto v = row.find_first();
    while (true) {
      if (v != out.back()) {
        if (skip == 0) break;
        --skip;
      }
      v = row.find_next(v);
    }
    out.push_back(static_cast<Vertex>(v));
  }
  return out;
}

std::vector<Vertex> hop_path(const Entourage& e, Vertex from, Vertex to) {
  const std::size_t n = e.size();
  std::vector<long> parent(n, -1);
  std::deque<Vertex> queue{from};
  parent[from] = from;
  while (!queue.empty() && parent[to] < 0) {
    const Vertex v = queue.front();
    queue.pop_front();
    const VertexSet& row = e.row(v);
    for (auto w = row.find_first(); w != VertexSet::npos; w = row.find_next(w)) {
      if (parent[w] >= 0) continue;
      parent[w] = v;
      queue.push_back(static_cast<Vertex>(w));
    }
  }
  if (parent[to] < 0) throw Error(ErrorKind::NotConnected, "no path between the requested vertices");
  std::vector<Vertex> path{to};
  while (path.back() != from) path.push_back(static_cast<Vertex>(parent[path.back()]));
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<Vertex> random_loop(const Entourage& e, std::size_t steps, Rng& rng) {
  const auto start = static_cast<Vertex>(pick(rng, e.size()));
  std::vector<Vertex> walk = random_walk(e, start, steps, rng);
  const std::vector<Vertex> back = hop_path(e, walk.back(), start);
  walk.insert(walk.end(), back.begin() + 1, back.end());
  return walk;
}

namespace {

std::optional<bool> normalize_sample(const SpacePtr& space, Rng& rng) {
  const auto& values = space->distance_values();
  const std::size_t k = pick(rng, values.size());
  const EntouragePtr e = share(closed_entourage_units(space, values[k]));
  const Rational eps = space->to_rational(values[pick(rng, k + 1)]);
  const Chain c = validate_chain(e, random_walk(*e, static_cast<Vertex>(pick(rng, space->size())),
                                                pick(rng, 40), rng));
  const NormalizeResult r = normalize(c, eps);
  const Rational bound = 4 * c.length() / eps;
  const BigInt floor_bound = numerator(bound) / denominator(bound);
  return BigInt(r.chain.steps()) <= floor_bound + 1 && verify(r.homotopy) &&
         r.chain.front() == c.front() && r.chain.back() == c.back();
}

std::optional<bool> close_homotopy_sample(const SpacePtr& space, Rng& rng) {
  const auto& values = space->distance_values();
  const std::size_t k = pick(rng, values.size());
  const EntouragePtr coarse = share(closed_entourage_units(space, values[k]));
  // Largest closed fine scale whose square stays inside the coarse one.
  std::size_t f = 0;
  for (std::size_t j = 0; j < values.size(); ++j)
    if (compose(closed_entourage_units(space, values[j]), 2).is_subset_of(*coarse)) f = j;
  const Entourage fine = closed_entourage_units(space, values[pick(rng, f + 1)]);
  if (!compose(fine, 2).is_subset_of(*coarse)) return std::nullopt;  // base scale too coarse
  const std::vector<Vertex> alpha =
      random_walk(fine, static_cast<Vertex>(pick(rng, space->size())), 2 + pick(rng, 20), rng);
  std::vector<Vertex> beta{alpha.front()};
  for (std::size_t i = 1; i + 1 < alpha.size(); ++i) {
    VertexSet options = fine.row(alpha[i]) & coarse->row(beta.back());
    std::size_t skip = pick(rng, options.count());
    auto v = options.find_first();
    while (skip-- > 0) v = options.find_next(v);
    beta.push_back(static_cast<Vertex>(v));
  }
  beta.push_back(alpha.back());
  const Chain a = validate_chain(coarse, alpha);
  const MoveSequence seq = close_homotopy(a, beta, fine);
  return verify(seq) && replay(a, seq.moves).points() == beta;
}

std::optional<bool> isometry_sample(const SpacePtr& space, Rng& rng) {
  const EntouragePtr e = share(random_metric_entourage(space, rng));
  if (!is_chained(*e)) return std::nullopt;
  const CoverBall cb = build_cover_ball(e, space->diameter(), 200000);
  if (cb.edges().empty()) return std::nullopt;
  const LiftedEdge& edge = cb.edges()[pick(rng, cb.edges().size())];
  const Units projected = space->units(cb.points()[edge.from].base, cb.points()[edge.to].base);
  const LiftedDistance d = lifted_distance(cb, edge.from, edge.to);
  return edge.length == projected && (!d.exact || d.units == projected);
}

std::optional<bool> soundness_sample(const SpacePtr& space, Rng& rng) {
  const EntouragePtr e = share(random_metric_entourage(space, rng));
  if (!is_chained(*e)) return std::nullopt;
  const GroupPresentation pres = build_presentation(e);
  const Chain loop = validate_chain(e, random_loop(*e, pick(rng, 12), rng));
  const StrategyMask masks[] = {{true, true, true}, {true, false, false}, {false, true, false},
                                {false, false, true}};
  bool saw_null = false, saw_nonnull = false;
  for (const auto& mask : masks) {
    const NullityVerdict v = decide_null(pres, loop, 20000, mask);
    if (v.verdict == Verdict::Null) {
      saw_null = true;
      if (!v.certificate || !verify(*v.certificate) || !v.certificate->end.is_constant() ||
          v.certificate->start.points() != loop.points())
        return false;
    } else if (v.verdict == Verdict::NonNull) {
      saw_nonnull = true;
      if (!v.h1.empty() && pres.group().h1_image(loop_word(pres, loop)) != v.h1) return false;
      if (!v.h1.empty() && std::all_of(v.h1.begin(), v.h1.end(), [](auto x) { return x == 0; }))
        return false;
      if (v.h1.empty() && v.word.empty()) return false;
    }
  }
  return !(saw_null && saw_nonnull);
}

}  // namespace

namespace {

struct Property {
  const char* name;
  std::optional<bool> (*check)(const SpacePtr&, Rng&);
};

constexpr Property kProperties[] = {{"normalize-step-bound", normalize_sample},
                                    {"close-homotopy-replay", close_homotopy_sample},
                                    {"lifted-edge-isometry", isometry_sample},
                                    {"nullity-soundness", soundness_sample}};

}  // namespace

std::vector<std::string> property_names() {
  std::vector<std::string> out;
  for (const auto& p : kProperties) out.emplace_back(p.name);
  return out;
}

SelfTestLine run_property(std::string_view name, const std::vector<NamedSpace>& spaces, Rng& rng,
                          std::size_t samples) {
  const auto it = std::find_if(std::begin(kProperties), std::end(kProperties),
                               [&](const Property& p) { return name == p.name; });
  if (it == std::end(kProperties)) throw Error(ErrorKind::BadParams, "unknown property " + std::string(name));
  if (spaces.empty()) throw Error(ErrorKind::BadParams, "no sample spaces");
  // Skipped draws do not count; give up after a fixed number of attempts.
  SelfTestLine line{it->name, 0, 0, 0};
  const std::size_t max_attempts = 20 * samples + 20;
  for (std::size_t attempt = 0; line.samples < samples && attempt < max_attempts; ++attempt) {
    try {
      const std::optional<bool> ok = it->check(spaces[attempt % spaces.size()].space, rng);
      if (!ok) {
        ++line.skipped;
        continue;
      }
      if (!*ok) ++line.failures;
    } catch (const Error&) {
      ++line.failures;
    }
    ++line.samples;
  }
  return line;
}

std::vector<SelfTestLine> run_selftest(std::uint64_t seed, std::size_t samples) {
  Rng rng(seed);
  const std::vector<NamedSpace> spaces = sample_spaces(rng);
  std::vector<SelfTestLine> out;
  for (const auto& p : kProperties) out.push_back(run_property(p.name, spaces, rng, samples));
  return out;
}

}  // namespace dhtk
