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

#include "dhtk/space.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <utility>

#include <boost/dynamic_bitset.hpp>
#include <boost/integer/common_factor_rt.hpp>

#include "dhtk/error.hpp"

namespace dhtk {

namespace {

// Scaled distances must leave headroom for path sums of up to n^2 steps.
constexpr std::int64_t kMaxScaledDistance = std::int64_t{1} << 40;

std::string triple(std::size_t i, std::size_t j, std::size_t k) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
}

BigInt common_denominator(const std::vector<const Rational*>& values) {
  BigInt den = 1;
  for (const Rational* v : values) {
    const BigInt d = boost::multiprecision::denominator(*v);
    den = den / boost::multiprecision::gcd(den, d) * d;
  }
  return den;
}

std::int64_t checked_scale(const Rational& value, const BigInt& den) {
  const Rational scaled = value * Rational(den);
  const BigInt num = boost::multiprecision::numerator(scaled);
  if (num > kMaxScaledDistance)
    throw Error(ErrorKind::Unsupported, "distance " + format_rational(value) +
                                            " too large for common denominator " + den.str());
  return static_cast<std::int64_t>(num);
}

}  // namespace

Units FiniteMetricSpace::ceil_units(const Rational& value) const {
  const Rational scaled = value * make_rational(denominator_);
  const BigInt num = boost::multiprecision::numerator(scaled);
  const BigInt den = boost::multiprecision::denominator(scaled);
  BigInt q = num / den;
  if (q * den < num) q += 1;
  if (q > std::numeric_limits<Units>::max() / 4) return std::numeric_limits<Units>::max() / 4;
  return static_cast<Units>(q);
}

FiniteMetricSpace FiniteMetricSpace::from_units(std::size_t n, std::int64_t denominator,
                                                std::vector<Units> units,
                                                std::vector<std::string> labels) {
  if (n == 0) throw Error(ErrorKind::BadParams, "a metric space needs at least one vertex");
  if (units.size() != n * n) throw Error(ErrorKind::BadParams, "distance table is not n x n");
  if (!labels.empty() && labels.size() != n)
    throw Error(ErrorKind::BadParams, "label count does not match vertex count");
  for (std::size_t i = 0; i < n; ++i) {
    if (units[i * n + i] != 0)
      throw Error(ErrorKind::NonzeroDiagonal, "dist[" + std::to_string(i) + "][" +
                                                  std::to_string(i) + "] is not 0",
                  static_cast<long>(i));
    for (std::size_t j = 0; j < n; ++j) {
      if (units[i * n + j] != units[j * n + i])
        throw Error(ErrorKind::AsymmetricMatrix,
                    "dist[" + std::to_string(i) + "][" + std::to_string(j) + "] != dist[" +
                        std::to_string(j) + "][" + std::to_string(i) + "]",
                    static_cast<long>(i));
      if (i != j && units[i * n + j] <= 0)
        throw Error(ErrorKind::NonpositiveDistance,
                    "dist[" + std::to_string(i) + "][" + std::to_string(j) + "] must be positive",
                    static_cast<long>(i));
    }
  }
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const Units dij = units[i * n + j];
      for (std::size_t k = 0; k < n; ++k)
        if (units[i * n + k] > dij + units[j * n + k])
          throw Error(ErrorKind::TriangleViolation,
                      "dist" + triple(i, j, k) + ": d(i,k) > d(i,j) + d(j,k)",
                      static_cast<long>(i));
    }

  FiniteMetricSpace space;
  space.n_ = n;
  space.denominator_ = denominator;
  space.units_ = std::move(units);
  space.labels_ = std::move(labels);
  for (std::size_t i = 0; i < n * n; ++i)
    if (space.units_[i] > 0) space.values_.push_back(space.units_[i]);
  std::sort(space.values_.begin(), space.values_.end());
  space.values_.erase(std::unique(space.values_.begin(), space.values_.end()),
                      space.values_.end());
  space.ranks_.assign(n * n, -1);
  for (std::size_t i = 0; i < n * n; ++i)
    if (space.units_[i] > 0)
      space.ranks_[i] = static_cast<int>(
          std::lower_bound(space.values_.begin(), space.values_.end(), space.units_[i]) -
          space.values_.begin());
  return space;
}

SpacePtr from_distance_matrix(const std::vector<std::vector<Rational>>& matrix,
                              std::vector<std::string> labels) {
  const std::size_t n = matrix.size();
  std::vector<const Rational*> all;
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n)
      throw Error(ErrorKind::BadParams, "row " + std::to_string(i) + " has " +
                                            std::to_string(matrix[i].size()) + " entries, expected " +
                                            std::to_string(n),
                  static_cast<long>(i));
    for (std::size_t j = 0; j < n; ++j) {
      if (matrix[i][j] < 0)
        throw Error(ErrorKind::NonpositiveDistance,
                    "negative entry at [" + std::to_string(i) + "][" + std::to_string(j) + "]",
                    static_cast<long>(i));
      all.push_back(&matrix[i][j]);
    }
  }
  // Symmetry and the diagonal are checked on the exact rationals first so the
  // diagnostics name the offending cell before any scaling can fail.
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i][i] != 0)
      throw Error(ErrorKind::NonzeroDiagonal, "dist[" + std::to_string(i) + "][" +
                                                  std::to_string(i) + "] = " +
                                                  format_rational(matrix[i][i]),
                  static_cast<long>(i));
    for (std::size_t j = i + 1; j < n; ++j)
      if (matrix[i][j] != matrix[j][i])
        throw Error(ErrorKind::AsymmetricMatrix,
                    "dist[" + std::to_string(i) + "][" + std::to_string(j) + "] = " +
                        format_rational(matrix[i][j]) + " but dist[" + std::to_string(j) + "][" +
                        std::to_string(i) + "] = " + format_rational(matrix[j][i]),
                    static_cast<long>(i));
  }
  const BigInt den = common_denominator(all);
  if (den > kMaxScaledDistance)
    throw Error(ErrorKind::Unsupported, "common denominator " + den.str() + " too large");
  std::vector<Units> units(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) units[i * n + j] = checked_scale(matrix[i][j], den);
  return std::make_shared<const FiniteMetricSpace>(FiniteMetricSpace::from_units(
      n, static_cast<std::int64_t>(den), std::move(units), std::move(labels)));
}

SpacePtr from_weighted_graph(std::size_t n, const std::vector<WeightedEdge>& edges) {
  if (n == 0) throw Error(ErrorKind::BadParams, "graph needs at least one vertex");
  std::vector<const Rational*> weights;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& edge = edges[e];
    if (edge.i >= n || edge.j >= n)
      throw Error(ErrorKind::BadParams, "edge " + std::to_string(e) + " has a vertex out of range",
                  static_cast<long>(e));
    if (edge.i == edge.j)
      throw Error(ErrorKind::BadParams, "edge " + std::to_string(e) + " is a self-loop",
                  static_cast<long>(e));
    if (edge.weight <= 0)
      throw Error(ErrorKind::NonpositiveWeight,
                  "edge " + std::to_string(e) + " has weight " + format_rational(edge.weight),
                  static_cast<long>(e));
    weights.push_back(&edge.weight);
  }
  const BigInt den = common_denominator(weights);
  if (den > kMaxScaledDistance)
    throw Error(ErrorKind::Unsupported, "common denominator " + den.str() + " too large");

  std::vector<std::vector<std::pair<Vertex, Units>>> adjacency(n);
  for (const auto& edge : edges) {
    const Units w = checked_scale(edge.weight, den);
    adjacency[edge.i].emplace_back(edge.j, w);
    adjacency[edge.j].emplace_back(edge.i, w);
  }

  constexpr Units kInf = std::numeric_limits<Units>::max();
  std::vector<Units> units(n * n, kInf);
  using Item = std::pair<Units, Vertex>;
  for (std::size_t s = 0; s < n; ++s) {
    Units* row = &units[s * n];
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    row[s] = 0;
    queue.emplace(0, static_cast<Vertex>(s));
    while (!queue.empty()) {
      const auto [d, v] = queue.top();
      queue.pop();
      if (d != row[v]) continue;
      for (const auto& [w, len] : adjacency[v]) {
        if (d + len < row[w]) {
          row[w] = d + len;
          queue.emplace(row[w], w);
        }
      }
    }
    for (std::size_t t = 0; t < n; ++t)
      if (row[t] == kInf)
        throw Error(ErrorKind::DisconnectedGraph,
                    "vertex " + std::to_string(t) + " unreachable from " + std::to_string(s),
                    static_cast<long>(t));
  }
  return std::make_shared<const FiniteMetricSpace>(
      FiniteMetricSpace::from_units(n, static_cast<std::int64_t>(den), std::move(units)));
}

namespace {

SpacePtr generate_circle(const CircleParams& p) {
  if (p.n < 3 || p.length <= 0)
    throw Error(ErrorKind::BadParams, "circle needs n >= 3 and L > 0");
  const Rational step = p.length / Rational(p.n);
  std::vector<WeightedEdge> edges;
  for (int i = 0; i < p.n; ++i)
    edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % p.n), step});
  return from_weighted_graph(static_cast<std::size_t>(p.n), edges);
}

SpacePtr generate_torus(const TorusParams& p) {
  if (p.p < 3 || p.q < 3 || p.lx <= 0 || p.ly <= 0)
    throw Error(ErrorKind::BadParams, "torus_grid needs p, q >= 3 and Lx, Ly > 0");
  const Rational hx = p.lx / Rational(p.p);
  const Rational hy = p.ly / Rational(p.q);
  const Rational diag = hx > hy ? hx : hy;
  auto id = [&](int x, int y) {
    return static_cast<Vertex>(((x % p.p + p.p) % p.p) * p.q + ((y % p.q + p.q) % p.q));
  };
  std::vector<WeightedEdge> edges;
  for (int x = 0; x < p.p; ++x)
    for (int y = 0; y < p.q; ++y) {
      edges.push_back({id(x, y), id(x + 1, y), hx});
      edges.push_back({id(x, y), id(x, y + 1), hy});
      if (p.triangulated) edges.push_back({id(x, y), id(x + 1, y + 1), diag});
    }
  return from_weighted_graph(static_cast<std::size_t>(p.p * p.q), edges);
}

SpacePtr generate_wedge(const WedgeParams& p) {
  if (p.lengths.empty() || p.lengths.size() != p.nodes.size())
    throw Error(ErrorKind::BadParams, "wedge needs matching, nonempty length and node lists");
  std::size_t n = 1;
  for (std::size_t c = 0; c < p.lengths.size(); ++c) {
    if (p.nodes[c] < 3 || p.lengths[c] <= 0)
      throw Error(ErrorKind::BadParams, "wedge cycle " + std::to_string(c) +
                                            " needs at least 3 nodes and positive length");
    n += static_cast<std::size_t>(p.nodes[c] - 1);
  }
  std::vector<WeightedEdge> edges;
  Vertex next = 1;
  for (std::size_t c = 0; c < p.lengths.size(); ++c) {
    const Rational step = p.lengths[c] / Rational(p.nodes[c]);
    Vertex prev = 0;
    for (int k = 1; k < p.nodes[c]; ++k) {
      edges.push_back({prev, next, step});
      prev = next++;
    }
    edges.push_back({prev, 0, step});
  }
  return from_weighted_graph(n, edges);
}

}  // namespace

SpacePtr generate(const GeneratorSpec& spec) {
  return std::visit(
      [](const auto& p) -> SpacePtr {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CircleParams>) return generate_circle(p);
        else if constexpr (std::is_same_v<T, TorusParams>) return generate_torus(p);
        else return generate_wedge(p);
      },
      spec);
}

namespace {

using Bits = boost::dynamic_bitset<>;

class SetCoverSearch {
 public:
  SetCoverSearch(std::vector<Bits> sets, std::size_t universe, std::size_t upper_bound,
                 std::size_t node_limit)
      : sets_(std::move(sets)), best_(upper_bound), node_limit_(node_limit) {
    max_size_ = 1;
    for (const auto& s : sets_) max_size_ = std::max(max_size_, s.count());
    containing_.resize(universe);
    for (std::size_t s = 0; s < sets_.size(); ++s)
      for (auto v = sets_[s].find_first(); v != Bits::npos; v = sets_[s].find_next(v))
        containing_[v].push_back(s);
  }

  /// Returns false when the node limit cut the search short.
  bool run(const Bits& uncovered) {
    recurse(uncovered, 0);
    return nodes_ <= node_limit_;
  }

  std::size_t best() const { return best_; }

 private:
  void recurse(const Bits& uncovered, std::size_t depth) {
    if (++nodes_ > node_limit_) return;
    const std::size_t remaining = uncovered.count();
    if (remaining == 0) {
      best_ = std::min(best_, depth);
      return;
    }
    if (depth + (remaining + max_size_ - 1) / max_size_ >= best_) return;
    // Branch on the uncovered vertex with the fewest covering sets.
    std::size_t pick = Bits::npos;
    std::size_t fewest = std::numeric_limits<std::size_t>::max();
    for (auto v = uncovered.find_first(); v != Bits::npos; v = uncovered.find_next(v))
      if (containing_[v].size() < fewest) {
        fewest = containing_[v].size();
        pick = v;
      }
    std::vector<std::pair<std::size_t, std::size_t>> order;
    for (std::size_t s : containing_[pick]) order.emplace_back((sets_[s] & uncovered).count(), s);
    std::sort(order.begin(), order.end(), std::greater<>());
    for (const auto& [gain, s] : order) {
      (void)gain;
      recurse(uncovered - sets_[s], depth + 1);
      if (nodes_ > node_limit_) return;
    }
  }

  std::vector<Bits> sets_;
  std::vector<std::vector<std::size_t>> containing_;
  std::size_t max_size_ = 1;
  std::size_t best_;
  std::size_t node_limit_;
  std::size_t nodes_ = 0;
};

}  // namespace

CoveringNumber covering_number(const FiniteMetricSpace& space, const Rational& eps,
                               std::size_t exact_threshold) {
  if (eps <= 0) throw Error(ErrorKind::NonpositiveEps, "eps must be positive");
  const std::size_t n = space.size();
  const Units limit = space.ceil_units(eps);  // open ball: units < limit
  std::vector<Bits> balls(n, Bits(n));
  for (Vertex c = 0; c < n; ++c)
    for (Vertex v = 0; v < n; ++v)
      if (space.units(c, v) < limit) balls[c].set(v);

  Bits uncovered(n);
  uncovered.set();
  std::size_t greedy = 0;
  while (uncovered.any()) {
    std::size_t best = 0, gain = 0;
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t g = (balls[c] & uncovered).count();
      if (g > gain) {
        gain = g;
        best = c;
      }
    }
    uncovered -= balls[best];
    ++greedy;
  }
  if (n > exact_threshold || greedy <= 1) return {greedy, n <= exact_threshold};

  // Dominated balls never help an optimal cover.
  std::vector<Bits> kept;
  for (std::size_t a = 0; a < n; ++a) {
    bool dominated = false;
    for (std::size_t b = 0; b < n && !dominated; ++b) {
      if (a == b) continue;
      if (balls[a].is_subset_of(balls[b]) && (balls[a] != balls[b] || b < a)) dominated = true;
    }
    if (!dominated) kept.push_back(balls[a]);
  }
  SetCoverSearch search(std::move(kept), n, greedy, 20'000'000);
  Bits all(n);
  all.set();
  const bool finished = search.run(all);
  return {search.best(), finished};
}

}  // namespace dhtk
