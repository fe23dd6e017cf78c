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

#include "dhtk/group.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <utility>

#include "dhtk/error.hpp"

namespace dhtk {

Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (Symbol s : w) {
    if (!out.empty() && out.back() == -s) out.pop_back();
    else out.push_back(s);
  }
  return out;
}

Word cyclic_reduce(const Word& w) {
  Word r = free_reduce(w);
  std::size_t lo = 0, hi = r.size();
  while (hi - lo >= 2 && r[lo] == -r[hi - 1]) {
    ++lo;
    --hi;
  }
  return Word(r.begin() + static_cast<std::ptrdiff_t>(lo), r.begin() + static_cast<std::ptrdiff_t>(hi));
}

Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (Symbol& s : out) s = -s;
  return out;
}

namespace {

Word least_rotation(const Word& w) {
  Word best = w;
  Word rotated = w;
  for (std::size_t k = 1; k < w.size(); ++k) {
    std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
    if (rotated < best) best = rotated;
  }
  return best;
}

}  // namespace

Word canonical_cyclic(const Word& w) { return least_rotation(cyclic_reduce(w)); }

Word canonical_relator(const Word& w) {
  const Word c = cyclic_reduce(w);
  Word a = least_rotation(c);
  Word b = least_rotation(inverse(c));
  return std::min(a, b);
}

// ---------------------------------------------------------------------------
// Integer normal forms.

SmithForm smith_normal_form(std::vector<std::vector<BigInt>> a, std::size_t cols) {
  const std::size_t rows = a.size();
  std::vector<std::vector<BigInt>> v(cols, std::vector<BigInt>(cols));
  for (std::size_t i = 0; i < cols; ++i) v[i][i] = 1;

  auto swap_cols = [&](std::size_t x, std::size_t y) {
    if (x == y) return;
    for (auto& row : a) std::swap(row[x], row[y]);
    for (auto& row : v) std::swap(row[x], row[y]);
  };
  // col_y -= q * col_x
  auto sub_col = [&](std::size_t y, std::size_t x, const BigInt& q) {
    for (auto& row : a)
      if (row[x] != 0) row[y] -= q * row[x];
    for (auto& row : v)
      if (row[x] != 0) row[y] -= q * row[x];
  };
  auto sub_row = [&](std::size_t y, std::size_t x, const BigInt& q) {
    for (std::size_t j = 0; j < cols; ++j)
      if (a[x][j] != 0) a[y][j] -= q * a[x][j];
  };

  const std::size_t diag = std::min(rows, cols);
  SmithForm out;
  out.diagonal.assign(diag, 0);
  for (std::size_t t = 0; t < diag; ++t) {
    // Smallest nonzero magnitude in the trailing block becomes the pivot.
    auto pick_pivot = [&]() -> bool {
      std::size_t bi = rows, bj = cols;
      BigInt best;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (bi == rows || abs(a[i][j]) < best)) {
            best = abs(a[i][j]);
            bi = i;
            bj = j;
          }
      if (bi == rows) return false;
      std::swap(a[t], a[bi]);
      swap_cols(t, bj);
      return true;
    };
    if (!pick_pivot()) break;
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i)
        if (a[i][t] != 0) {
          sub_row(i, t, a[i][t] / a[t][t]);
          if (a[i][t] != 0) clean = false;
        }
      for (std::size_t j = t + 1; j < cols; ++j)
        if (a[t][j] != 0) {
          sub_col(j, t, a[t][j] / a[t][t]);
          if (a[t][j] != 0) clean = false;
        }
      if (!clean) {
        pick_pivot();
        continue;
      }
      // Enforce divisibility of the remaining block by the pivot.
      bool divisible = true;
      for (std::size_t i = t + 1; i < rows && divisible; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            sub_row(t, i, -1);
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (a[t][t] < 0)
      for (std::size_t j = 0; j < cols; ++j) a[t][j] = -a[t][j];
    out.diagonal[t] = a[t][t];
  }
  out.column_transform = std::move(v);
  return out;
}

AbelianInvariants abelian_invariants(const std::vector<std::vector<BigInt>>& matrix,
                                     std::size_t cols) {
  const SmithForm snf = smith_normal_form(matrix, cols);
  AbelianInvariants inv;
  std::size_t nonzero = 0;
  for (const auto& d : snf.diagonal)
    if (d != 0) {
      ++nonzero;
      if (d > 1) inv.torsion.push_back(d);
    }
  inv.rank = cols - nonzero;
  return inv;
}

const char* to_string(GroupShape shape) {
  switch (shape) {
    case GroupShape::Trivial: return "trivial";
    case GroupShape::Cyclic: return "cyclic";
    case GroupShape::Free: return "free";
    case GroupShape::Abelian: return "abelian";
    case GroupShape::General: return "general";
  }
  return "general";
}

// ---------------------------------------------------------------------------
// Presentation simplification.

namespace {

constexpr std::size_t kMaxExpressionLength = 200000;

/// Union-find over generators where each node stores g = parent^sign and a
/// root may be marked trivial.
class SignedUnionFind {
 public:
  explicit SignedUnionFind(std::size_t n) : parent_(n), sign_(n, 1), trivial_(n, false) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
  }

  /// Returns (root, sign) with g = root^sign.
  std::pair<std::size_t, int> find(std::size_t g) {
    std::size_t root = g;
    int sign = 1;
    while (parent_[root] != root) {
      sign *= sign_[root];
      root = parent_[root];
    }
    // Path compression keeps signs relative to the root.
    std::size_t cur = g;
    int cur_sign = sign;
    while (parent_[cur] != root && cur != root) {
      const std::size_t next = parent_[cur];
      const int next_sign = cur_sign * sign_[cur];
      parent_[cur] = root;
      sign_[cur] = cur_sign;
      cur = next;
      cur_sign = next_sign;
    }
    return {root, sign};
  }

  bool trivial_root(std::size_t root) const { return trivial_[root]; }
  void kill(std::size_t root) { trivial_[root] = true; }
  /// child = parent^sign; both roots.
  void attach(std::size_t child, std::size_t parent, int sign) {
    parent_[child] = parent;
    sign_[child] = sign;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> sign_;
  std::vector<bool> trivial_;
};

Word substitute(SignedUnionFind& uf, const Word& w) {
  Word out;
  out.reserve(w.size());
  for (Symbol s : w) {
    const auto [root, sign] = uf.find(generator_of(s));
    if (uf.trivial_root(root)) continue;
    out.push_back(symbol_of(root, (s < 0) != (sign < 0)));
  }
  return cyclic_reduce(out);
}

}  // namespace

ReducedGroup::ReducedGroup(std::size_t num_generators, const std::vector<Word>& relators) {
  collapse_short_relators(num_generators, relators);
  eliminate_generators();
  compute_abelianization();
  classify();
}

void ReducedGroup::collapse_short_relators(std::size_t num_generators,
                                           const std::vector<Word>& relators) {
  SignedUnionFind uf(num_generators);
  std::vector<std::vector<std::size_t>> occurrences(num_generators);
  for (std::size_t r = 0; r < relators.size(); ++r)
    for (Symbol s : relators[r]) {
      auto& occ = occurrences[generator_of(s)];
      if (occ.empty() || occ.back() != r) occ.push_back(r);
    }

  std::deque<std::size_t> work;
  std::vector<bool> queued(relators.size(), true);
  for (std::size_t r = 0; r < relators.size(); ++r) work.push_back(r);
  auto requeue = [&](std::size_t root) {
    for (std::size_t r : occurrences[root])
      if (!queued[r]) {
        queued[r] = true;
        work.push_back(r);
      }
  };

  while (!work.empty()) {
    const std::size_t r = work.front();
    work.pop_front();
    queued[r] = false;
    const Word w = substitute(uf, relators[r]);
    if (w.size() == 1) {
      const std::size_t root = generator_of(w[0]);
      uf.kill(root);
      requeue(root);
      occurrences[root].clear();
      occurrences[root].shrink_to_fit();
    } else if (w.size() == 2 && generator_of(w[0]) != generator_of(w[1])) {
      // x^a y^b = 1  =>  x = y^(-ab)
      std::size_t x = generator_of(w[0]), y = generator_of(w[1]);
      const int sign = -((w[0] > 0 ? 1 : -1) * (w[1] > 0 ? 1 : -1));
      if (occurrences[x].size() > occurrences[y].size()) std::swap(x, y);
      uf.attach(x, y, sign);
      requeue(x);
      auto& big = occurrences[y];
      big.insert(big.end(), occurrences[x].begin(), occurrences[x].end());
      occurrences[x].clear();
      occurrences[x].shrink_to_fit();
    }
  }

  expressions_.assign(num_generators, Word{});
  std::vector<bool> is_alive(num_generators, false);
  for (std::size_t g = 0; g < num_generators; ++g) {
    const auto [root, sign] = uf.find(g);
    if (uf.trivial_root(root)) continue;
    expressions_[g] = {symbol_of(root, sign < 0)};
    is_alive[root] = true;
  }
  for (std::size_t g = 0; g < num_generators; ++g)
    if (is_alive[g]) alive_.push_back(g);

  std::set<Word> seen;
  for (const auto& rel : relators) {
    Word w = substitute(uf, rel);
    if (w.empty()) continue;
    Word key = canonical_relator(w);
    if (seen.insert(key).second) relators_.push_back(std::move(key));
  }
}

void ReducedGroup::eliminate_generators() {
  if (relators_.empty()) return;
  std::size_t total = 0;
  for (const auto& r : relators_) total += r.size();
  const std::size_t cap = std::max<std::size_t>(4 * total, total + 2000);

  std::map<std::size_t, Word> eliminated;  // root -> word over roots alive then
  std::vector<std::size_t> order;
  std::set<std::size_t> alive(alive_.begin(), alive_.end());

  for (;;) {
    std::map<std::size_t, std::size_t> total_occ;
    for (const auto& r : relators_)
      for (Symbol s : r) ++total_occ[generator_of(s)];

    std::vector<std::size_t> by_length(relators_.size());
    for (std::size_t i = 0; i < by_length.size(); ++i) by_length[i] = i;
    std::stable_sort(by_length.begin(), by_length.end(), [&](std::size_t a, std::size_t b) {
      return relators_[a].size() < relators_[b].size();
    });

    std::size_t pick_rel = relators_.size(), pick_gen = 0;
    for (std::size_t ri : by_length) {
      const Word& r = relators_[ri];
      std::map<std::size_t, std::size_t> local;
      for (Symbol s : r) ++local[generator_of(s)];
      std::size_t best_gen = 0, best_occ = 0;
      bool found = false;
      for (const auto& [g, c] : local) {
        if (c != 1) continue;
        const std::size_t occ = total_occ[g];
        if (!found || occ < best_occ) {
          found = true;
          best_gen = g;
          best_occ = occ;
        }
      }
      if (!found) continue;
      const std::size_t growth = (r.size() >= 2 ? r.size() - 2 : 0) * (best_occ - 1);
      if (total + growth > cap) continue;
      pick_rel = ri;
      pick_gen = best_gen;
      break;
    }
    if (pick_rel == relators_.size()) break;

    // r = u x^s v  =>  x = u^-1 v^-1 (s = 1)  or  x = v u (s = -1)
    const Word r = relators_[pick_rel];
    std::size_t pos = 0;
    while (generator_of(r[pos]) != pick_gen) ++pos;
    const Word u(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(pos));
    const Word v(r.begin() + static_cast<std::ptrdiff_t>(pos) + 1, r.end());
    Word expr;
    if (r[pos] > 0) {
      expr = inverse(u);
      const Word iv = inverse(v);
      expr.insert(expr.end(), iv.begin(), iv.end());
    } else {
      expr = v;
      expr.insert(expr.end(), u.begin(), u.end());
    }
    expr = free_reduce(expr);
    const Word expr_inv = inverse(expr);

    std::vector<Word> next;
    std::set<Word> seen;
    total = 0;
    for (std::size_t i = 0; i < relators_.size(); ++i) {
      if (i == pick_rel) continue;
      Word w;
      for (Symbol s : relators_[i]) {
        if (generator_of(s) == pick_gen) {
          const Word& e = s > 0 ? expr : expr_inv;
          w.insert(w.end(), e.begin(), e.end());
        } else {
          w.push_back(s);
        }
      }
      w = cyclic_reduce(w);
      if (w.empty()) continue;
      Word key = canonical_relator(w);
      if (seen.insert(key).second) {
        total += key.size();
        next.push_back(std::move(key));
      }
    }
    relators_ = std::move(next);
    eliminated[pick_gen] = expr;
    order.push_back(pick_gen);
    alive.erase(pick_gen);
  }

  if (order.empty()) return;
  alive_.assign(alive.begin(), alive.end());

  // Resolve eliminated roots in reverse order: later eliminations only use
  // roots still alive at their time, so resolving backwards is acyclic.
  std::map<std::size_t, Word> resolved;
  for (auto it = order.rbegin(); it != order.rend() && words_available_; ++it) {
    Word w;
    for (Symbol s : eliminated[*it]) {
      const std::size_t g = generator_of(s);
      const auto found = resolved.find(g);
      if (found == resolved.end()) {
        w.push_back(s);
      } else {
        const Word& e = s > 0 ? found->second : inverse(found->second);
        w.insert(w.end(), e.begin(), e.end());
      }
    }
    w = free_reduce(w);
    if (w.size() > kMaxExpressionLength) words_available_ = false;
    resolved[*it] = std::move(w);
  }
  if (!words_available_) {
    // Keep the abelian part exact through sparse resolution below.
    resolved.clear();
  }

  if (words_available_) {
    for (auto& e : expressions_) {
      if (e.empty()) continue;
      const auto found = resolved.find(generator_of(e[0]));
      if (found == resolved.end()) continue;
      e = e[0] > 0 ? found->second : inverse(found->second);
    }
    return;
  }

  // Abelian resolution only: expressions become abelianized, stored as
  // repeated symbols so h1_image still works.
  std::map<std::size_t, std::map<std::size_t, long long>> sparse;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::map<std::size_t, long long> acc;
    for (Symbol s : eliminated[*it]) {
      const std::size_t g = generator_of(s);
      const long long sign = s > 0 ? 1 : -1;
      const auto found = sparse.find(g);
      if (found == sparse.end()) acc[g] += sign;
      else
        for (const auto& [h, c] : found->second) acc[h] += sign * c;
    }
    sparse[*it] = std::move(acc);
  }
  for (auto& e : expressions_) {
    if (e.empty()) continue;
    const auto found = sparse.find(generator_of(e[0]));
    if (found == sparse.end()) continue;
    const long long sign = e[0] > 0 ? 1 : -1;
    Word w;
    for (const auto& [h, c] : found->second)
      for (long long k = 0; k < (c < 0 ? -c : c); ++k) w.push_back(symbol_of(h, sign * c < 0));
    e = std::move(w);
  }
}

void ReducedGroup::compute_abelianization() {
  alive_index_.assign(expressions_.size(), -1);
  for (std::size_t i = 0; i < alive_.size(); ++i) alive_index_[alive_[i]] = static_cast<long>(i);
  const std::size_t m = alive_.size();

  std::vector<std::vector<BigInt>> matrix;
  for (const auto& r : relators_) {
    std::vector<BigInt> row(m);
    for (Symbol s : r) row[static_cast<std::size_t>(alive_index_[generator_of(s)])] += s > 0 ? 1 : -1;
    if (std::any_of(row.begin(), row.end(), [](const BigInt& x) { return x != 0; }))
      matrix.push_back(std::move(row));
  }
  const SmithForm snf = smith_normal_form(matrix, m);

  // Coordinate columns: torsion pivots, then free columns.
  std::vector<std::size_t> columns;
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < snf.diagonal.size(); ++i)
    if (snf.diagonal[i] != 0) {
      ++nonzero;
      if (snf.diagonal[i] > 1) {
        columns.push_back(i);
        invariants_.torsion.push_back(snf.diagonal[i]);
        torsion_orders_.push_back(to_int64(snf.diagonal[i], "torsion order"));
      }
    }
  for (std::size_t j = nonzero; j < m; ++j) columns.push_back(j);
  invariants_.rank = m - nonzero;

  std::vector<std::vector<std::int64_t>> alive_h1(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto& coords = alive_h1[i];
    for (std::size_t c = 0; c < columns.size(); ++c) {
      BigInt value = snf.column_transform[i][columns[c]];
      if (c < torsion_orders_.size()) {
        const BigInt order = torsion_orders_[c];
        value %= order;
        if (value < 0) value += order;
      }
      coords.push_back(to_int64(value, "H1 coordinate"));
    }
  }
  generator_h1_.assign(expressions_.size(), std::vector<std::int64_t>(columns.size(), 0));
  for (std::size_t g = 0; g < expressions_.size(); ++g) {
    auto& acc = generator_h1_[g];
    for (Symbol s : expressions_[g]) {
      const auto& row = alive_h1[static_cast<std::size_t>(alive_index_[generator_of(s)])];
      for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += s > 0 ? row[c] : -row[c];
    }
    h1_normalize(acc);
  }
}

void ReducedGroup::classify() {
  const std::size_t m = alive_.size();
  if (m == 0) shape_ = GroupShape::Trivial;
  else if (m == 1) shape_ = GroupShape::Cyclic;
  else if (relators_.empty()) shape_ = GroupShape::Free;
  else {
    const std::set<Word> known(relators_.begin(), relators_.end());
    bool all_commute = true;
    for (std::size_t a = 0; a < m && all_commute; ++a)
      for (std::size_t b = a + 1; b < m && all_commute; ++b) {
        const Symbol x = symbol_of(alive_[a]), y = symbol_of(alive_[b]);
        all_commute = known.count(canonical_relator({x, y, -x, -y})) > 0 ||
                      known.count(canonical_relator({x, -y, -x, y})) > 0;
      }
    shape_ = all_commute ? GroupShape::Abelian : GroupShape::General;
  }
}

void ReducedGroup::h1_normalize(std::vector<std::int64_t>& v) const {
  for (std::size_t c = 0; c < torsion_orders_.size(); ++c) {
    v[c] %= torsion_orders_[c];
    if (v[c] < 0) v[c] += torsion_orders_[c];
  }
}

void ReducedGroup::h1_accumulate(std::vector<std::int64_t>& acc, Symbol s) const {
  const auto& row = generator_h1_[generator_of(s)];
  for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += s > 0 ? row[c] : -row[c];
  h1_normalize(acc);
}

std::vector<std::int64_t> ReducedGroup::h1_image(const Word& w) const {
  std::vector<std::int64_t> acc(h1_dimension(), 0);
  for (Symbol s : w) {
    const auto& row = generator_h1_[generator_of(s)];
    for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += s > 0 ? row[c] : -row[c];
  }
  h1_normalize(acc);
  return acc;
}

std::optional<Word> ReducedGroup::reduced_word(const Word& w) const {
  if (!words_available_) return std::nullopt;
  Word out;
  for (Symbol s : w) {
    const Word& e = expressions_[generator_of(s)];
    if (s > 0) {
      out.insert(out.end(), e.begin(), e.end());
    } else {
      for (auto it = e.rbegin(); it != e.rend(); ++it) out.push_back(-*it);
    }
  }
  return free_reduce(out);
}

}  // namespace dhtk
