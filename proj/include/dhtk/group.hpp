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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "dhtk/rational.hpp"

namespace dhtk {

/// Word over generators: symbol +(g+1) is generator g, -(g+1) its inverse.
using Symbol = std::int32_t;
using Word = std::vector<Symbol>;

inline Symbol symbol_of(std::size_t generator, bool inverse = false) {
  const auto s = static_cast<Symbol>(generator + 1);
  return inverse ? -s : s;
}
inline std::size_t generator_of(Symbol s) { return static_cast<std::size_t>((s < 0 ? -s : s) - 1); }

/// Cancels adjacent inverse pairs.
Word free_reduce(const Word& w);
/// Free reduction followed by cancelling matching ends.
Word cyclic_reduce(const Word& w);
Word inverse(const Word& w);
/// Least rotation of the cyclic reduction of w or of its inverse; equal for
/// words that define the same relation.
Word canonical_relator(const Word& w);
/// Least rotation of the cyclic reduction of w; a conjugacy invariant in a
/// free group. Use with the inverse to identify classes up to sign.
Word canonical_cyclic(const Word& w);

/// Abelian invariants: Z^rank plus Z/t for every t in torsion (each > 1,
/// each dividing the next).
struct AbelianInvariants {
  std::size_t rank = 0;
  std::vector<BigInt> torsion;

  /// Minimal number of generators.
  std::size_t min_generators() const { return rank + torsion.size(); }
  bool trivial() const { return rank == 0 && torsion.empty(); }
  bool operator==(const AbelianInvariants&) const = default;
};

/// Diagonal form and column transform of an integer matrix: A V is
/// row-equivalent to diag(d). Entries past the rank are zero.
struct SmithForm {
  std::vector<BigInt> diagonal;  // length min(rows, cols), nonnegative
  std::vector<std::vector<BigInt>> column_transform;  // cols x cols, unimodular
};

SmithForm smith_normal_form(std::vector<std::vector<BigInt>> matrix, std::size_t cols);

/// Invariants of Z^cols modulo the row span of `matrix`.
AbelianInvariants abelian_invariants(const std::vector<std::vector<BigInt>>& matrix,
                                     std::size_t cols);

/// What the simplified presentation certifies about the group.
enum class GroupShape {
  Trivial,   // no generators survive
  Cyclic,    // one generator
  Free,      // no relators survive
  Abelian,   // every pair of surviving generators has a commutator relator
  General,
};

const char* to_string(GroupShape shape);

/// A finitely presented group after simplification. Elements of the
/// original free group map to H1 coordinates and, when expressions stayed
/// small, to words over the surviving generators.
class ReducedGroup {
 public:
  ReducedGroup(std::size_t num_generators, const std::vector<Word>& relators);

  GroupShape shape() const noexcept { return shape_; }
  const AbelianInvariants& invariants() const noexcept { return invariants_; }
  std::size_t surviving_generators() const noexcept { return alive_.size(); }
  const std::vector<Word>& surviving_relators() const noexcept { return relators_; }

  /// Dimension of H1 coordinate vectors: torsion coordinates first (taken
  /// modulo their order), then free coordinates.
  std::size_t h1_dimension() const noexcept { return invariants_.torsion.size() + invariants_.rank; }

  /// H1 coordinates of an original-generator word.
  std::vector<std::int64_t> h1_image(const Word& w) const;
  /// Adds coordinates and reduces torsion entries.
  void h1_accumulate(std::vector<std::int64_t>& acc, Symbol s) const;
  void h1_normalize(std::vector<std::int64_t>& v) const;

  /// Word over surviving generators, freely reduced; nullopt when
  /// expressions were too long to keep.
  std::optional<Word> reduced_word(const Word& w) const;
  bool has_words() const noexcept { return words_available_; }
  const Word& generator_expression(std::size_t g) const { return expressions_[g]; }

  /// An invariant that separates all elements: H1 for trivial, cyclic and
  /// abelian groups, the reduced word for free groups.
  bool has_faithful_key() const noexcept {
    return shape_ != GroupShape::General && (shape_ != GroupShape::Free || words_available_);
  }
  bool key_is_h1() const noexcept { return shape_ != GroupShape::Free; }

 private:
  void collapse_short_relators(std::size_t num_generators, const std::vector<Word>& relators);
  void eliminate_generators();
  void compute_abelianization();
  void classify();

  GroupShape shape_ = GroupShape::General;
  AbelianInvariants invariants_;
  std::vector<std::size_t> alive_;       // surviving original generator ids
  std::vector<long> alive_index_;        // original id -> index in alive_, or -1
  std::vector<Word> relators_;           // over original ids of survivors
  std::vector<Word> expressions_;        // per original generator, over survivors
  bool words_available_ = true;
  std::vector<std::vector<std::int64_t>> generator_h1_;  // per original generator
  std::vector<std::int64_t> torsion_orders_;
};

}  // namespace dhtk
