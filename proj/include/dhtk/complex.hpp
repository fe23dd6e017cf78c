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

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "dhtk/chains.hpp"
#include "dhtk/group.hpp"

namespace dhtk {

using Triad = std::array<Vertex, 3>;

/// Edge-path presentation of the clique 2-complex of an entourage: vertices
/// are points, edges are related pairs, faces are triads. Generators are the
/// non-tree edges of a BFS tree rooted at vertex 0.
class GroupPresentation {
 public:
  const SpacePtr& space() const noexcept { return entourage_->space(); }
  const EntouragePtr& entourage() const noexcept { return entourage_; }
  Vertex basepoint() const noexcept { return 0; }

  /// Parent in the spanning tree; the root is its own parent.
  Vertex parent(Vertex v) const { return parent_[v]; }
  std::size_t depth(Vertex v) const { return depth_[v]; }
  /// Tree path from the basepoint to v.
  std::vector<Vertex> tree_path(Vertex v) const;

  std::size_t edge_count() const noexcept { return edge_count_; }
  const std::vector<std::pair<Vertex, Vertex>>& generators() const noexcept { return generators_; }
  const std::vector<Triad>& triads() const noexcept { return triads_; }
  const std::vector<Word>& relators() const noexcept { return relators_; }

  /// Symbol of traversing i -> j; 0 for tree edges and the diagonal.
  Symbol step_symbol(Vertex i, Vertex j) const { return symbols_[i * n_ + j]; }

  const ReducedGroup& group() const noexcept { return *group_; }

 private:
  friend GroupPresentation build_presentation(const EntouragePtr& e, bool check_chained);
  GroupPresentation() = default;

  EntouragePtr entourage_;
  std::size_t n_ = 0;
  std::vector<Vertex> parent_;
  std::vector<std::size_t> depth_;
  std::size_t edge_count_ = 0;
  std::vector<std::pair<Vertex, Vertex>> generators_;
  std::vector<Triad> triads_;
  std::vector<Word> relators_;
  std::vector<Symbol> symbols_;
  std::shared_ptr<const ReducedGroup> group_;
};

/// Throws NotConnected when the entourage does not connect the space and,
/// with `check_chained`, NotChained for a non-chained entourage.
GroupPresentation build_presentation(const EntouragePtr& e, bool check_chained = true);

/// Freely reduced generator word of a loop. Throws NotALoop, and
/// StepNotInEntourage for steps outside the presentation's entourage.
Word loop_word(const GroupPresentation& pres, const std::vector<Vertex>& loop);
Word loop_word(const GroupPresentation& pres, const Chain& loop);

/// Abelian invariants of the deck group.
AbelianInvariants h1(const GroupPresentation& pres);
std::vector<std::int64_t> h1_image(const GroupPresentation& pres, const Chain& loop);

/// Exact element identity, when the simplified group admits one.
struct GroupKey {
  std::vector<std::int64_t> h1;
  Word word;
  bool operator==(const GroupKey&) const = default;
  bool operator<(const GroupKey& o) const {
    return h1 != o.h1 ? h1 < o.h1 : word < o.word;
  }
  bool is_identity() const;
};

std::optional<GroupKey> group_key(const GroupPresentation& pres, const Word& w);

enum class Verdict { Null, NonNull, Unknown };
enum class Strategy { FreeReduction, Abelianization, BoundedSearch };

const char* to_string(Verdict v);
const char* to_string(Strategy s);

struct NullityVerdict {
  Verdict verdict = Verdict::Unknown;
  Strategy strategy = Strategy::BoundedSearch;
  std::optional<MoveSequence> certificate;  // Null: ends at a constant chain
  std::vector<std::int64_t> h1;             // NonNull by abelianization
  Word word;                                // NonNull by free reduction
  std::size_t states = 0;                   // search states expanded
};

inline constexpr std::size_t kDefaultSearchBudget = 1'000'000;

/// Which cascade stages may run; used to cross-check strategies.
struct StrategyMask {
  bool free_reduction = true;
  bool abelianization = true;
  bool search = true;
};

/// Cascade: free reduction when there are no relators (or the simplified
/// group is free), H1 image, then constructive contraction and bounded
/// best-first search. Null and NonNull are always certified.
NullityVerdict decide_null(const GroupPresentation& pres, const Chain& loop,
                           std::size_t budget = kDefaultSearchBudget, StrategyMask mask = {});

/// Exact nullity from the group structure alone, without a move
/// certificate; nullopt when the group has no faithful key.
std::optional<bool> null_by_structure(const GroupPresentation& pres, const std::vector<Vertex>& loop);

/// Contracts a loop with moves only: greedy removals, a common-ball cone,
/// and the refine-and-cone construction. nullopt when none applies.
std::optional<MoveSequence> constructive_contraction(const Chain& loop);

struct KernelGenerator {
  Triad triad;  // coarse triad that was refined
  Chain loop;   // fine loop at the basepoint: tree path, refined triad, tree path back
};

/// Fine refinements of the coarse triads that are not already fine triads,
/// conjugated to the basepoint. Their normal closure is the kernel of the
/// map from the fine deck group to the coarse one. Deduplicated by H1 image
/// when the fine group is abelian, by reduced word when it is free.
std::vector<KernelGenerator> kernel_generators(const GroupPresentation& fine,
                                               const EntouragePtr& coarse);

/// One kernel generator for a single coarse triad.
KernelGenerator conjugated_refined_triad(const GroupPresentation& fine, const EntouragePtr& coarse,
                                         const Triad& triad);

/// Moves contracting a kernel generator inside the coarse entourage.
MoveSequence contract_refined_triad(const KernelGenerator& gen, const EntouragePtr& coarse,
                                    const EntouragePtr& fine);

}  // namespace dhtk
