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

#include "dhtk/spectra.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>

#include "dhtk/error.hpp"

namespace dhtk {

const char* to_string(SpectrumKind k) {
  switch (k) {
    case SpectrumKind::HCS: return "HCS";
    case SpectrumKind::CS: return "CS";
    case SpectrumKind::ECS: return "ECS";
    case SpectrumKind::ES: return "ES";
    case SpectrumKind::MLS: return "MLS";
    case SpectrumKind::NCProfile: return "NC";
  }
  return "HCS";
}

const char* to_string(Completeness c) {
  switch (c) {
    case Completeness::Exact: return "exact";
    case Completeness::RelativeToFamily: return "relative-to-family";
    case Completeness::BudgetLimited: return "budget-limited";
  }
  return "exact";
}

std::vector<Rational> SpectrumReport::value_list() const {
  std::vector<Rational> out;
  for (const auto& v : values) out.push_back(v.value);
  return out;
}

namespace {

using PresPtr = std::shared_ptr<const GroupPresentation>;

PresPtr present(const EntouragePtr& e) {
  return std::make_shared<const GroupPresentation>(build_presentation(e));
}

bool is_zero(const std::vector<std::int64_t>& v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

/// Group-element arithmetic along chains. Uses the faithful key when the
/// group has one and H1 otherwise (then `faithful` is false).
class KeyArithmetic {
 public:
  explicit KeyArithmetic(PresPtr pres) : pres_(std::move(pres)) {
    const ReducedGroup& g = pres_->group();
    faithful_ = g.has_faithful_key();
    words_ = faithful_ && !g.key_is_h1();
  }

  bool faithful() const { return faithful_; }
  const GroupPresentation& presentation() const { return *pres_; }

  GroupKey identity() const {
    GroupKey k;
    if (!words_) k.h1.assign(pres_->group().h1_dimension(), 0);
    return k;
  }

  GroupKey step(const GroupKey& key, Vertex v, Vertex w) const {
    const Symbol s = pres_->step_symbol(v, w);
    if (s == 0) return key;
    GroupKey out = key;
    if (words_) {
      const Word e = *pres_->group().reduced_word({s});
      out.word.insert(out.word.end(), e.begin(), e.end());
      out.word = free_reduce(out.word);
    } else {
      pres_->group().h1_accumulate(out.h1, s);
    }
    return out;
  }

  /// Identity of the free class up to orientation.
  GroupKey free_class(const GroupKey& key) const {
    GroupKey out;
    if (words_) {
      out.word = canonical_relator(key.word);
      return out;
    }
    std::vector<std::int64_t> neg(key.h1.size());
    for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -key.h1[i];
    pres_->group().h1_normalize(neg);
    out.h1 = std::min(key.h1, neg);
    return out;
  }

 private:
  PresPtr pres_;
  bool faithful_ = false;
  bool words_ = false;
};

/// Refined gap paths between coarse-related points, cached per ordered pair.
class GapCache {
 public:
  GapCache(EntouragePtr coarse, PresPtr fine) : coarse_(std::move(coarse)), fine_(std::move(fine)) {}

  const Word& word(Vertex a, Vertex b) {
    auto it = words_.find({a, b});
    if (it != words_.end()) return it->second;
    const Chain step = validate_chain(coarse_, {a, b});
    const RefineResult r = refine(step, fine_->entourage());
    const auto& pts = r.refined.points();
    Word w;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      if (const Symbol s = fine_->step_symbol(pts[i], pts[i + 1]); s != 0) w.push_back(s);
    return words_.emplace(std::make_pair(a, b), std::move(w)).first->second;
  }

  Word triad_word(const Triad& t) {
    Word w = word(t[0], t[1]);
    const Word& w2 = word(t[1], t[2]);
    const Word& w3 = word(t[2], t[0]);
    w.insert(w.end(), w2.begin(), w2.end());
    w.insert(w.end(), w3.begin(), w3.end());
    return free_reduce(w);
  }

 private:
  EntouragePtr coarse_;
  PresPtr fine_;
  std::map<std::pair<Vertex, Vertex>, Word> words_;
};

/// Triads of `coarse` that are not triads of `fine`, lexicographic.
template <typename Visit>
void for_each_new_triad(const Entourage& coarse, const Entourage& fine, Visit&& visit) {
  for (Vertex a = 0; a < coarse.size(); ++a) {
    const VertexSet& ra = coarse.row(a);
    for (auto bi = ra.find_next(a); bi != VertexSet::npos; bi = ra.find_next(bi)) {
      const auto b = static_cast<Vertex>(bi);
      const VertexSet both = ra & coarse.row(b);
      for (auto ci = both.find_next(b); ci != VertexSet::npos; ci = both.find_next(ci)) {
        const auto c = static_cast<Vertex>(ci);
        if (fine.contains(a, b) && fine.contains(b, c) && fine.contains(a, c)) continue;
        if (!visit(Triad{a, b, c})) return;
      }
    }
  }
}

struct CriticalStep {
  std::size_t index = 0;
  PresPtr fine;
  PresPtr coarse;
  std::size_t multiplicity = 1;
  std::optional<Triad> witness;
  bool undecided = false;
};

/// Consecutive closed metric entourages where the induced map on deck
/// groups has a nontrivial kernel.
// Only chained scales take part: refining a coarse triad into the previous
// scale needs fine paths inside coarse balls. Skipped scales are counted.
std::vector<CriticalStep> critical_scan(const SpacePtr& space, std::size_t budget,
                                        bool& undecided_any, std::size_t& skipped) {
  std::vector<CriticalStep> out;
  const auto& values = space->distance_values();
  if (values.empty()) return out;
  PresPtr prev = present(share(closed_entourage_units(space, values[0])));
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (prev->group().shape() == GroupShape::Trivial) break;
    const EntouragePtr coarse_e = share(closed_entourage_units(space, values[k]));
    if (!is_chained(*coarse_e)) {
      ++skipped;
      continue;
    }
    PresPtr cur = present(coarse_e);
    const ReducedGroup& fg = prev->group();
    const AbelianInvariants& before = fg.invariants();
    const AbelianInvariants& after = cur->group().invariants();

    CriticalStep step;
    step.index = k;
    step.fine = prev;
    step.coarse = cur;
    GapCache gaps(coarse_e, prev);
    bool critical = false;
    if (!(before == after)) {
      critical = true;
      const std::size_t b = before.min_generators(), a = after.min_generators();
      step.multiplicity = b > a ? b - a : 1;
      for_each_new_triad(*coarse_e, *prev->entourage(), [&](const Triad& t) {
        if (is_zero(fg.h1_image(gaps.triad_word(t)))) return true;
        step.witness = t;
        return false;
      });
    } else if (fg.shape() == GroupShape::Free && fg.has_words()) {
      // Equal H1 can still hide commutators dying in a free group.
      for_each_new_triad(*coarse_e, *prev->entourage(), [&](const Triad& t) {
        if (fg.reduced_word(gaps.triad_word(t))->empty()) return true;
        critical = true;
        step.witness = t;
        return false;
      });
    } else if (fg.shape() == GroupShape::General) {
      for_each_new_triad(*coarse_e, *prev->entourage(), [&](const Triad& t) {
        const KernelGenerator gen = conjugated_refined_triad(*prev, coarse_e, t);
        const NullityVerdict v = decide_null(*prev, gen.loop, budget);
        if (v.verdict == Verdict::Unknown) step.undecided = true;
        if (v.verdict != Verdict::NonNull) return true;
        critical = true;
        step.witness = t;
        return false;
      });
      if (!critical && step.undecided) undecided_any = true;
    }
    // Trivial, cyclic and abelian groups with equal invariants: a surjection
    // between isomorphic finitely generated abelian groups is injective.
    if (critical) out.push_back(std::move(step));
    prev = std::move(cur);
  }
  return out;
}

SpectralCertificate triad_certificate(const CriticalStep& step, const Rational& value) {
  SpectralCertificate cert;
  cert.value = value;
  cert.fine = step.fine->entourage();
  cert.coarse = step.coarse->entourage();
  if (!step.witness) return cert;
  const KernelGenerator gen = conjugated_refined_triad(*step.fine, cert.coarse, *step.witness);
  cert.loop = gen.loop;
  const ReducedGroup& fg = step.fine->group();
  const Word w = loop_word(*step.fine, gen.loop);
  cert.h1 = fg.h1_image(w);
  if (is_zero(cert.h1)) {
    cert.h1.clear();
    if (fg.has_words()) cert.word = *fg.reduced_word(w);
  }
  cert.contraction = contract_refined_triad(gen, cert.coarse, cert.fine);
  return cert;
}

}  // namespace

bool verify_certificate(const SpectralCertificate& cert) {
  if (!cert.loop || !cert.contraction || !cert.fine || !cert.coarse) return false;
  try {
    const GroupPresentation fine = build_presentation(cert.fine, false);
    const Word w = loop_word(fine, *cert.loop);
    const ReducedGroup& g = fine.group();
    if (!cert.h1.empty()) {
      if (is_zero(cert.h1) || g.h1_image(w) != cert.h1) return false;
    } else {
      if (cert.word.empty() || g.shape() != GroupShape::Free || !g.has_words()) return false;
      if (*g.reduced_word(w) != cert.word) return false;
    }
    const MoveSequence& m = *cert.contraction;
    if (m.start.points() != cert.loop->points()) return false;
    if (!m.start.relation().same_relation(*cert.coarse)) return false;
    return verify(m) && m.end.is_constant();
  } catch (const Error&) {
    return false;
  }
}

SpectrumReport homotopy_critical_spectrum(const SpacePtr& space, std::size_t budget) {
  SpectrumReport report;
  report.kind = SpectrumKind::HCS;
  report.family = "closed metric entourages at all distance values";
  report.methods = {"h1-invariants", "refined-triad-kernel"};
  bool undecided = false;
  std::size_t skipped = 0;
  const auto steps = critical_scan(space, budget, undecided, skipped);
  for (const auto& step : steps) {
    const Rational value = space->to_rational(space->distance_values()[step.index]);
    SpectralValue sv;
    sv.value = value;
    sv.multiplicity = step.multiplicity;
    sv.undecided = step.undecided;
    sv.certificates.push_back(report.certificates.size());
    report.certificates.push_back(triad_certificate(step, value));
    report.values.push_back(std::move(sv));
  }
  report.completeness = undecided ? Completeness::BudgetLimited : Completeness::Exact;
  if (skipped > 0) {
    report.methods.push_back("skipped " + std::to_string(skipped) + " non-chained scales");
    if (!undecided) report.completeness = Completeness::RelativeToFamily;
  }
  return report;
}

SpectrumReport covering_spectrum(const SpectrumReport& hcs) {
  SpectrumReport cs = hcs;
  cs.kind = SpectrumKind::CS;
  cs.methods.push_back("scaled-3/2");
  const Rational factor(3, 2);
  for (auto& v : cs.values) v.value *= factor;
  return cs;
}

SpectrumReport covering_spectrum(const SpacePtr& space, std::size_t budget) {
  return covering_spectrum(homotopy_critical_spectrum(space, budget));
}

std::vector<EntouragePtr> metric_family(const SpacePtr& space) {
  std::vector<EntouragePtr> out;
  for (Units v : space->distance_values()) {
    EntouragePtr e = share(closed_entourage_units(space, v));
    if (is_chained(*e)) out.push_back(std::move(e));
  }
  return out;
}

SpectrumReport nc_profile(const SpacePtr& space, const std::vector<EntouragePtr>& family,
                          std::vector<Rational> grid, std::size_t budget) {
  SpectrumReport report;
  report.kind = SpectrumKind::ECS;
  report.completeness = Completeness::RelativeToFamily;
  report.methods = {"covers-equivalent"};
  report.family = std::to_string(family.size()) + " entourages";

  std::vector<std::optional<Rational>> sigmas;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (family[i]->space() != space)
      throw Error(ErrorKind::MixedSpaces, "family member bound to another space",
                  static_cast<long>(i));
    const ChainedResult chained = is_chained(*family[i]);
    if (!chained)
      throw Error(ErrorKind::NotChained, "family member " + std::to_string(i) + " is not chained",
                  static_cast<long>(i));
    sigmas.push_back(sigma(*family[i]));
  }

  // Class of each member; undecided members get their own class and a flag.
  std::vector<std::size_t> cls(family.size());
  std::vector<bool> undecided(family.size(), false);
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < family.size(); ++i) {
    bool placed = false;
    for (std::size_t r = 0; r < reps.size() && !placed; ++r) {
      const Equivalence eq = covers_equivalent(family[i], family[reps[r]], budget);
      if (eq == Equivalence::Equivalent) {
        cls[i] = r;
        placed = true;
      } else if (eq == Equivalence::Unknown) {
        undecided[i] = true;
      }
    }
    if (!placed) {
      cls[i] = reps.size();
      reps.push_back(i);
    }
  }

  if (grid.empty()) {
    for (const auto& s : sigmas)
      if (s) grid.push_back(*s);
    for (Units v : space->distance_values()) grid.push_back(space->to_rational(v));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  auto count_at = [&](const std::optional<Rational>& eps) {
    std::set<std::size_t> seen;
    bool flag = false;
    for (std::size_t i = 0; i < family.size(); ++i) {
      const bool member = !sigmas[i] || (eps && *sigmas[i] >= *eps);
      if (!member) continue;
      seen.insert(cls[i]);
      flag = flag || undecided[i];
    }
    return std::make_pair(seen.size(), flag);
  };
  for (const auto& eps : grid) {
    const auto [count, flag] = count_at(eps);
    report.profile.push_back({eps, count, flag});
  }
  const std::size_t beyond = count_at(std::nullopt).first;
  for (std::size_t j = 0; j < report.profile.size(); ++j) {
    const std::size_t next = j + 1 < report.profile.size() ? report.profile[j + 1].classes : beyond;
    if (report.profile[j].classes > next) {
      SpectralValue sv;
      sv.value = report.profile[j].eps;
      sv.multiplicity = report.profile[j].classes - next;
      sv.undecided = report.profile[j].undecided;
      report.values.push_back(sv);
    }
  }
  return report;
}

namespace {

struct LoopSearchResult {
  Units length = std::numeric_limits<Units>::max();
  std::set<GroupKey> classes;
  std::vector<Vertex> witness;
  GroupKey witness_key;
  bool exhausted = false;
};

/// Dijkstra over (vertex, class) states from every start vertex. A closed
/// state whose class satisfies `accept` ends a loop; with `all_classes`
/// every class up to `bound` is recorded with its shortest length.
class LoopSearch {
 public:
  LoopSearch(const KeyArithmetic& fine, const KeyArithmetic* coarse, std::size_t budget)
      : fine_(fine), coarse_(coarse), budget_(budget) {}

  /// Shortest loop nontrivial at the fine scale and trivial at the coarse.
  LoopSearchResult shortest_critical() {
    LoopSearchResult result;
    const std::size_t n = fine_.presentation().entourage()->size();
    for (Vertex s = 0; s < n && !result.exhausted; ++s)
      run(s, result.length, [&](Units d, const GroupKey& key, const GroupKey& ckey,
                                const std::vector<Vertex>& path) {
        if (!ckey.is_identity()) return;
        if (d < result.length) {
          result.length = d;
          result.classes.clear();
          result.witness = path;
          result.witness_key = key;
        }
        if (d == result.length) result.classes.insert(fine_.free_class(key));
      }, result.exhausted, false);
    return result;
  }

  /// Shortest length of every nontrivial class up to `bound`.
  std::map<GroupKey, Units> class_lengths(Units bound, bool& exhausted) {
    std::map<GroupKey, Units> best;
    const std::size_t n = fine_.presentation().entourage()->size();
    for (Vertex s = 0; s < n && !exhausted; ++s) {
      Units limit = bound;
      run(s, limit, [&](Units d, const GroupKey& key, const GroupKey&, const std::vector<Vertex>&) {
        const GroupKey c = fine_.free_class(key);
        auto it = best.find(c);
        if (it == best.end() || d < it->second) best[c] = d;
      }, exhausted, true);
    }
    return best;
  }

 private:
  struct State {
    Units dist;
    Vertex v;
    GroupKey key;
    GroupKey ckey;
    std::size_t parent;
  };

  template <typename OnLoop>
  void run(Vertex s, const Units& limit, OnLoop&& on_loop, bool& exhausted, bool expand_closed) {
    const Entourage& e = *fine_.presentation().entourage();
    const FiniteMetricSpace& space = *e.space();
    std::vector<State> states;
    std::map<std::pair<Vertex, GroupKey>, std::size_t> index;
    using Item = std::pair<Units, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    const GroupKey cid = coarse_ ? coarse_->identity() : GroupKey{};
    states.push_back({0, s, fine_.identity(), cid, static_cast<std::size_t>(-1)});
    index.emplace(std::make_pair(s, states[0].key), 0);
    queue.emplace(0, 0);
    std::vector<bool> done;
    while (!queue.empty()) {
      const auto [d, i] = queue.top();
      queue.pop();
      if (d != states[i].dist) continue;
      if (d > limit) break;
      if (++popped_ > budget_) {
        exhausted = true;
        return;
      }
      const State cur = states[i];
      if (cur.v == s && i != 0 && !cur.key.is_identity()) {
        std::vector<Vertex> path;
        for (std::size_t k = i; k != static_cast<std::size_t>(-1); k = states[k].parent)
          path.push_back(states[k].v);
        path.push_back(s);
        std::reverse(path.begin(), path.end());
        path.erase(path.begin());
        on_loop(d, cur.key, cur.ckey, path);
        if (!expand_closed) continue;
      }
      const VertexSet& row = e.row(cur.v);
      for (auto wi = row.find_first(); wi != VertexSet::npos; wi = row.find_next(wi)) {
        const auto w = static_cast<Vertex>(wi);
        if (w == cur.v) continue;
        const Units nd = d + space.units(cur.v, w);
        if (nd > limit) continue;
        GroupKey key = fine_.step(cur.key, cur.v, w);
        auto [it, inserted] = index.emplace(std::make_pair(w, key), states.size());
        if (inserted) {
          GroupKey ckey = coarse_ ? coarse_->step(cur.ckey, cur.v, w) : GroupKey{};
          states.push_back({nd, w, std::move(key), std::move(ckey), i});
          queue.emplace(nd, it->second);
        } else if (nd < states[it->second].dist) {
          State& st = states[it->second];
          st.dist = nd;
          st.parent = i;
          st.ckey = coarse_ ? coarse_->step(cur.ckey, cur.v, w) : GroupKey{};
          queue.emplace(nd, it->second);
        }
      }
    }
  }

  const KeyArithmetic& fine_;
  const KeyArithmetic* coarse_;
  std::size_t budget_;
  std::size_t popped_ = 0;
};

}  // namespace

SpectrumReport entourage_spectrum(const SpacePtr& space, std::size_t budget) {
  SpectrumReport report;
  report.kind = SpectrumKind::ES;
  report.family = "strict/closed metric entourage pairs at all distance values";
  report.methods = {"refined-triad-kernel", "shortest-critical-loop"};
  bool undecided = false;
  std::size_t skipped = 0;
  const auto steps = critical_scan(space, budget, undecided, skipped);
  std::map<Units, std::pair<std::size_t, std::vector<std::size_t>>> merged;
  bool approximate = false;
  for (const auto& step : steps) {
    const KeyArithmetic fine(step.fine);
    const KeyArithmetic coarse(step.coarse);
    approximate = approximate || !fine.faithful() || !coarse.faithful();
    LoopSearch search(fine, &coarse, budget);
    const LoopSearchResult found = search.shortest_critical();
    if (found.exhausted) undecided = true;
    if (found.witness.empty()) continue;

    SpectralCertificate cert;
    cert.value = space->to_rational(found.length);
    cert.fine = step.fine->entourage();
    cert.coarse = step.coarse->entourage();
    cert.loop = validate_chain(cert.fine, found.witness);
    const Word w = loop_word(*step.fine, *cert.loop);
    cert.h1 = step.fine->group().h1_image(w);
    if (is_zero(cert.h1)) {
      cert.h1.clear();
      if (step.fine->group().has_words()) cert.word = *step.fine->group().reduced_word(w);
    }
    const NullityVerdict v =
        decide_null(*step.coarse, validate_chain(cert.coarse, found.witness), budget);
    if (v.verdict == Verdict::Null) cert.contraction = v.certificate;
    else undecided = true;

    auto& slot = merged[found.length];
    slot.first += found.classes.size();
    slot.second.push_back(report.certificates.size());
    report.certificates.push_back(std::move(cert));
  }
  for (auto& [units, slot] : merged) {
    SpectralValue sv;
    sv.value = space->to_rational(units);
    sv.multiplicity = slot.first;
    sv.certificates = std::move(slot.second);
    report.values.push_back(std::move(sv));
  }
  if (approximate) report.methods.push_back("h1-approximation");
  report.completeness = undecided ? Completeness::BudgetLimited : Completeness::RelativeToFamily;
  return report;
}

SpectrumReport minimum_length_spectrum(const EntouragePtr& e, const Rational& length_bound,
                                       std::size_t budget) {
  if (length_bound <= 0) throw Error(ErrorKind::BadParams, "length bound must be positive");
  SpectrumReport report;
  report.kind = SpectrumKind::MLS;
  report.family = e->provenance().describe();
  const KeyArithmetic keys(present(e));
  report.methods = {"shortest-loop-per-class"};
  if (!keys.faithful()) report.methods.push_back("h1-approximation");
  const FiniteMetricSpace& space = *e->space();
  const Units ceil_bound = space.ceil_units(length_bound);
  const Units bound = space.to_rational(ceil_bound) == length_bound ? ceil_bound : ceil_bound - 1;

  LoopSearch search(keys, nullptr, budget);
  bool exhausted = false;
  const auto lengths = search.class_lengths(bound, exhausted);
  std::map<Units, std::size_t> counts;
  for (const auto& [cls, len] : lengths) ++counts[len];
  for (const auto& [len, count] : counts) {
    SpectralValue sv;
    sv.value = space.to_rational(len);
    sv.multiplicity = count;
    report.values.push_back(sv);
  }
  report.completeness = exhausted ? Completeness::BudgetLimited : Completeness::Exact;
  return report;
}

bool T2Bound::admits(std::size_t count) const {
  if (count <= 1) return true;
  if (log2_bound >= 64) return true;
  const auto exponent = static_cast<unsigned>(log2_bound);
  return BigInt(count) <= (BigInt(1) << exponent);
}

T2Bound t2_bound(const FiniteMetricSpace& space, const Rational& eps) {
  if (eps <= 0) throw Error(ErrorKind::NonpositiveEps, "eps must be positive");
  T2Bound out;
  out.quarter = covering_number(space, eps / 4);
  out.half = covering_number(space, eps / 2);
  out.log2_bound = boost::multiprecision::pow(BigInt(out.quarter.count),
                                              static_cast<unsigned>(40 * out.half.count));
  out.log2_digits = out.log2_bound.str().size();
  return out;
}

bool multiset_included(const std::vector<SpectralValue>& inner,
                       const std::vector<SpectralValue>& outer) {
  for (const auto& v : inner) {
    const auto it = std::find_if(outer.begin(), outer.end(),
                                 [&](const SpectralValue& o) { return o.value == v.value; });
    if (it == outer.end() || it->multiplicity < v.multiplicity) return false;
  }
  return true;
}

}  // namespace dhtk
