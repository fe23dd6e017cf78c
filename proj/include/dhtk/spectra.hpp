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
#include <optional>
#include <string>
#include <vector>

#include "dhtk/cover.hpp"

namespace dhtk {

enum class SpectrumKind { HCS, CS, ECS, ES, MLS, NCProfile };
enum class Completeness { Exact, RelativeToFamily, BudgetLimited };

const char* to_string(SpectrumKind k);
const char* to_string(Completeness c);

/// Evidence for one spectral value: a loop that is non-null at the fine
/// scale (nonzero H1 image, or a nonempty reduced word when the fine group
/// is free) and a move sequence contracting it at the coarse scale.
struct SpectralCertificate {
  Rational value;
  EntouragePtr fine;
  EntouragePtr coarse;
  std::optional<Chain> loop;
  std::vector<std::int64_t> h1;
  Word word;
  std::optional<MoveSequence> contraction;
};

/// Rebuilds the fine presentation, recomputes the obstruction and replays
/// the contraction at the coarse scale.
bool verify_certificate(const SpectralCertificate& cert);

struct SpectralValue {
  Rational value;
  std::size_t multiplicity = 1;
  std::vector<std::size_t> certificates;  // indices into SpectrumReport::certificates
  bool undecided = false;
};

struct ProfilePoint {
  Rational eps;
  std::size_t classes = 0;
  bool undecided = false;
};

struct SpectrumReport {
  SpectrumKind kind = SpectrumKind::HCS;
  std::vector<SpectralValue> values;  // strictly increasing
  std::vector<std::string> methods;
  std::string family;
  Completeness completeness = Completeness::Exact;
  std::vector<SpectralCertificate> certificates;
  std::vector<ProfilePoint> profile;  // NC(eps) for NC/ECS reports

  std::vector<Rational> value_list() const;
};

/// Scans consecutive closed metric entourages and reports every distance at
/// which the deck group loses classes. Multiplicity is the drop in the
/// minimal generator count of H1, at least 1.
SpectrumReport homotopy_critical_spectrum(const SpacePtr& space,
                                          std::size_t budget = kDefaultSearchBudget);

/// HCS scaled by 3/2 with the same multiplicities and certificates.
SpectrumReport covering_spectrum(const SpectrumReport& hcs);
SpectrumReport covering_spectrum(const SpacePtr& space, std::size_t budget = kDefaultSearchBudget);

/// Closed metric entourages at every distance value that are chained; the
/// strict ones coincide with the closed ones one value lower.
std::vector<EntouragePtr> metric_family(const SpacePtr& space);

/// NC(eps) over `grid` (default: sigma values and distance values) and the
/// values where it jumps as eps decreases.
SpectrumReport nc_profile(const SpacePtr& space, const std::vector<EntouragePtr>& family,
                          std::vector<Rational> grid = {},
                          std::size_t budget = kDefaultSearchBudget);

/// Shortest critical loops for the strict/closed metric pairs.
SpectrumReport entourage_spectrum(const SpacePtr& space,
                                  std::size_t budget = kDefaultSearchBudget);

/// Minimum loop length of every nontrivial free class up to `length_bound`.
SpectrumReport minimum_length_spectrum(const EntouragePtr& e, const Rational& length_bound,
                                       std::size_t budget = kDefaultSearchBudget);

struct T2Bound {
  CoveringNumber quarter;  // C(X, eps/4)
  CoveringNumber half;     // C(X, eps/2)
  BigInt log2_bound;       // quarter^(40 * half)
  std::size_t log2_digits = 0;

  /// Exact comparison count <= 2^log2_bound.
  bool admits(std::size_t count) const;
};

T2Bound t2_bound(const FiniteMetricSpace& space, const Rational& eps);

/// True iff every value of `inner` occurs in `outer` with at least the
/// same multiplicity.
bool multiset_included(const std::vector<SpectralValue>& inner,
                       const std::vector<SpectralValue>& outer);

}  // namespace dhtk
