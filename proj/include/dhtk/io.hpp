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

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dhtk/chains.hpp"
#include "dhtk/complex.hpp"
#include "dhtk/cover.hpp"
#include "dhtk/spectra.hpp"

namespace dhtk {

// Keys are kept in std::map order, which makes every dump deterministic.
using Json = nlohmann::json;

inline constexpr std::string_view kReportSchema = "spectra-report/1";
inline constexpr std::string_view kCertificateSchema = "dhtk-certificate/1";

/// Rational distance matrix, one row per line, cells split by commas.
/// Blank lines and lines starting with '#' are skipped. Token errors are
/// reported as "source:line:column".
SpacePtr parse_matrix_csv(std::string_view text, std::string_view source = "<matrix>");

/// {"n": int, "edges": [[i, j, "w"], ...]}; weights may be strings or ints.
SpacePtr parse_graph_json(const Json& doc);

/// "circle:n=12,L=1", "torus:p=12,q=12,Lx=1,Ly=1[,triangulated=0]",
/// "wedge:L=1+3/2,nodes=12+18".
GeneratorSpec parse_generator(std::string_view text);

/// {"kind": "circle" | "torus_grid" | "wedge_of_circles", "params": {...}}.
GeneratorSpec generator_from_json(const Json& doc);
Json generator_to_json(const GeneratorSpec& spec);

std::string read_file(const std::string& path);
Json parse_json(std::string_view text, std::string_view source);

/// Entourage document: {"metric": {"eps": "1/3", "strict": false}},
/// {"base": true}, {"full": true} or {"pairs": [[i, j], ...]}.
Entourage entourage_from_json(const SpacePtr& space, const Json& doc);
Json entourage_to_json(const Entourage& e);

/// A list of entourage documents, or {"members": [...]}.
std::vector<EntouragePtr> family_from_json(const SpacePtr& space, const Json& doc);

/// {"points": [v0, v1, ...]} validated against `e`.
Chain chain_from_json(const EntouragePtr& e, const Json& doc);

/// {"moves": [{"op": "insert", "pos": p, "vertex": v} | {"op": "remove", "pos": p}]}.
std::vector<Move> moves_from_json(const Json& doc);
Json moves_to_json(const std::vector<Move>& moves);

/// Exact table of the space, rationals as canonical strings.
Json space_to_json(const FiniteMetricSpace& space);
SpacePtr space_from_json(const Json& doc);

Json presentation_to_json(const GroupPresentation& pres);
Json cover_to_json(const CoverBall& cb);
Json verdict_to_json(const NullityVerdict& v);

/// Report with sorted keys and "p/q" values; certificates are referenced by
/// index into the bundle written by `certificate_bundle`.
Json report_to_json(const SpectrumReport& report);
std::string report_table(const SpectrumReport& report);

/// Two whitespace columns "eps NC(eps)" for a step plot; empty profile gives
/// a header only.
std::string step_plot_data(const SpectrumReport& report);

/// Self-contained documents: each embeds the space so it can be checked
/// without the original input.
Json certificate_to_json(const SpectralCertificate& cert);
Json null_certificate_to_json(const MoveSequence& contraction);

struct CertificateCheck {
  bool valid = false;
  std::string reason;
};

/// Re-validates a document produced by either writer above.
CertificateCheck check_certificate(const Json& doc);

}  // namespace dhtk
