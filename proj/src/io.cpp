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

#include "dhtk/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "dhtk/error.hpp"

namespace dhtk {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

/// Message of `e` without its "Kind: " prefix.
std::string bare_message(const Error& e) {
  const std::string what = e.what();
  const auto colon = what.find(": ");
  return colon == std::string::npos ? what : what.substr(colon + 2);
}

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

/// Nonnegative rational from a JSON string or integer.
Rational json_rational(const Json& v, const std::string& what) {
  Rational r;
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (trim(s).substr(0, 1) == "-") parse_fail(what + ": negative value '" + s + "'");
    r = parse_rational(trim(s));
  } else if (v.is_number_integer()) {
    r = make_rational(v.get<std::int64_t>());
  } else {
    parse_fail(what + ": expected a rational string or an integer");
  }
  if (r < 0) parse_fail(what + ": negative value");
  return r;
}

std::int64_t json_int(const Json& v, const std::string& what) {
  if (!v.is_number_integer()) parse_fail(what + ": expected an integer");
  return v.get<std::int64_t>();
}

Vertex json_vertex(const Json& v, std::size_t n, const std::string& what) {
  const std::int64_t x = json_int(v, what);
  if (x < 0 || static_cast<std::size_t>(x) >= n)
    throw Error(ErrorKind::BadVertex, what + ": vertex " + std::to_string(x) + " out of range");
  return static_cast<Vertex>(x);
}

const Json& require(const Json& doc, const char* key, const std::string& what) {
  if (!doc.is_object() || !doc.contains(key)) parse_fail(what + ": missing \"" + key + "\"");
  return doc.at(key);
}


Json points_json(const std::vector<Vertex>& points) {
  Json out = Json::array();
  for (Vertex v : points) out.push_back(v);
  return out;
}

std::vector<Vertex> points_from_json(const Json& doc, std::size_t n, const std::string& what) {
  if (!doc.is_array()) parse_fail(what + ": expected an array of vertices");
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < doc.size(); ++i)
    out.push_back(json_vertex(doc[i], n, what + "[" + std::to_string(i) + "]"));
  return out;
}

std::map<std::string, std::string> generator_fields(std::string_view body) {
  std::map<std::string, std::string> out;
  std::size_t start = 0;
  while (start <= body.size()) {
    const auto comma = body.find(',', start);
    const std::string_view item =
        trim(body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!item.empty()) {
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) parse_fail("generator field '" + std::string(item) + "' lacks '='");
      out[std::string(trim(item.substr(0, eq)))] = std::string(trim(item.substr(eq + 1)));
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

int small_int(std::string_view token, const std::string& what) {
  const Rational r = parse_rational(token);
  if (denominator(r) != 1) throw Error(ErrorKind::BadParams, what + " must be an integer");
  return static_cast<int>(to_int64(numerator(r), what));
}

std::vector<std::string> split_plus(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, '+')) out.emplace_back(trim(item));
  return out;
}

std::string canonical_kind(std::string_view kind) {
  const std::string k = lower(trim(kind));
  if (k == "circle") return "circle";
  if (k == "torus" || k == "torus_grid") return "torus_grid";
  if (k == "wedge" || k == "wedge_of_circles") return "wedge_of_circles";
  throw Error(ErrorKind::BadParams, "unknown generator kind '" + std::string(kind) + "'");
}

void reject_unknown(const std::map<std::string, std::string>& fields,
                    std::initializer_list<const char*> known, const std::string& kind) {
  for (const auto& [key, value] : fields)
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
      throw Error(ErrorKind::BadParams, kind + " has no parameter '" + key + "'");
}

const std::string& field(const std::map<std::string, std::string>& fields, const char* key,
                         const std::string& kind) {
  const auto it = fields.find(key);
  if (it == fields.end()) throw Error(ErrorKind::BadParams, kind + " needs parameter '" + key + "'");
  return it->second;
}

bool truthy(const std::string& s) {
  const std::string v = lower(s);
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw Error(ErrorKind::BadParams, "expected a boolean, got '" + s + "'");
}

GeneratorSpec generator_from_fields(const std::string& kind,
                                    const std::map<std::string, std::string>& f) {
  if (kind == "circle") {
    reject_unknown(f, {"n", "L"}, kind);
    return CircleParams{small_int(field(f, "n", kind), "n"), parse_rational(field(f, "L", kind))};
  }
  if (kind == "torus_grid") {
    reject_unknown(f, {"p", "q", "Lx", "Ly", "triangulated"}, kind);
    TorusParams t;
    t.p = small_int(field(f, "p", kind), "p");
    t.q = small_int(field(f, "q", kind), "q");
    t.lx = parse_rational(field(f, "Lx", kind));
    t.ly = parse_rational(field(f, "Ly", kind));
    if (const auto it = f.find("triangulated"); it != f.end()) t.triangulated = truthy(it->second);
    return t;
  }
  reject_unknown(f, {"L", "nodes"}, kind);
  WedgeParams w;
  for (const auto& s : split_plus(field(f, "L", kind))) w.lengths.push_back(parse_rational(s));
  for (const auto& s : split_plus(field(f, "nodes", kind))) w.nodes.push_back(small_int(s, "nodes"));
  return w;
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  parse_fail("generator parameter must be a string, integer or boolean");
}

std::string join_plus(const Json& v) {
  if (!v.is_array()) return scalar_text(v);
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "+" : "") + scalar_text(v[i]);
  return out;
}

Json key_json(const GroupKey& key) {
  Json out = Json::object();
  out["h1"] = key.h1;
  out["word"] = key.word;
  return out;
}

}  // namespace

SpacePtr parse_matrix_csv(std::string_view text, std::string_view source) {
  const std::string src(source);
  std::vector<std::vector<Rational>> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    ++line_no;
    const std::string_view content = trim(line);
    if (!content.empty() && content.front() != '#') {
      std::vector<Rational> row;
      std::size_t cell_start = 0;
      std::size_t column = 0;
      while (true) {
        const auto comma = line.find(',', cell_start);
        const std::string_view raw =
            line.substr(cell_start, comma == std::string_view::npos ? std::string_view::npos
                                                                    : comma - cell_start);
        ++column;
        const std::string_view token = trim(raw);
        const std::size_t col =
            cell_start + static_cast<std::size_t>(token.empty() ? 0 : token.data() - raw.data()) + 1;
        const std::string where = src + ":" + std::to_string(line_no) + ":" + std::to_string(col);
        if (token.empty()) parse_fail(where + ": empty cell in column " + std::to_string(column));
        if (token.front() == '-') parse_fail(where + ": negative token '" + std::string(token) + "'");
        try {
          row.push_back(parse_rational(token));
        } catch (const Error& e) {
          throw Error(e.kind(), where + ": " + bare_message(e));
        }
        if (comma == std::string_view::npos) break;
        cell_start = comma + 1;
      }
      rows.push_back(std::move(row));
    }
    start = end + 1;
  }
  if (rows.empty()) parse_fail(src + ": no matrix rows");
  try {
    return from_distance_matrix(rows);
  } catch (const Error& e) {
    throw Error(e.kind(), src + ": " + bare_message(e), e.index());
  }
}

SpacePtr parse_graph_json(const Json& doc) {
  const std::int64_t n = json_int(require(doc, "n", "graph"), "graph.n");
  if (n <= 0) throw Error(ErrorKind::BadParams, "graph.n must be positive");
  const Json& edges = require(doc, "edges", "graph");
  if (!edges.is_array()) parse_fail("graph.edges must be an array");
  std::vector<WeightedEdge> out;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::string what = "graph.edges[" + std::to_string(e) + "]";
    const Json& item = edges[e];
    if (!item.is_array() || item.size() != 3) parse_fail(what + ": expected [i, j, \"w\"]");
    WeightedEdge w;
    w.i = json_vertex(item[0], static_cast<std::size_t>(n), what);
    w.j = json_vertex(item[1], static_cast<std::size_t>(n), what);
    w.weight = json_rational(item[2], what);
    out.push_back(std::move(w));
  }
  return from_weighted_graph(static_cast<std::size_t>(n), out);
}

GeneratorSpec parse_generator(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw Error(ErrorKind::BadParams, "generator spec needs KIND:params, got '" + std::string(text) + "'");
  const std::string kind = canonical_kind(text.substr(0, colon));
  return generator_from_fields(kind, generator_fields(text.substr(colon + 1)));
}

GeneratorSpec generator_from_json(const Json& doc) {
  const Json& kind = require(doc, "kind", "generator");
  if (!kind.is_string()) parse_fail("generator.kind must be a string");
  const std::string k = canonical_kind(kind.get<std::string>());
  std::map<std::string, std::string> fields;
  if (doc.contains("params")) {
    const Json& params = doc.at("params");
    if (!params.is_object()) parse_fail("generator.params must be an object");
    for (const auto& [key, value] : params.items()) fields[key] = join_plus(value);
  }
  return generator_from_fields(k, fields);
}

Json generator_to_json(const GeneratorSpec& spec) {
  Json out;
  if (const auto* c = std::get_if<CircleParams>(&spec)) {
    out["kind"] = "circle";
    out["params"] = {{"n", c->n}, {"L", format_rational(c->length)}};
  } else if (const auto* t = std::get_if<TorusParams>(&spec)) {
    out["kind"] = "torus_grid";
    out["params"] = {{"p", t->p},
                     {"q", t->q},
                     {"Lx", format_rational(t->lx)},
                     {"Ly", format_rational(t->ly)},
                     {"triangulated", t->triangulated}};
  } else {
    const auto& w = std::get<WedgeParams>(spec);
    Json lengths = Json::array();
    for (const auto& l : w.lengths) lengths.push_back(format_rational(l));
    out["kind"] = "wedge_of_circles";
    out["params"] = {{"L", lengths}, {"nodes", w.nodes}};
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json parse_json(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    parse_fail(std::string(source) + ": " + e.what());
  }
}

Entourage entourage_from_json(const SpacePtr& space, const Json& doc) {
  if (!doc.is_object()) parse_fail("entourage document must be an object");
  if (doc.contains("metric")) {
    const Json& m = doc.at("metric");
    const Rational eps = json_rational(require(m, "eps", "entourage.metric"), "entourage.metric.eps");
    bool strict = false;
    if (m.contains("strict")) {
      if (!m.at("strict").is_boolean()) parse_fail("entourage.metric.strict must be a boolean");
      strict = m.at("strict").get<bool>();
    }
    return metric_entourage(space, eps, strict);
  }
  if (doc.contains("base")) return base_entourage(space);
  if (doc.contains("full")) return full_entourage(space);
  if (doc.contains("union") || doc.contains("intersection")) {
    const bool is_union = doc.contains("union");
    const Json& items = doc.at(is_union ? "union" : "intersection");
    if (!items.is_array() || items.empty()) parse_fail("entourage member list must be a nonempty array");
    std::vector<Entourage> members;
    for (const auto& item : items) members.push_back(entourage_from_json(space, item));
    if (is_union) return entourage_union(members);
    Entourage acc = members.front();
    for (std::size_t i = 1; i < members.size(); ++i) acc = intersect(acc, members[i]);
    return acc;
  }
  if (doc.contains("compose")) {
    const Json& c = doc.at("compose");
    const std::int64_t power = json_int(require(c, "power", "entourage.compose"), "entourage.compose.power");
    if (power < 1 || power > 1024) throw Error(ErrorKind::BadParams, "compose power must be in [1, 1024]");
    return compose(entourage_from_json(space, require(c, "of", "entourage.compose")), static_cast<int>(power));
  }
  if (doc.contains("pairs")) {
    const Json& pairs = doc.at("pairs");
    if (!pairs.is_array()) parse_fail("entourage.pairs must be an array");
    std::vector<std::pair<Vertex, Vertex>> out;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const std::string what = "entourage.pairs[" + std::to_string(k) + "]";
      if (!pairs[k].is_array() || pairs[k].size() != 2) parse_fail(what + ": expected [i, j]");
      out.emplace_back(json_vertex(pairs[k][0], space->size(), what),
                       json_vertex(pairs[k][1], space->size(), what));
    }
    return custom_entourage(space, out);
  }
  parse_fail("entourage document needs one of metric, base, full, union, intersection, compose, pairs");
}

Json entourage_to_json(const Entourage& e) {
  const Provenance& p = e.provenance();
  if (p.kind == Provenance::Kind::Metric) {
    const Entourage rebuilt = metric_entourage(e.space(), p.eps, p.strict);
    if (rebuilt.same_relation(e)) return {{"metric", {{"eps", format_rational(p.eps)}, {"strict", p.strict}}}};
  }
  Json pairs = Json::array();
  for (Vertex i = 0; i < e.size(); ++i) {
    const VertexSet& row = e.row(i);
    for (auto j = row.find_next(i); j != VertexSet::npos; j = row.find_next(j))
      pairs.push_back({i, static_cast<Vertex>(j)});
  }
  return {{"pairs", pairs}};
}

std::vector<EntouragePtr> family_from_json(const SpacePtr& space, const Json& doc) {
  const Json& items = doc.is_object() ? require(doc, "members", "family") : doc;
  if (!items.is_array()) parse_fail("family must be an array of entourage documents");
  std::vector<EntouragePtr> out;
  for (const auto& item : items) out.push_back(share(entourage_from_json(space, item)));
  return out;
}

Chain chain_from_json(const EntouragePtr& e, const Json& doc) {
  return validate_chain(e, points_from_json(require(doc, "points", "chain"), e->size(), "chain.points"));
}

std::vector<Move> moves_from_json(const Json& doc) {
  const Json& items = doc.is_object() ? require(doc, "moves", "moves") : doc;
  if (!items.is_array()) parse_fail("moves must be an array");
  std::vector<Move> out;
  for (std::size_t k = 0; k < items.size(); ++k) {
    const std::string what = "moves[" + std::to_string(k) + "]";
    const Json& m = items[k];
    const Json& op = require(m, "op", what);
    const std::int64_t pos = json_int(require(m, "pos", what), what + ".pos");
    if (pos < 0) parse_fail(what + ".pos must be nonnegative");
    const std::string o = op.is_string() ? lower(op.get<std::string>()) : "";
    if (o == "insert") {
      const std::int64_t v = json_int(require(m, "vertex", what), what + ".vertex");
      if (v < 0) throw Error(ErrorKind::BadVertex, what + ": negative vertex");
      out.push_back(Move::insert(static_cast<std::size_t>(pos), static_cast<Vertex>(v)));
    } else if (o == "remove") {
      out.push_back(Move::remove(static_cast<std::size_t>(pos)));
    } else {
      parse_fail(what + ".op must be \"insert\" or \"remove\"");
    }
  }
  return out;
}

Json moves_to_json(const std::vector<Move>& moves) {
  Json out = Json::array();
  for (const auto& m : moves) {
    if (m.op == Move::Op::Insert) out.push_back({{"op", "insert"}, {"pos", m.pos}, {"vertex", m.vertex}});
    else out.push_back({{"op", "remove"}, {"pos", m.pos}});
  }
  return out;
}

Json space_to_json(const FiniteMetricSpace& space) {
  Json matrix = Json::array();
  for (Vertex i = 0; i < space.size(); ++i) {
    Json row = Json::array();
    for (Vertex j = 0; j < space.size(); ++j) row.push_back(format_rational(space.distance(i, j)));
    matrix.push_back(std::move(row));
  }
  Json out = {{"n", space.size()}, {"matrix", std::move(matrix)}};
  if (!space.labels().empty()) out["labels"] = space.labels();
  return out;
}

SpacePtr space_from_json(const Json& doc) {
  const Json& matrix = require(doc, "matrix", "space");
  if (!matrix.is_array()) parse_fail("space.matrix must be an array of rows");
  std::vector<std::vector<Rational>> rows;
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    if (!matrix[i].is_array()) parse_fail("space.matrix[" + std::to_string(i) + "] must be an array");
    std::vector<Rational> row;
    for (std::size_t j = 0; j < matrix[i].size(); ++j)
      row.push_back(json_rational(matrix[i][j], "space.matrix[" + std::to_string(i) + "][" +
                                                    std::to_string(j) + "]"));
    rows.push_back(std::move(row));
  }
  std::vector<std::string> labels;
  if (doc.contains("labels")) labels = doc.at("labels").get<std::vector<std::string>>();
  return from_distance_matrix(rows, std::move(labels));
}

Json presentation_to_json(const GroupPresentation& pres) {
  Json generators = Json::array();
  for (const auto& [i, j] : pres.generators()) generators.push_back({i, j});
  const ReducedGroup& g = pres.group();
  Json torsion = Json::array();
  for (const auto& t : g.invariants().torsion) torsion.push_back(t.str());
  return {{"basepoint", pres.basepoint()},
          {"entourage", entourage_to_json(*pres.entourage())},
          {"generators", std::move(generators)},
          {"relators", pres.relators()},
          {"reduced",
           {{"shape", to_string(g.shape())},
            {"generators", g.surviving_generators()},
            {"relators", g.surviving_relators().size()},
            {"h1", {{"rank", g.invariants().rank}, {"torsion", std::move(torsion)}}}}}};
}

Json cover_to_json(const CoverBall& cb) {
  const FiniteMetricSpace& space = *cb.space();
  Json nodes = Json::array();
  for (std::size_t id = 0; id < cb.points().size(); ++id) {
    const LiftedPoint& p = cb.points()[id];
    Json node = {{"id", id},
                 {"base", p.base},
                 {"layer", p.layer},
                 {"distance", format_rational(space.to_rational(p.distance))},
                 {"representative", points_json(p.representative)}};
    if (p.key) node["key"] = key_json(*p.key);
    nodes.push_back(std::move(node));
  }
  Json edges = Json::array();
  for (const auto& e : cb.edges())
    edges.push_back({e.from, e.to, format_rational(space.to_rational(e.length))});
  return {{"radius", format_rational(cb.radius())},
          {"keyed", cb.keyed()},
          {"nodes", std::move(nodes)},
          {"edges", std::move(edges)}};
}

Json verdict_to_json(const NullityVerdict& v) {
  Json out = {{"verdict", to_string(v.verdict)}, {"strategy", to_string(v.strategy)}, {"states", v.states}};
  if (!v.h1.empty()) out["h1"] = v.h1;
  if (!v.word.empty()) out["word"] = v.word;
  if (v.certificate) out["moves"] = v.certificate->moves.size();
  return out;
}

Json report_to_json(const SpectrumReport& report) {
  Json values = Json::array();
  Json refs = Json::array();
  Json undecided = Json::array();
  for (const auto& v : report.values) {
    values.push_back({format_rational(v.value), v.multiplicity});
    refs.push_back(v.certificates);
    if (v.undecided) undecided.push_back(format_rational(v.value));
  }
  Json out = {{"schema", kReportSchema},
              {"kind", to_string(report.kind)},
              {"values", std::move(values)},
              {"certificates", std::move(refs)},
              {"undecided", std::move(undecided)},
              {"method", report.methods},
              {"family", report.family},
              {"completeness", to_string(report.completeness)}};
  if (!report.profile.empty()) {
    Json profile = Json::array();
    for (const auto& p : report.profile) profile.push_back({format_rational(p.eps), p.classes});
    out["profile"] = std::move(profile);
  }
  return out;
}

std::string report_table(const SpectrumReport& report) {
  std::ostringstream out;
  out << "kind: " << to_string(report.kind) << "  completeness: " << to_string(report.completeness) << "\n";
  out << "family: " << report.family << "\n";
  out << "method:";
  for (const auto& m : report.methods) out << " " << m;
  out << "\n";
  out << "value\tmultiplicity\tcertificates\n";
  for (const auto& v : report.values) {
    out << format_rational(v.value) << "\t" << v.multiplicity << "\t";
    for (std::size_t i = 0; i < v.certificates.size(); ++i) out << (i ? "," : "") << v.certificates[i];
    if (v.certificates.empty()) out << "-";
    if (v.undecided) out << "\t(undecided)";
    out << "\n";
  }
  if (!report.profile.empty()) {
    out << "eps\tNC(eps)\n";
    for (const auto& p : report.profile)
      out << format_rational(p.eps) << "\t" << p.classes << (p.undecided ? "\t(undecided)" : "") << "\n";
  }
  return out.str();
}

std::string step_plot_data(const SpectrumReport& report) {
  std::ostringstream out;
  out << "# eps NC(eps)\n";
  for (const auto& p : report.profile) out << format_rational(p.eps) << " " << p.classes << "\n";
  return out.str();
}

Json certificate_to_json(const SpectralCertificate& cert) {
  if (!cert.fine || !cert.coarse) throw Error(ErrorKind::PreconditionViolated, "certificate lacks entourages");
  Json out = {{"schema", kCertificateSchema},
              {"type", "spectral"},
              {"value", format_rational(cert.value)},
              {"space", space_to_json(*cert.fine->space())},
              {"fine", entourage_to_json(*cert.fine)},
              {"coarse", entourage_to_json(*cert.coarse)}};
  if (cert.loop) out["loop"] = points_json(cert.loop->points());
  Json obstruction = Json::object();
  if (!cert.h1.empty()) obstruction["h1"] = cert.h1;
  if (!cert.word.empty()) obstruction["word"] = cert.word;
  out["obstruction"] = std::move(obstruction);
  if (cert.contraction)
    out["contraction"] = {{"start", points_json(cert.contraction->start.points())},
                          {"moves", moves_to_json(cert.contraction->moves)}};
  return out;
}

Json null_certificate_to_json(const MoveSequence& contraction) {
  return {{"schema", kCertificateSchema},
          {"type", "null"},
          {"space", space_to_json(*contraction.start.relation().space())},
          {"entourage", entourage_to_json(contraction.start.relation())},
          {"start", points_json(contraction.start.points())},
          {"moves", moves_to_json(contraction.moves)}};
}

CertificateCheck check_certificate(const Json& doc) {
  try {
    if (!doc.is_object() || doc.value("schema", "") != kCertificateSchema)
      return {false, "unknown certificate schema"};
    const SpacePtr space = space_from_json(require(doc, "space", "certificate"));
    const std::string type = doc.value("type", "");
    if (type == "null") {
      const EntouragePtr e = share(entourage_from_json(space, require(doc, "entourage", "certificate")));
      const Chain start =
          validate_chain(e, points_from_json(require(doc, "start", "certificate"), space->size(), "start"));
      if (!start.is_loop()) return {false, "start chain is not a loop"};
      const Chain end = replay(start, moves_from_json(require(doc, "moves", "certificate")));
      if (!end.is_constant()) return {false, "moves do not end at a constant chain"};
      return {true, "null certificate replays to a constant chain"};
    }
    if (type == "spectral") {
      SpectralCertificate cert;
      cert.value = json_rational(require(doc, "value", "certificate"), "value");
      cert.fine = share(entourage_from_json(space, require(doc, "fine", "certificate")));
      cert.coarse = share(entourage_from_json(space, require(doc, "coarse", "certificate")));
      cert.loop = validate_chain(
          cert.fine, points_from_json(require(doc, "loop", "certificate"), space->size(), "loop"));
      const Json& obstruction = require(doc, "obstruction", "certificate");
      if (obstruction.contains("h1")) cert.h1 = obstruction.at("h1").get<std::vector<std::int64_t>>();
      if (obstruction.contains("word")) cert.word = obstruction.at("word").get<Word>();
      const Json& c = require(doc, "contraction", "certificate");
      const Chain start =
          validate_chain(cert.coarse, points_from_json(require(c, "start", "contraction"), space->size(), "start"));
      const std::vector<Move> moves = moves_from_json(require(c, "moves", "contraction"));
      Chain end = replay(start, moves);
      cert.contraction = MoveSequence{start, moves, std::move(end)};
      if (!verify_certificate(cert)) return {false, "obstruction or contraction does not verify"};
      return {true, "obstruction recomputed and contraction replays to a constant chain"};
    }
    return {false, "unknown certificate type '" + type + "'"};
  } catch (const Error& e) {
    return {false, e.what()};
  } catch (const Json::exception& e) {
    return {false, std::string("malformed certificate: ") + e.what()};
  }
}

}  // namespace dhtk
