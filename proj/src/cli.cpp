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

#include "dhtk/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "dhtk/error.hpp"
#include "dhtk/io.hpp"

namespace dhtk {
namespace {

namespace fs = std::filesystem;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::ParseError, "cannot write '" + path + "'");
  f << text;
}

/// Primary output: --out file when given, else the output stream.
void emit(const CommandSpec& spec, std::ostream& out, const std::string& text) {
  if (spec.out) write_text(*spec.out, text);
  else out << text;
}

std::string json_text(const Json& doc) { return doc.dump(2) + "\n"; }

SpacePtr load_space(const CommandSpec& spec) {
  const int sources = int(spec.generate.has_value()) + int(spec.matrix.has_value()) + int(spec.graph.has_value());
  if (sources != 1)
    throw Error(ErrorKind::BadParams, "exactly one of --generate, --matrix, --graph is required");
  if (spec.matrix) return parse_matrix_csv(read_file(*spec.matrix), *spec.matrix);
  if (spec.graph) return parse_graph_json(parse_json(read_file(*spec.graph), *spec.graph));
  if (fs::is_regular_file(*spec.generate))
    return generate(generator_from_json(parse_json(read_file(*spec.generate), *spec.generate)));
  return generate(parse_generator(*spec.generate));
}

Rational required_rational(const std::optional<std::string>& value, const char* flag) {
  if (!value) throw Error(ErrorKind::BadParams, std::string(flag) + " is required for this command");
  return parse_rational(*value);
}

/// Entourage from --eps (metric) or an entourage document; base otherwise.
EntouragePtr resolve_entourage(const SpacePtr& space, const std::optional<std::string>& eps,
                               const std::optional<std::string>& path, bool open, bool required) {
  if (eps && path) throw Error(ErrorKind::BadParams, "give either an eps or an entourage file, not both");
  if (eps) return share(metric_entourage(space, parse_rational(*eps), open));
  if (path) return share(entourage_from_json(space, parse_json(read_file(*path), *path)));
  if (required) throw Error(ErrorKind::BadParams, "an entourage (--eps or --entourage) is required");
  return share(base_entourage(space));
}

void write_certificates(const CommandSpec& spec, const std::vector<Json>& docs) {
  if (!spec.certificates) return;
  fs::create_directories(*spec.certificates);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "cert-%03zu.json", i);
    write_text((fs::path(*spec.certificates) / name).string(), json_text(docs[i]));
  }
}

int cmd_validate(const CommandSpec& spec, std::ostream& out) {
  const SpacePtr space = load_space(spec);
  Json doc = {{"valid", true},
              {"n", space->size()},
              {"base_scale", format_rational(space->base_scale())},
              {"diameter", format_rational(space->diameter())},
              {"distance_values", space->distance_values().size()}};
  emit(spec, out, json_text(doc));
  return kExitOk;
}

int cmd_generate(const CommandSpec& spec, std::ostream& out) {
  const SpacePtr space = load_space(spec);
  if (spec.format == "json") {
    emit(spec, out, json_text(space_to_json(*space)));
    return kExitOk;
  }
  std::ostringstream csv;
  for (Vertex i = 0; i < space->size(); ++i) {
    for (Vertex j = 0; j < space->size(); ++j) csv << (j ? "," : "") << format_rational(space->distance(i, j));
    csv << "\n";
  }
  emit(spec, out, csv.str());
  return kExitOk;
}

int cmd_spectrum(const CommandSpec& spec, std::ostream& out) {
  const SpacePtr space = load_space(spec);
  SpectrumReport report;
  const std::string& kind = spec.kind;
  if (kind == "hcs") {
    report = homotopy_critical_spectrum(space, spec.budget);
  } else if (kind == "cs") {
    report = covering_spectrum(space, spec.budget);
  } else if (kind == "es") {
    report = entourage_spectrum(space, spec.budget);
  } else if (kind == "ecs" || kind == "nc") {
    const std::vector<EntouragePtr> family =
        spec.family ? family_from_json(space, parse_json(read_file(*spec.family), *spec.family))
                    : metric_family(space);
    report = nc_profile(space, family, {}, spec.budget);
    if (kind == "nc") report.kind = SpectrumKind::NCProfile;
    if (spec.plot) write_text(*spec.plot, step_plot_data(report));
  } else if (kind == "mls") {
    const Rational bound = required_rational(spec.length_bound, "--length-bound");
    report = minimum_length_spectrum(resolve_entourage(space, spec.eps, spec.entourage, spec.open, false),
                                     bound, spec.budget);
  } else {
    throw Error(ErrorKind::BadParams, "unknown spectrum kind '" + kind + "'");
  }

  std::vector<Json> certs;
  for (const auto& c : report.certificates) certs.push_back(certificate_to_json(c));
  write_certificates(spec, certs);
  emit(spec, out, spec.format == "table" ? report_table(report) : json_text(report_to_json(report)));

  const bool undecided =
      report.completeness == Completeness::BudgetLimited ||
      std::any_of(report.values.begin(), report.values.end(), [](const auto& v) { return v.undecided; }) ||
      std::any_of(report.profile.begin(), report.profile.end(), [](const auto& p) { return p.undecided; });
  return spec.strict && undecided ? kExitUndecided : kExitOk;
}

int cmd_cover(const CommandSpec& spec, std::ostream& out) {
  const SpacePtr space = load_space(spec);
  const EntouragePtr e = resolve_entourage(space, spec.eps, spec.entourage, spec.open, false);
  const CoverBall cb = build_cover_ball(e, required_rational(spec.radius, "--radius"), spec.budget);
  emit(spec, out, json_text({{"presentation", presentation_to_json(cb.presentation())}, {"cover", cover_to_json(cb)}}));
  return kExitOk;
}

int cmd_nullity(const CommandSpec& spec, std::ostream& out) {
  const SpacePtr space = load_space(spec);
  const EntouragePtr e = resolve_entourage(space, spec.eps, spec.entourage, spec.open, false);
  if (!spec.chain) throw Error(ErrorKind::BadParams, "--chain is required for nullity");
  const Chain loop = chain_from_json(e, parse_json(read_file(*spec.chain), *spec.chain));
  const GroupPresentation pres = build_presentation(e);
  const NullityVerdict v = decide_null(pres, loop, spec.budget);
  if (v.certificate) write_certificates(spec, {null_certificate_to_json(*v.certificate)});
  Json doc = verdict_to_json(v);
  doc["loop"] = loop.points();
  emit(spec, out, json_text(doc));
  return spec.strict && v.verdict == Verdict::Unknown ? kExitUndecided : kExitOk;
}

int cmd_equivalent(const CommandSpec& spec, std::ostream& out) {
  const SpacePtr space = load_space(spec);
  const EntouragePtr e = resolve_entourage(space, spec.eps, spec.entourage, spec.open, true);
  const EntouragePtr f = resolve_entourage(space, spec.eps2, spec.entourage2, spec.open, true);
  const Equivalence result = covers_equivalent(e, f, spec.budget);
  emit(spec, out,
       json_text({{"result", to_string(result)},
                  {"first", entourage_to_json(*e)},
                  {"second", entourage_to_json(*f)}}));
  return spec.strict && result == Equivalence::Unknown ? kExitUndecided : kExitOk;
}

int cmd_bound(const CommandSpec& spec, std::ostream& out) {
  const SpacePtr space = load_space(spec);
  const Rational eps = required_rational(spec.eps, "--eps");
  const T2Bound b = t2_bound(*space, eps);
  auto cover_json = [](const CoveringNumber& c) { return Json{{"count", c.count}, {"exact", c.exact}}; };
  emit(spec, out,
       json_text({{"eps", format_rational(eps)},
                  {"covering_quarter", cover_json(b.quarter)},
                  {"covering_half", cover_json(b.half)},
                  {"log2_bound", b.log2_bound.str()},
                  {"log2_bound_digits", b.log2_digits}}));
  return kExitOk;
}

int cmd_selftest(const CommandSpec& spec, std::ostream& out) {
  std::ostringstream text;
  bool ok = true;
  text << "seed " << spec.seed << "\n";
  for (const auto& line : run_selftest(spec.seed, spec.samples)) {
    const bool pass = line.failures == 0 && line.samples == spec.samples;
    ok = ok && pass;
    text << (pass ? "PASS " : "FAIL ") << line.name << " samples=" << line.samples
         << " failures=" << line.failures << " skipped=" << line.skipped << "\n";
  }
  emit(spec, out, text.str());
  return ok ? kExitOk : kExitDomainError;
}

int cmd_check(const CommandSpec& spec, std::ostream& out) {
  if (!spec.check_certificate) throw Error(ErrorKind::BadParams, "--check-certificate FILE is required");
  const CertificateCheck c =
      check_certificate(parse_json(read_file(*spec.check_certificate), *spec.check_certificate));
  emit(spec, out, json_text({{"valid", c.valid}, {"reason", c.reason}}));
  return c.valid ? kExitOk : kExitDomainError;
}

}  // namespace

int run(const CommandSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    switch (spec.command) {
      case Command::Validate: return cmd_validate(spec, out);
      case Command::Generate: return cmd_generate(spec, out);
      case Command::Spectrum: return cmd_spectrum(spec, out);
      case Command::Cover: return cmd_cover(spec, out);
      case Command::Nullity: return cmd_nullity(spec, out);
      case Command::Equivalent: return cmd_equivalent(spec, out);
      case Command::Bound: return cmd_bound(spec, out);
      case Command::SelfTest: return cmd_selftest(spec, out);
      case Command::Check: return cmd_check(spec, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
  return kExitDomainError;
}

std::optional<CommandSpec> parse_command_line(const std::vector<std::string>& args, std::ostream& out,
                                              std::ostream& err, int& exit_code) {
  static const std::map<std::string, Command> kCommands = {
      {"validate", Command::Validate}, {"generate", Command::Generate}, {"spectrum", Command::Spectrum},
      {"cover", Command::Cover},       {"nullity", Command::Nullity},   {"equivalent", Command::Equivalent},
      {"bound", Command::Bound},       {"selftest", Command::SelfTest}, {"check", Command::Check}};

  CommandSpec spec;
  std::string command;
  CLI::App app{"Discrete homotopy spectra of finite metric spaces", "dhtk"};
  app.add_option("command", command, "validate | generate | spectrum | cover | nullity | equivalent | bound | selftest | check");
  app.add_option("--generate", spec.generate, "KIND:params (circle:n=12,L=1) or generator JSON file");
  app.add_option("--matrix", spec.matrix, "CSV distance matrix of rationals");
  app.add_option("--graph", spec.graph, "graph JSON {\"n\", \"edges\": [[i, j, \"w\"]]}");
  app.add_option("--kind", spec.kind, "spectrum kind")
      ->check(CLI::IsMember({"hcs", "cs", "ecs", "nc", "es", "mls"}));
  app.add_option("--eps", spec.eps, "scale of the (first) metric entourage");
  app.add_option("--eps2", spec.eps2, "scale of the second metric entourage");
  app.add_flag("--open", spec.open, "metric entourages use d < eps instead of d <= eps");
  app.add_option("--entourage", spec.entourage, "entourage JSON file");
  app.add_option("--entourage2", spec.entourage2, "second entourage JSON file");
  app.add_option("--chain", spec.chain, "chain JSON file {\"points\": [...]}");
  app.add_option("--radius", spec.radius, "cover ball radius");
  app.add_option("--length-bound", spec.length_bound, "loop length bound for mls");
  app.add_option("--budget", spec.budget, "search budget (states)");
  app.add_option("--family", spec.family, "entourage family JSON file for ecs/nc");
  app.add_flag("--strict", spec.strict, "exit 2 on Unknown or budget-limited outcomes");
  app.add_option("--format", spec.format, "output format")->check(CLI::IsMember({"json", "table", "csv"}));
  app.add_option("--out", spec.out, "write the primary output to FILE");
  app.add_option("--certificates", spec.certificates, "write certificate documents into DIR");
  app.add_option("--plot", spec.plot, "write NC step-plot data to FILE");
  app.add_option("--check-certificate", spec.check_certificate, "re-validate a certificate FILE");
  app.add_option("--seed", spec.seed, "selftest seed");
  app.add_option("--samples", spec.samples, "selftest samples per property");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    exit_code = app.exit(e, out, err);
    if (exit_code != 0) exit_code = kExitDomainError;
    return std::nullopt;
  }
  if (command.empty() && spec.check_certificate) command = "check";
  const auto it = kCommands.find(command);
  if (it == kCommands.end()) {
    err << "error: unknown or missing command '" << command << "'\n" << app.help();
    exit_code = kExitDomainError;
    return std::nullopt;
  }
  spec.command = it->second;
  exit_code = kExitOk;
  return spec;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  const auto spec = parse_command_line(args, out, err, code);
  if (!spec) return code;
  return run(*spec, out, err);
}

}  // namespace dhtk
