// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "probcert/cli/annotation_file.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "probcert/syntax/errors.hpp"
#include "probcert/syntax/parser.hpp"

namespace probcert::cli {

namespace {

using certificates::AnnotationSet;
using syntax::Expr;
using syntax::Program;
using syntax::Rational;
using syntax::State;
using syntax::StateDomain;
using certificates::AstAssertion;
using certificates::CheckConfig;
using certificates::Rule;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& raw, const std::string& where, int line) {
  std::string out;
  for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
    if (raw[i] == '\\' && i + 2 < raw.size()) {
      const char c = raw[++i];
      out += c == 'n' ? '\n' : c == 't' ? '\t' : c;
    } else if (raw[i] == '"') {
      throw AnnotationFileError(where, line, "unescaped quote inside string");
    } else {
      out += raw[i];
    }
  }
  return out;
}

/// Strips a `#` comment that is not inside a string.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && in_string) {
      ++i;
    } else if (line[i] == '"') {
      in_string = !in_string;
    } else if (line[i] == '#' && !in_string) {
      return line.substr(0, i);
    }
  }
  return line;
}

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"program", {"path", "source"}},
      {"check",
       {"rule", "kind", "post", "invariant", "domain", "cdb_bound", "looping_bound", "bound_on_f",
        "epsilon", "g", "ast", "truncation"}},
      {"config",
       {"tol", "seed", "samples", "step_cap", "threads", "evidence_samples", "ast_delta",
        "probe_depth", "fixpoint_tol", "max_iters", "max_states", "oracle_states"}},
      {"expect", {"verdict"}},
  };
  return keys;
}

template <class Fn>
auto wrap(const std::string& where, const std::string& key, Fn fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const syntax::ParseError& e) {
    throw AnnotationFileError(where, 0, "in `" + key + "`: " + e.what());
  } catch (const std::invalid_argument&) {
    throw AnnotationFileError(where, 0, "in `" + key + "`: not a number");
  } catch (const std::out_of_range&) {
    throw AnnotationFileError(where, 0, "in `" + key + "`: number out of range");
  }
}

Rational closed_rational(const std::string& text, const std::string& where, const std::string& key) {
  const Expr e = wrap(where, key, [&] { return syntax::parse_expectation(text); });
  if (!syntax::free_variables(e).empty())
    throw AnnotationFileError(where, 0, "`" + key + "` must be a closed expression");
  const algebra::ExtReal v = algebra::eval(e, State{});
  if (!v.is_exact()) throw AnnotationFileError(where, 0, "`" + key + "` must be a finite rational");
  return v.rational();
}

void apply_config(const std::map<std::string, std::string>& cfg, CheckConfig& c,
                  const std::string& where) {
  for (const auto& [key, value] : cfg) {
    wrap(where, key, [&, &key = key, &value = value] {
      if (key == "tol") c.tol = std::stod(value);
      else if (key == "seed") c.simulation.seed = std::stoull(value, nullptr, 0);
      else if (key == "samples") c.simulation.samples = std::stoll(value);
      else if (key == "step_cap") c.simulation.step_cap = std::stoll(value);
      else if (key == "threads") c.simulation.threads = static_cast<unsigned>(std::stoul(value));
      else if (key == "evidence_samples") c.evidence_samples = std::stoll(value);
      else if (key == "ast_delta") c.ast_delta = std::stod(value);
      else if (key == "probe_depth") c.probe_depth = std::stoi(value);
      else if (key == "fixpoint_tol") c.fixpoint.abs_tol = std::stod(value);
      else if (key == "max_iters") c.fixpoint.max_iters = std::stoll(value);
      else if (key == "max_states") c.fixpoint.max_states = std::stoull(value);
      else if (key == "oracle_states") c.oracle_states = std::stoull(value);
      return 0;
    });
  }
}

}  // namespace

Sections parse_sections(const std::string& text, const std::string& where) {
  Sections sections;
  std::istringstream in(text);
  std::string raw;
  std::string current;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw AnnotationFileError(where, line_no, "malformed section header");
      current = trim(line.substr(1, line.size() - 2));
      if (!allowed_keys().count(current))
        throw AnnotationFileError(where, line_no, "unknown section [" + current + "]");
      if (sections.count(current))
        throw AnnotationFileError(where, line_no, "duplicate section [" + current + "]");
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw AnnotationFileError(where, line_no, "expected `key = value`");
    if (current.empty()) throw AnnotationFileError(where, line_no, "key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!allowed_keys().at(current).count(key))
      throw AnnotationFileError(where, line_no, "unknown key `" + key + "` in [" + current + "]");
    if (value.rfind("\"\"\"", 0) == 0) {
      std::string body = value.substr(3);
      const int start = line_no;
      while (body.find("\"\"\"") == std::string::npos) {
        if (!std::getline(in, raw))
          throw AnnotationFileError(where, start, "unterminated multi-line string");
        ++line_no;
        body += "\n" + raw;
      }
      const auto close = body.find("\"\"\"");
      if (!trim(strip_comment(body.substr(close + 3))).empty())
        throw AnnotationFileError(where, line_no, "text after closing \"\"\"");
      value = body.substr(0, close);
      if (!value.empty() && value.front() == '\n') value.erase(0, 1);
    } else if (!value.empty() && value.front() == '"') {
      if (value.size() < 2 || value.back() != '"')
        throw AnnotationFileError(where, line_no, "unterminated string");
      value = unquote(value, where, line_no);
    } else if (value.empty()) {
      throw AnnotationFileError(where, line_no, "missing value for `" + key + "`");
    }
    auto& sec = sections[current];
    if (sec.count(key)) throw AnnotationFileError(where, line_no, "duplicate key `" + key + "`");
    sec[key] = value;
  }
  return sections;
}

AnnotationFile load_annotation_file(const std::filesystem::path& path, const CheckConfig& base) {
  std::ifstream in(path);
  if (!in) throw AnnotationFileError(path.string(), 0, "cannot open annotation file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_annotation_file(ss.str(), path, base);
}

AnnotationFile parse_annotation_file(const std::string& text, const std::filesystem::path& path,
                                     const CheckConfig& base) {
  const std::string where = path.string();
  const Sections sections = parse_sections(text, where);
  auto section = [&](const std::string& name) -> const std::map<std::string, std::string>& {
    static const std::map<std::string, std::string> empty;
    auto it = sections.find(name);
    return it == sections.end() ? empty : it->second;
  };
  const auto& program = section("program");
  const auto& check = section("check");
  auto get = [&](const std::map<std::string, std::string>& sec,
                 const std::string& key) -> std::optional<std::string> {
    auto it = sec.find(key);
    if (it == sec.end()) return std::nullopt;
    return it->second;
  };
  auto require = [&](const std::string& key, const std::string& why) {
    auto v = get(check, key);
    if (!v) throw AnnotationFileError(where, 0, "missing key `" + key + "` in [check]" + why);
    return *v;
  };

  AnnotationFile file;
  file.path = path;
  file.config = base;

  const auto prog_path = get(program, "path");
  const auto prog_source = get(program, "source");
  if (prog_path.has_value() == prog_source.has_value())
    throw AnnotationFileError(where, 0, "[program] needs exactly one of `path` and `source`");
  if (prog_path) {
    std::filesystem::path p(*prog_path);
    if (p.is_relative()) p = path.parent_path() / p;
    std::ifstream in(p);
    if (!in) throw AnnotationFileError(where, 0, "cannot open program file " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    file.program_source = ss.str();
  } else {
    file.program_source = *prog_source;
  }

  const std::string rule_text = require("rule", "");
  const auto rule = certificates::parse_rule(rule_text);
  if (!rule) throw AnnotationFileError(where, 0, "unknown rule `" + rule_text + "`");
  file.rule = *rule;
  const std::string rule_name = " (rule " + rule_text + ")";

  const bool ert_rule = file.rule == Rule::ErtLower;
  file.kind = ert_rule ? transformers::TransformerKind::ERT : transformers::TransformerKind::WP;
  if (auto k = get(check, "kind")) {
    if (*k == "ert") {
      file.kind = transformers::TransformerKind::ERT;
    } else if (*k == "wp") {
      file.kind = transformers::TransformerKind::WP;
    } else {
      throw AnnotationFileError(where, 0, "kind must be `wp` or `ert`, got `" + *k + "`");
    }
    if (file.rule != Rule::ParkUpper && (file.kind == transformers::TransformerKind::ERT) != ert_rule)
      throw AnnotationFileError(where, 0, "rule " + rule_text + " only supports kind " +
                                              (ert_rule ? "ert" : "wp"));
  }

  const std::string post = require("post", rule_name);
  const std::string inv = require("invariant", rule_name);
  const std::string dom = require("domain", rule_name);
  switch (file.rule) {
    case Rule::OstA: require("looping_bound", rule_name); break;
    case Rule::OstB:
      require("cdb_bound", rule_name);
      require("ast", rule_name);
      break;
    case Rule::OstC:
      require("bound_on_f", rule_name);
      require("ast", rule_name);
      break;
    case Rule::McIver1: require("bound_on_f", rule_name); break;
    case Rule::McIver2:
      require("bound_on_f", rule_name);
      require("g", rule_name);
      break;
    case Rule::McIver3:
      require("bound_on_f", rule_name);
      require("epsilon", rule_name);
      break;
    case Rule::McIverGen:
      require("bound_on_f", rule_name);
      require("epsilon", rule_name);
      require("g", rule_name);
      break;
    case Rule::ErtLower: require("cdb_bound", rule_name); break;
    case Rule::ParkUpper: break;
  }

  const Program prog = wrap(where, "program", [&] { return syntax::parse_program(file.program_source); });
  const Expr f = wrap(where, "post", [&] { return syntax::parse_expectation(post); });
  const Expr i = wrap(where, "invariant", [&] { return syntax::parse_expectation(inv); });
  const StateDomain d = wrap(where, "domain", [&] { return syntax::parse_domain(dom); });
  AnnotationSet ann;
  try {
    ann = AnnotationSet::make(prog, f, i, d);
  } catch (const certificates::AnnotationError& e) {
    throw AnnotationFileError(where, 0, e.what());
  }
  if (auto v = get(check, "cdb_bound")) ann.cdb_bound = closed_rational(*v, where, "cdb_bound");
  if (auto v = get(check, "bound_on_f")) ann.bound_on_f = closed_rational(*v, where, "bound_on_f");
  if (auto v = get(check, "epsilon")) ann.epsilon = closed_rational(*v, where, "epsilon");
  if (auto v = get(check, "looping_bound"))
    ann.looping_bound = wrap(where, "looping_bound", [&] { return syntax::parse_expectation(*v); });
  if (auto v = get(check, "g")) ann.g = wrap(where, "g", [&] { return syntax::parse_expectation(*v); });
  if (auto v = get(check, "truncation"))
    ann.truncation = wrap(where, "truncation", [&] { return syntax::parse_domain(*v); });
  if (auto v = get(check, "ast")) {
    const auto a = certificates::parse_ast_assertion(*v);
    if (!a)
      throw AnnotationFileError(where, 0,
                                "ast must be none, body-ast, loop-ast or loop-past, got `" + *v + "`");
    ann.ast = *a;
  }
  if (file.rule == Rule::OstB && ann.ast != AstAssertion::LoopPast)
    throw AnnotationFileError(where, 0, "rule ost-b needs `ast = loop-past`");
  if (file.rule == Rule::OstC && ann.ast != AstAssertion::LoopAst && ann.ast != AstAssertion::LoopPast)
    throw AnnotationFileError(where, 0, "rule ost-c needs `ast = loop-ast` or `loop-past`");
  try {
    ann.validate();
  } catch (const certificates::AnnotationError& e) {
    throw AnnotationFileError(where, 0, e.what());
  }
  file.annotations = std::move(ann);

  apply_config(section("config"), file.config, where);
  try {
    file.config.validate();
  } catch (const Error& e) {
    throw AnnotationFileError(where, 0, std::string("[config]: ") + e.what());
  }
  if (auto v = get(section("expect"), "verdict")) file.expected_verdict = *v;
  return file;
}

}  // namespace probcert::cli
