// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "probcert/cli/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "probcert/syntax/printer.hpp"
#include "probcert/syntax/parser.hpp"

namespace probcert::cli {

namespace {

using certificates::CertVerdict;
using certificates::Certificate;
using certificates::SideCondition;
using certificates::Status;
using json = nlohmann::json;
using syntax::Expr;
using syntax::Program;
using syntax::State;
using transformers::TransformerKind;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TransformerKind parse_kind(const std::string& k) {
  if (k == "wp") return TransformerKind::WP;
  if (k == "ert") return TransformerKind::ERT;
  throw Error("kind must be wp or ert, got `" + k + "`");
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

json condition_json(const SideCondition& c) {
  json j{{"name", c.name},
         {"status", certificates::to_string(c.status)},
         {"detail", c.detail},
         {"evidence", c.evidence}};
  j["witness"] = c.witness ? to_json(*c.witness) : json(nullptr);
  return j;
}

json config_json(const certificates::CheckConfig& c) {
  return json{{"tol", c.tol},
              {"float_tol", algebra::kFloatTolerance},
              {"fixpoint_tol", c.fixpoint.abs_tol},
              {"max_iters", c.fixpoint.max_iters},
              {"samples", c.simulation.samples},
              {"evidence_samples", c.evidence_samples},
              {"step_cap", c.simulation.step_cap},
              {"threads", c.simulation.threads},
              {"ast_delta", c.ast_delta},
              {"probe_depth", c.probe_depth}};
}

struct CheckOptions {
  std::string annotation;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> samples;
  std::optional<std::int64_t> step_cap;
  std::optional<std::int64_t> evidence_samples;
  std::optional<unsigned> threads;
  std::string json_path;
  bool quiet = false;
};

int cmd_check(const CheckOptions& o, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  AnnotationFile file = load_annotation_file(o.annotation);
  auto& c = file.config;
  if (o.tol) c.tol = *o.tol;
  if (o.seed) c.simulation.seed = *o.seed;
  if (o.samples) c.simulation.samples = *o.samples;
  if (o.step_cap) c.simulation.step_cap = *o.step_cap;
  if (o.evidence_samples) c.evidence_samples = *o.evidence_samples;
  if (o.threads) c.simulation.threads = *o.threads;
  c.validate();
  const Certificate cert = certificates::prove(file.rule, file.kind, file.annotations, c);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.quiet) out << render_report(file, cert, secs);
  if (!o.json_path.empty()) {
    const std::string doc = report_json(file, cert, secs).dump(2) + "\n";
    if (o.json_path == "-") {
      out << doc;
    } else {
      std::ofstream js(o.json_path);
      if (!js) throw Error("cannot write " + o.json_path);
      js << doc;
    }
  }
  return exit_code(cert.verdict);
}

struct WpOptions {
  std::string program;
  std::string post = "0";
  std::string state;
  std::string domain;
  std::string kind = "wp";
  std::string truncate;
  bool symbolic = false;
  double fixpoint_tol = 1e-9;
};

int cmd_wp(const WpOptions& o, std::ostream& out) {
  const Program prog = syntax::parse_program(read_file(o.program));
  const Expr f = syntax::parse_expectation(o.post);
  const TransformerKind kind = parse_kind(o.kind);
  if (o.symbolic) {
    const Expr e = algebra::simplify(transformers::transform_loopfree(kind, prog, f));
    out << syntax::to_string(e) << "\n";
    return 0;
  }
  if (o.state.empty() == o.domain.empty())
    throw Error("wp needs exactly one of --state and --domain (or --symbolic)");
  transformers::FixpointConfig cfg;
  cfg.abs_tol = o.fixpoint_tol;
  if (!o.truncate.empty()) cfg.truncation = syntax::parse_domain(o.truncate);
  transformers::Engine engine(kind, cfg);
  std::vector<State> states;
  if (!o.state.empty()) {
    states.push_back(syntax::parse_state(o.state));
  } else {
    states = syntax::parse_domain(o.domain).states();
  }
  for (const State& s : states) {
    const transformers::BoundedValue bv = engine.evaluate(prog, f, s);
    const char* status = bv.diverged              ? "diverged"
                         : !bv.converged          ? "not converged (lower bound)"
                         : bv.is_lower_bound_only ? "converged (truncated, lower bound)"
                                                  : "converged";
    out << syntax::to_string(s) << "  " << algebra::to_string(bv.value) << "  " << status
        << "  iterations=" << bv.iterations << "\n";
  }
  return 0;
}

struct SimulateOptions {
  std::string program;
  std::string what = "post";
  std::string f;
  std::string inv;
  std::int64_t n_index = 0;
  std::string state;
  simulator::SimulationConfig cfg;
  std::optional<double> at_least;
};

int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
  const Program prog = syntax::parse_program(read_file(o.program));
  const State s = syntax::parse_state(o.state);
  simulator::Estimate est;
  std::optional<std::int64_t> max_observed;
  if ((o.what == "post" || o.what == "induced") && o.f.empty())
    throw Error("--what " + o.what + " needs --f");
  if (o.what == "post") {
    est = simulator::estimate_post(prog, syntax::parse_expectation(o.f), s, o.cfg);
  } else if (o.what == "ert") {
    est = simulator::estimate_ert(prog, s, o.cfg);
  } else if (o.what == "looping-time") {
    const auto lt = simulator::estimate_looping_time(prog, s, o.cfg);
    est = lt.estimate;
    max_observed = lt.max_observed;
  } else if (o.what == "induced") {
    if (o.inv.empty()) throw Error("--what induced needs --I");
    const syntax::LoopSplit split = syntax::split_at_first_loop(prog);
    if (!split.loop || !split.prefix.empty() || !split.suffix.empty())
      throw Error("--what induced needs a program that is a single while loop");
    est = simulator::estimate_induced_process(*split.loop, syntax::parse_expectation(o.f),
                                              syntax::parse_expectation(o.inv), o.n_index, s,
                                              o.cfg);
  } else {
    throw Error("--what must be post, ert, looping-time or induced, got `" + o.what + "`");
  }
  out << "what           " << o.what << "\n"
      << "state          " << syntax::to_string(s) << "\n"
      << "samples        " << o.cfg.samples << "\n"
      << "seed           " << o.cfg.seed << "\n"
      << "step cap       " << o.cfg.step_cap << "\n"
      << "mean           " << format_double(est.mean) << "\n"
      << "stderr         " << format_double(est.std_error) << "\n"
      << "nonterminated  " << format_double(est.nonterminated_fraction) << "\n";
  if (max_observed) out << "max observed   " << *max_observed << "\n";
  if (o.at_least) {
    const bool ok = est.mean >= *o.at_least - 3.0 * est.std_error;
    out << "check          mean >= " << format_double(*o.at_least) << " - 3*stderr: "
        << (ok ? "yes" : "no") << "\n";
  }
  return 0;
}

}  // namespace

ExitCode exit_code(CertVerdict v) {
  switch (v) {
    case CertVerdict::Accepted: return kAccepted;
    case CertVerdict::Rejected: return kRejected;
    case CertVerdict::Inconclusive: return kInconclusive;
  }
  return kUsageError;
}

json to_json(const State& s) {
  json j = json::object();
  for (const auto& [k, v] : s.values()) j[k] = syntax::to_string(v);
  return j;
}

json report_json(const AnnotationFile& file, const Certificate& cert, double wall_clock_seconds) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = json{{"name", "probcert"}, {"version", PROBCERT_VERSION}};
  j["annotation"] = file.path.string();
  j["rule"] = certificates::to_string(cert.rule);
  j["kind"] = transformers::to_string(cert.kind);
  j["verdict"] = certificates::to_string(cert.verdict);
  j["certified_bound"] = cert.certified_bound;
  j["loop"] = syntax::to_string(file.annotations.loop);
  j["post"] = syntax::to_string(file.annotations.post);
  j["domain"] = json{{"text", syntax::to_string(cert.domain)}, {"states", cert.domain.size()}};
  json conds = json::array();
  for (const SideCondition& c : cert.conditions) conds.push_back(condition_json(c));
  j["conditions"] = conds;
  const SideCondition* rej = cert.rejection();
  j["witness"] = rej ? to_json(*rej->witness) : json(nullptr);
  j["caveats"] = cert.caveats;
  if (cert.oracle) {
    const auto& o = *cert.oracle;
    j["oracle"] = json{{"relation", o.relation},
                       {"states_checked", o.states_checked},
                       {"states_converged", o.states_converged},
                       {"consistent", o.consistent},
                       {"max_violation", o.max_violation},
                       {"worst", o.worst ? to_json(*o.worst) : json(nullptr)}};
  } else {
    j["oracle"] = nullptr;
  }
  if (cert.program_bound) {
    j["program_bound"] = json{{"expression", syntax::to_string(cert.program_bound->expression)},
                              {"direction", cert.program_bound->lower ? "lower" : "upper"}};
  } else {
    j["program_bound"] = nullptr;
  }
  j["seeds"] = json{{"simulation", file.config.simulation.seed}};
  j["wall_clock_seconds"] = wall_clock_seconds;
  j["config"] = config_json(file.config);
  return j;
}

std::string render_report(const AnnotationFile& file, const Certificate& cert,
                          double wall_clock_seconds) {
  std::ostringstream os;
  os << "annotation  " << file.path.string() << "\n"
     << "rule        " << certificates::to_string(cert.rule) << " ("
     << transformers::to_string(cert.kind) << ")\n"
     << "verdict     " << certificates::to_string(cert.verdict) << "\n"
     << "bound       " << cert.certified_bound << "\n"
     << "domain      " << syntax::to_string(cert.domain) << " (" << cert.domain.size()
     << " states)\n"
     << "conditions\n";
  for (const SideCondition& c : cert.conditions) {
    os << "  " << std::left << std::setw(10) << certificates::to_string(c.status) << std::setw(30)
       << c.name << c.detail;
    if (c.witness) os << "  witness " << syntax::to_string(*c.witness);
    if (c.evidence) os << "  [evidence]";
    os << "\n";
  }
  os << "caveats\n";
  for (const std::string& c : cert.caveats) os << "  - " << c << "\n";
  if (cert.oracle) {
    const auto& o = *cert.oracle;
    os << "oracle      " << o.relation << ": "
       << (o.consistent ? "consistent" : "VIOLATED") << " on " << o.states_converged << "/"
       << o.states_checked << " converged states";
    if (o.worst) os << ", worst " << syntax::to_string(*o.worst) << " by " << o.max_violation;
    os << "\n";
  }
  if (cert.program_bound)
    os << "program     " << (cert.program_bound->lower ? "lower" : "upper") << " bound "
       << syntax::to_string(cert.program_bound->expression) << "\n";
  os << "seed        " << file.config.simulation.seed << "\n"
     << "time        " << std::fixed << std::setprecision(2) << wall_clock_seconds << " s\n";
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"probcert: certificates for probabilistic loop bounds", "probcert"};
  app.set_version_flag("--version", std::string("probcert ") + PROBCERT_VERSION);
  app.require_subcommand(1);

  CheckOptions check;
  CLI::App* c = app.add_subcommand("check", "check an annotation file");
  c->add_option("annotation", check.annotation, "annotation file")->required();
  c->add_option("--tol", check.tol, "exact comparison tolerance");
  c->add_option("--seed", check.seed, "simulation seed");
  c->add_option("--samples", check.samples, "simulation samples");
  c->add_option("--step-cap", check.step_cap, "maximal iterations of one loop execution");
  c->add_option("--evidence-samples", check.evidence_samples, "samples per domain state");
  c->add_option("--threads", check.threads, "simulation threads");
  c->add_option("--json", check.json_path, "write the JSON report here (`-` for stdout)");
  c->add_flag("--quiet", check.quiet, "suppress the human-readable report");

  WpOptions wp;
  CLI::App* w = app.add_subcommand("wp", "evaluate wp or ert");
  w->add_option("program", wp.program, "program file")->required();
  w->add_option("--post", wp.post, "postexpectation (default 0)");
  w->add_option("--state", wp.state, "initial state, e.g. a=1,b=0");
  w->add_option("--domain", wp.domain, "state domain, e.g. a in 0..1; b in 0..5");
  w->add_option("--kind", wp.kind, "wp or ert");
  w->add_option("--truncate", wp.truncate, "truncation domain for value iteration");
  w->add_option("--fixpoint-tol", wp.fixpoint_tol, "value iteration tolerance");
  w->add_flag("--symbolic", wp.symbolic, "symbolic result for loop-free programs");

  SimulateOptions sim;
  CLI::App* s = app.add_subcommand("simulate", "Monte Carlo estimates");
  s->add_option("program", sim.program, "program file")->required();
  s->add_option("--what", sim.what, "post, ert, looping-time or induced");
  s->add_option("--f", sim.f, "postexpectation");
  s->add_option("--I", sim.inv, "invariant for --what induced");
  s->add_option("--n-index", sim.n_index, "process index for --what induced");
  s->add_option("--state", sim.state, "initial state");
  s->add_option("--samples", sim.cfg.samples, "number of runs");
  s->add_option("--seed", sim.cfg.seed, "seed");
  s->add_option("--step-cap", sim.cfg.step_cap, "maximal iterations of one loop execution");
  s->add_option("--threads", sim.cfg.threads, "threads");
  s->add_option("--at-least", sim.at_least, "print whether mean >= value - 3*stderr");

  std::vector<std::string> argv_storage{"probcert"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : kUsageError;
  }
  try {
    if (c->parsed()) return cmd_check(check, out);
    if (w->parsed()) return cmd_wp(wp, out);
    if (s->parsed()) return cmd_simulate(sim, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace probcert::cli
