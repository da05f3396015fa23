// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "probcert/certificates/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <set>
#include <sstream>

#include "probcert/syntax/printer.hpp"

namespace probcert::certificates {

namespace {

using algebra::EvalError;
using algebra::PointwiseComparison;
using transformers::BoundedValue;
using transformers::Engine;
using transformers::FixpointConfig;

constexpr const char* kDomainCaveat =
    "domain-restricted: side conditions were checked on the listed domain states only";
constexpr const char* kEvidenceCaveat =
    "simulation-evidence: termination conditions rest on sampled runs, not on a proof";

struct RuleText {
  Rule rule;
  const char* name;
};

constexpr RuleText kRules[] = {
    {Rule::ParkUpper, "park-upper"}, {Rule::OstA, "ost-a"},         {Rule::OstB, "ost-b"},
    {Rule::OstC, "ost-c"},           {Rule::McIver1, "mciver-1"},   {Rule::McIver2, "mciver-2"},
    {Rule::McIver3, "mciver-3"},     {Rule::McIverGen, "mciver-gen"}, {Rule::ErtLower, "ert-lower"},
};

std::string show(const ExtReal& v) { return algebra::to_string(v); }
std::string show(const State& s) { return syntax::to_string(s); }

bool leq_tol(const ExtReal& a, const ExtReal& b, double tol) {
  return algebra::excess(a, b) <= algebra::effective_tolerance(a, b, tol);
}

FixpointConfig plain_config(const CheckConfig& cfg) {
  FixpointConfig f = cfg.fixpoint;
  f.truncation.reset();
  return f;
}

FixpointConfig oracle_config(const AnnotationSet& ann, const CheckConfig& cfg) {
  FixpointConfig f = cfg.fixpoint;
  if (ann.truncation) f.truncation = ann.truncation;
  return f;
}

bool guard_holds(const AnnotationSet& ann, const State& s) {
  return algebra::holds(ann.loop.guard(), s);
}

bool contains_infinity(const Expr& e) {
  if (e.kind() == Expr::Kind::Infinity) return true;
  for (const Expr& a : e.node()->args)
    if (contains_infinity(a)) return true;
  return false;
}

SideCondition passed(std::string name, std::string detail) {
  SideCondition c;
  c.name = std::move(name);
  c.detail = std::move(detail);
  return c;
}

SideCondition failed(std::string name, std::string detail, const State& witness) {
  SideCondition c;
  c.name = std::move(name);
  c.status = Status::Failed;
  c.detail = std::move(detail);
  c.witness = witness;
  return c;
}

SideCondition undecided(std::string name, std::string detail) {
  SideCondition c;
  c.name = std::move(name);
  c.status = Status::Undecided;
  c.detail = std::move(detail);
  return c;
}

/// One row per domain state: I(s) and Phi(I)(s).
struct PhiTable {
  std::vector<State> states;
  std::vector<ExtReal> inv;
  std::vector<ExtReal> phi;
};

PhiTable phi_table(TransformerKind kind, const AnnotationSet& ann, const CheckConfig& cfg) {
  Engine engine(kind, plain_config(cfg));
  PhiTable t;
  t.states = ann.domain.states();
  for (const State& s : t.states) {
    t.inv.push_back(algebra::eval(ann.invariant, s));
    t.phi.push_back(engine.char_apply(ann.loop, ann.post, ann.invariant, s));
  }
  return t;
}

ComparisonResult compare_table(Direction dir, const PhiTable& t, double tol) {
  PointwiseComparison cmp(tol);
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    if (dir == Direction::Sub)
      cmp.add(t.states[i], t.inv[i], t.phi[i]);
    else
      cmp.add(t.states[i], t.phi[i], t.inv[i]);
  }
  return cmp.result();
}

std::string comparison_detail(const ComparisonResult& r) {
  std::ostringstream os;
  os << r.states_checked << " states";
  if (r.used_floats) os << ", float tolerance " << r.tolerance_used;
  return os.str();
}

SideCondition subinvariance_condition(const char* name, const char* relation,
                                      const ComparisonResult& r) {
  if (r.leq()) return passed(name, std::string(relation) + " on " + comparison_detail(r));
  const auto& v = *r.leq_violation;
  return failed(name,
                std::string(relation) + " violated: I = " + show(v.lhs) + " > Phi(I) = " +
                    show(v.rhs),
                v.witness);
}

bool invariant_is_zero(const AnnotationSet& ann) {
  for (const State& s : ann.domain.states())
    if (!algebra::eval(ann.invariant, s).is_zero()) return false;
  return true;
}

SideCondition finiteness_condition(const AnnotationSet& ann, const char* post_name) {
  for (const State& s : ann.domain.states()) {
    if (algebra::eval(ann.post, s).is_infinite())
      return failed("finite", std::string(post_name) + " is infinite", s);
    if (algebra::eval(ann.invariant, s).is_infinite())
      return failed("finite", "I is infinite", s);
  }
  return passed("finite", std::string(post_name) + " and I are finite on the domain");
}

SideCondition phi_finite_condition(const PhiTable& t, const char* name) {
  for (std::size_t i = 0; i < t.states.size(); ++i)
    if (t.phi[i].is_infinite()) return failed(name, "Phi(I) is infinite", t.states[i]);
  return passed(name, "Phi(I) is finite on the domain");
}

SideCondition harmonization_condition(const AnnotationSet& ann, const CheckConfig& cfg,
                                      const char* post_name) {
  const HarmonizationResult h = check_harmonization(ann, cfg);
  if (h.holds) return passed("harmonization", std::string("I = ") + post_name + " on guard-false states");
  return failed("harmonization",
                "I = " + show(h.invariant_value) + " but " + post_name + " = " +
                    show(h.post_value) + " on a guard-false state",
                *h.witness);
}

SideCondition cdb_condition(const AnnotationSet& ann, const CheckConfig& cfg) {
  const CdbReport r = check_cdb(ann, cfg);
  const std::string c = syntax::to_string(*ann.cdb_bound);
  if (*r.passed)
    return passed("cdb", "max delta " + show(r.max_delta) + " <= " + c);
  return failed("cdb", "delta " + show(r.max_delta) + " exceeds " + c, *r.argmax);
}

SideCondition bounded_condition(const AnnotationSet& ann, bool include_g) {
  const ExtReal bound(*ann.bound_on_f);
  const std::string b = syntax::to_string(*ann.bound_on_f);
  for (const State& s : ann.domain.states()) {
    const ExtReal fv = algebra::eval(ann.post, s);
    if (!leq_tol(fv, bound, 0.0)) return failed("bounded", "f = " + show(fv) + " exceeds " + b, s);
    const ExtReal iv = algebra::eval(ann.invariant, s);
    if (!leq_tol(iv, bound, 0.0)) return failed("bounded", "I = " + show(iv) + " exceeds " + b, s);
    if (include_g && ann.g) {
      const ExtReal gv = algebra::eval(*ann.g, s);
      if (!leq_tol(gv, bound, 0.0))
        return failed("bounded", "g = " + show(gv) + " exceeds " + b, s);
    }
  }
  return passed("bounded", "f and I are bounded by " + b + " on the domain");
}

simulator::SimulationConfig evidence_config(const CheckConfig& cfg) {
  simulator::SimulationConfig sc = cfg.simulation;
  sc.samples = cfg.evidence_samples;
  return sc;
}

SideCondition body_ast_condition(Rule rule, const AnnotationSet& ann, const CheckConfig& cfg) {
  const Program& body = ann.loop.body();
  if (body.is_loop_free()) return passed("body-ast", "loop-free body (syntactic)");
  if (ann.ast == AstAssertion::None)
    throw MissingAssertion("rule " + to_string(rule) +
                           " needs `ast = body-ast` (or stronger) for a loop body with loops");
  const simulator::SimulationConfig sc = evidence_config(cfg);
  double worst = 0.0;
  for (const State& s : ann.domain.states()) {
    if (!guard_holds(ann, s)) continue;
    const auto est = simulator::estimate_post(body, Expr::literal(1), s, sc);
    worst = std::max(worst, est.nonterminated_fraction);
    if (est.nonterminated_fraction > cfg.ast_delta) {
      SideCondition c = failed("body-ast",
                               "body did not terminate in " +
                                   std::to_string(est.nonterminated_fraction * 100.0) +
                                   "% of sampled runs",
                               s);
      c.evidence = true;
      return c;
    }
  }
  SideCondition c = passed("body-ast", "asserted; sampled body nontermination at most " +
                                           std::to_string(worst));
  c.evidence = true;
  return c;
}

/// Sampled termination of the loop from every guard-true domain state.
SideCondition termination_evidence(const char* name, const AnnotationSet& ann,
                                   const CheckConfig& cfg) {
  const simulator::SimulationConfig sc = evidence_config(cfg);
  double worst = 0.0;
  double worst_mean = 0.0;
  for (const State& s : ann.domain.states()) {
    if (!guard_holds(ann, s)) continue;
    const auto est = simulator::estimate_looping_time(ann.loop, s, sc);
    worst = std::max(worst, est.estimate.nonterminated_fraction);
    if (!std::isnan(est.estimate.mean)) worst_mean = std::max(worst_mean, est.estimate.mean);
    if (est.estimate.nonterminated_fraction > cfg.ast_delta) {
      std::ostringstream os;
      os << "termination frequency " << 1.0 - est.estimate.nonterminated_fraction << " < "
         << 1.0 - cfg.ast_delta << " at step cap " << sc.step_cap;
      SideCondition c = failed(name, os.str(), s);
      c.evidence = true;
      return c;
    }
  }
  std::ostringstream os;
  os << "termination frequency >= " << 1.0 - worst << ", largest mean looping time "
     << worst_mean;
  SideCondition c = passed(name, os.str());
  c.evidence = true;
  return c;
}

SideCondition bounded_looping_time(const AnnotationSet& ann, const CheckConfig& cfg) {
  simulator::SimulationConfig sc = evidence_config(cfg);
  for (const State& s : ann.domain.states()) {
    if (!guard_holds(ann, s)) continue;
    const ExtReal nv = algebra::eval(*ann.looping_bound, s);
    if (nv.is_infinite())
      return failed("bounded-looping-time", "looping bound N(s) is infinite", s);
    const auto n = static_cast<std::int64_t>(std::floor(nv.to_double()));
    sc.step_cap = ann.loop.body().is_loop_free() ? n + 1 : std::max(n + 1, cfg.simulation.step_cap);
    const auto est = simulator::estimate_looping_time(ann.loop, s, sc);
    if (est.max_observed > n || est.estimate.nonterminated_fraction > 0.0) {
      SideCondition c = failed("bounded-looping-time",
                               "a sampled run exceeded N(s) = " + std::to_string(n) + " iterations",
                               s);
      c.evidence = true;
      return c;
    }
  }
  SideCondition c = passed("bounded-looping-time", "no sampled run exceeded N(s)");
  c.evidence = true;
  return c;
}

SideCondition phi_iterates_finite(const AnnotationSet& ann, const CheckConfig& cfg) {
  if (ann.loop.body().is_loop_free() && !contains_infinity(ann.post) &&
      !contains_infinity(ann.invariant))
    return passed("phi-iterates-finite", "loop-free body and finite f, I (syntactic)");
  Engine engine(TransformerKind::WP, plain_config(cfg));
  for (const State& s : ann.domain.states()) {
    for (int n = 1; n <= cfg.probe_depth; ++n) {
      if (engine.phi_power(ann.loop, ann.post, ann.invariant, n, s).is_infinite())
        return failed("phi-iterates-finite", "Phi^" + std::to_string(n) + "(I) is infinite", s);
    }
  }
  return passed("phi-iterates-finite",
                "Phi^n(I) finite for n <= " + std::to_string(cfg.probe_depth));
}

/// eps * I <= wp(loop, rhs) with rhs evaluated by the (possibly truncated) numeric engine.
SideCondition eps_comparison(const char* name, const AnnotationSet& ann, const Expr& rhs,
                             const CheckConfig& cfg) {
  Engine engine(TransformerKind::WP, oracle_config(ann, cfg));
  const ExtReal eps(*ann.epsilon);
  bool any_lower_only = false;
  std::optional<State> unresolved;
  for (const State& s : ann.domain.states()) {
    const ExtReal lhs = eps * algebra::eval(ann.invariant, s);
    BoundedValue bv;
    try {
      bv = engine.evaluate(ann.loop, rhs, s);
    } catch (const transformers::StateSpaceExplosion&) {
      if (!unresolved) unresolved = s;
      continue;
    }
    any_lower_only = any_lower_only || bv.is_lower_bound_only;
    const double tol = std::max(cfg.tol, algebra::kFloatTolerance);
    if (leq_tol(lhs, bv.value, tol)) continue;
    std::string detail = "eps*I = " + show(lhs) + " > wp = " + show(bv.value);
    if (bv.is_lower_bound_only) {
      if (!unresolved) unresolved = s;
      continue;
    }
    return failed(name, detail, s);
  }
  if (unresolved)
    return undecided(name, "right-hand side only known as a lower bound at " + show(*unresolved));
  return passed(name, any_lower_only ? "holds against certified lower bounds of the right-hand side"
                                     : "holds on the domain");
}

OracleCheck run_oracle(TransformerKind kind, const AnnotationSet& ann, const CheckConfig& cfg,
                       bool lower, const std::function<ExtReal(const State&)>& bound,
                       const std::string& relation) {
  OracleCheck oc;
  oc.relation = relation;
  Engine engine(kind, oracle_config(ann, cfg));
  const std::size_t n = ann.domain.size();
  const std::size_t m = std::min(n, cfg.oracle_states);
  for (std::size_t j = 0; j < m; ++j) {
    const State s = ann.domain.at(m == n ? j : j * n / m);
    ++oc.states_checked;
    BoundedValue bv;
    try {
      bv = engine.evaluate(ann.loop, ann.post, s);
    } catch (const transformers::StateSpaceExplosion&) {
      continue;
    }
    const bool usable = bv.converged || (kind == TransformerKind::ERT && bv.diverged);
    if (!usable) continue;
    ++oc.states_converged;
    const ExtReal b = bound(s);
    const double scale = b.is_finite() ? std::max(1.0, std::fabs(b.to_double())) : 1.0;
    const double tol = std::max(cfg.tol, algebra::kFloatTolerance) * scale;
    const double gap = lower ? algebra::excess(b, bv.value) : algebra::excess(bv.value, b);
    if (gap > tol) {
      oc.consistent = false;
      if (gap > oc.max_violation || !oc.worst) {
        oc.max_violation = gap;
        oc.worst = s;
      }
    }
  }
  return oc;
}

void finish(Certificate& cert, const AnnotationSet& ann, const CheckConfig& cfg, bool lower,
            const std::optional<Expr>& bound_expr,
            const std::function<ExtReal(const State&)>& bound, const std::string& relation) {
  cert.domain = ann.domain;
  bool failed_any = false;
  bool undecided_any = false;
  bool evidence = false;
  for (const SideCondition& c : cert.conditions) {
    failed_any = failed_any || c.status == Status::Failed;
    undecided_any = undecided_any || c.status == Status::Undecided;
    evidence = evidence || c.evidence;
  }
  cert.verdict = failed_any      ? CertVerdict::Rejected
                 : undecided_any ? CertVerdict::Inconclusive
                                 : CertVerdict::Accepted;
  cert.caveats.push_back(kDomainCaveat);
  if (evidence) cert.caveats.push_back(kEvidenceCaveat);
  if (ann.truncation)
    cert.caveats.push_back("truncated value iteration outside " +
                           syntax::to_string(*ann.truncation) + " yields lower bounds only");
  cert.oracle = run_oracle(cert.kind, ann, cfg, lower, bound, relation);
  if (cert.verdict == CertVerdict::Accepted && !cert.oracle->consistent)
    cert.caveats.push_back("oracle disagreement at " + show(*cert.oracle->worst));
  if (bound_expr && !ann.prefix.empty()) {
    try {
      const Program prefix = syntax::make_seq(ann.prefix);
      cert.program_bound = ProgramBound{
          algebra::simplify(transformers::transform_loopfree(cert.kind, prefix, *bound_expr)),
          lower};
    } catch (const transformers::TransformError&) {
    }
  }
}

std::function<ExtReal(const State&)> invariant_fn(const AnnotationSet& ann) {
  return [&ann](const State& s) { return algebra::eval(ann.invariant, s); };
}

Certificate trivially_zero(Rule rule, TransformerKind kind, const AnnotationSet& ann,
                           const CheckConfig& cfg) {
  Certificate cert;
  cert.rule = rule;
  cert.kind = kind;
  cert.certified_bound = syntax::to_string(ann.invariant);
  cert.conditions.push_back(passed("zero-invariant", "I = 0 on the domain is a lower bound"));
  finish(cert, ann, cfg, true, ann.invariant, invariant_fn(ann), "I <= lfp");
  return cert;
}

}  // namespace

std::string to_string(AstAssertion a) {
  switch (a) {
    case AstAssertion::None: return "none";
    case AstAssertion::BodyAst: return "body-ast";
    case AstAssertion::LoopAst: return "loop-ast";
    case AstAssertion::LoopPast: return "loop-past";
  }
  return "none";
}

std::optional<AstAssertion> parse_ast_assertion(const std::string& text) {
  for (AstAssertion a : {AstAssertion::None, AstAssertion::BodyAst, AstAssertion::LoopAst,
                         AstAssertion::LoopPast})
    if (to_string(a) == text) return a;
  return std::nullopt;
}

std::string to_string(Rule r) {
  for (const RuleText& t : kRules)
    if (t.rule == r) return t.name;
  return "?";
}

std::optional<Rule> parse_rule(const std::string& text) {
  for (const RuleText& t : kRules)
    if (text == t.name) return t.rule;
  return std::nullopt;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Passed: return "PASSED";
    case Status::Failed: return "FAILED";
    case Status::Undecided: return "UNDECIDED";
  }
  return "?";
}

std::string to_string(CertVerdict v) {
  switch (v) {
    case CertVerdict::Accepted: return "ACCEPTED";
    case CertVerdict::Rejected: return "REJECTED";
    case CertVerdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

AnnotationSet AnnotationSet::make(Program program, Expr post, Expr invariant,
                                  StateDomain domain) {
  syntax::LoopSplit split = syntax::split_at_first_loop(program);
  if (!split.loop) throw AnnotationError("program has no top-level while loop");
  if (!split.suffix.empty())
    throw AnnotationError("statements after the first top-level loop are not supported");
  AnnotationSet ann{std::move(program), *split.loop,          std::move(split.prefix),
                    std::move(post),    std::move(invariant), std::move(domain),
                    std::nullopt,       std::nullopt,          std::nullopt,
                    std::nullopt,       std::nullopt,          AstAssertion::None,
                    std::nullopt};
  ann.validate();
  return ann;
}

void AnnotationSet::validate() const {
  if (loop.kind() != Program::Kind::While) throw AnnotationError("annotated program is not a loop");
  std::set<std::string> needed = syntax::free_variables(loop.guard());
  auto add = [&needed](const std::set<std::string>& vs) { needed.insert(vs.begin(), vs.end()); };
  add(syntax::live_in_variables(loop.body()));
  add(syntax::free_variables(post));
  add(syntax::free_variables(invariant));
  if (g) add(syntax::free_variables(*g));
  if (looping_bound) add(syntax::free_variables(*looping_bound));
  std::string missing;
  for (const std::string& v : needed) {
    if (domain.covers({v})) continue;
    missing += missing.empty() ? v : ", " + v;
  }
  if (!missing.empty()) throw AnnotationError("domain does not cover variable(s) " + missing);
  if (cdb_bound && sgn(*cdb_bound) < 0) throw AnnotationError("cdb_bound must be nonnegative");
  if (bound_on_f && sgn(*bound_on_f) < 0) throw AnnotationError("bound_on_f must be nonnegative");
  if (epsilon && sgn(*epsilon) <= 0) throw AnnotationError("epsilon must be positive");
}

void CheckConfig::validate() const {
  if (!(tol >= 0)) throw Error("tolerance must be nonnegative");
  if (evidence_samples < 1) throw Error("evidence_samples must be at least 1");
  if (!(ast_delta >= 0 && ast_delta < 1)) throw Error("ast_delta must lie in [0, 1)");
  if (probe_depth < 0) throw Error("probe_depth must be nonnegative");
  if (oracle_states < 1) throw Error("oracle_states must be at least 1");
  fixpoint.validate();
  simulation.validate();
}

const SideCondition* Certificate::find(const std::string& name) const {
  for (const SideCondition& c : conditions)
    if (c.name == name) return &c;
  return nullptr;
}

const SideCondition* Certificate::rejection() const {
  for (const SideCondition& c : conditions)
    if (c.status == Status::Failed && c.witness) return &c;
  return nullptr;
}

ComparisonResult check_invariant(Direction dir, TransformerKind kind, const AnnotationSet& ann,
                                 const CheckConfig& cfg) {
  return compare_table(dir, phi_table(kind, ann, cfg), cfg.tol);
}

HarmonizationResult check_harmonization(const AnnotationSet& ann, const CheckConfig& cfg) {
  HarmonizationResult r;
  for (const State& s : ann.domain.states()) {
    if (guard_holds(ann, s)) continue;
    const ExtReal iv = algebra::eval(ann.invariant, s);
    const ExtReal fv = algebra::eval(ann.post, s);
    if (algebra::distance(iv, fv) <= algebra::effective_tolerance(iv, fv, cfg.tol)) continue;
    r.holds = false;
    r.witness = s;
    r.invariant_value = iv;
    r.post_value = fv;
    return r;
  }
  return r;
}

namespace {

ExtReal delta_with(Engine& engine, const Expr& invariant, const Program& loop, const State& s) {
  if (!algebra::holds(loop.guard(), s)) return ExtReal(0);
  const ExtReal here = algebra::eval(invariant, s);
  if (here.is_infinite())
    throw EvalError(EvalError::Kind::UndefinedArithmetic,
                    "delta needs a finite invariant, but I is infinite at " + show(s));
  const transformers::Outcome& o = engine.outcome(loop.body(), s);
  ExtReal acc(0);
  for (const auto& [t, w] : o.finals) {
    const ExtReal there = algebra::eval(invariant, t);
    acc += w * (there.is_infinite() ? there : algebra::abs(there - here));
  }
  return acc;
}

}  // namespace

ExtReal delta(const Expr& invariant, const Program& loop, const State& s, const CheckConfig& cfg) {
  Engine engine(TransformerKind::WP, plain_config(cfg));
  return delta_with(engine, invariant, loop, s);
}

CdbReport check_cdb(const AnnotationSet& ann, const CheckConfig& cfg) {
  Engine engine(TransformerKind::WP, plain_config(cfg));
  CdbReport r;
  r.max_delta = ExtReal(0);
  for (const State& s : ann.domain.states()) {
    const ExtReal d = delta_with(engine, ann.invariant, ann.loop, s);
    if (!r.argmax || d > r.max_delta) {
      r.max_delta = d;
      r.argmax = s;
    }
  }
  if (ann.cdb_bound) r.passed = leq_tol(r.max_delta, ExtReal(*ann.cdb_bound), cfg.tol);
  return r;
}

Certificate prove_upper_park(TransformerKind kind, const AnnotationSet& ann,
                             const CheckConfig& cfg) {
  cfg.validate();
  Certificate cert;
  cert.rule = Rule::ParkUpper;
  cert.kind = kind;
  cert.certified_bound = syntax::to_string(ann.invariant);
  const ComparisonResult r = check_invariant(Direction::Super, kind, ann, cfg);
  if (r.leq()) {
    cert.conditions.push_back(passed("superinvariance", "Phi(I) <= I on " + comparison_detail(r)));
  } else {
    const auto& v = *r.leq_violation;
    cert.conditions.push_back(failed(
        "superinvariance", "Phi(I) = " + show(v.lhs) + " > I = " + show(v.rhs), v.witness));
  }
  finish(cert, ann, cfg, false, ann.invariant, invariant_fn(ann), "lfp <= I");
  return cert;
}

Certificate prove_lower_ost(Rule rule, const AnnotationSet& ann, const CheckConfig& cfg) {
  if (rule != Rule::OstA && rule != Rule::OstB && rule != Rule::OstC)
    throw Error("prove_lower_ost expects ost-a, ost-b or ost-c");
  cfg.validate();
  if (invariant_is_zero(ann)) return trivially_zero(rule, TransformerKind::WP, ann, cfg);
  if (rule == Rule::OstA && !ann.looping_bound)
    throw MissingAssertion("rule ost-a needs `looping_bound`");
  if (rule == Rule::OstB) {
    if (!ann.cdb_bound) throw MissingAssertion("rule ost-b needs `cdb_bound`");
    if (ann.ast != AstAssertion::LoopPast)
      throw MissingAssertion("rule ost-b needs `ast = loop-past` (finite expected looping time)");
  }
  if (rule == Rule::OstC) {
    if (!ann.bound_on_f) throw MissingAssertion("rule ost-c needs `bound_on_f`");
    if (ann.ast != AstAssertion::LoopAst && ann.ast != AstAssertion::LoopPast)
      throw MissingAssertion("rule ost-c needs `ast = loop-ast` (or loop-past)");
  }

  Certificate cert;
  cert.rule = rule;
  cert.kind = TransformerKind::WP;
  cert.certified_bound = syntax::to_string(ann.invariant);
  const PhiTable table = phi_table(TransformerKind::WP, ann, cfg);
  cert.conditions.push_back(subinvariance_condition(
      "subinvariance", "I <= Phi(I)", compare_table(Direction::Sub, table, cfg.tol)));
  cert.conditions.push_back(body_ast_condition(rule, ann, cfg));
  switch (rule) {
    case Rule::OstA:
      cert.conditions.push_back(finiteness_condition(ann, "f"));
      cert.conditions.push_back(bounded_looping_time(ann, cfg));
      cert.conditions.push_back(phi_iterates_finite(ann, cfg));
      break;
    case Rule::OstB:
      cert.conditions.push_back(finiteness_condition(ann, "f"));
      cert.conditions.push_back(termination_evidence("finite-expected-looping-time", ann, cfg));
      cert.conditions.push_back(harmonization_condition(ann, cfg, "f"));
      cert.conditions.push_back(phi_finite_condition(table, "phi-finite"));
      cert.conditions.push_back(cdb_condition(ann, cfg));
      break;
    default:
      cert.conditions.push_back(bounded_condition(ann, false));
      cert.conditions.push_back(termination_evidence("loop-ast", ann, cfg));
      break;
  }
  finish(cert, ann, cfg, true, ann.invariant, invariant_fn(ann), "I <= lfp");
  return cert;
}

Certificate prove_lower_mciver(Rule variant, const AnnotationSet& ann, const CheckConfig& cfg) {
  if (variant != Rule::McIver1 && variant != Rule::McIver2 && variant != Rule::McIver3 &&
      variant != Rule::McIverGen)
    throw Error("prove_lower_mciver expects mciver-1, mciver-2, mciver-3 or mciver-gen");
  cfg.validate();
  if (invariant_is_zero(ann)) return trivially_zero(variant, TransformerKind::WP, ann, cfg);
  const std::string name = to_string(variant);
  if (!ann.bound_on_f) throw MissingAssertion("rule " + name + " needs `bound_on_f`");
  if (variant == Rule::McIver2 && !ann.g)
    throw MissingAssertion("rule mciver-2 needs `g` = [G]");
  if ((variant == Rule::McIver3 || variant == Rule::McIverGen) && !ann.epsilon)
    throw MissingAssertion("rule " + name + " needs `epsilon`");
  if (variant == Rule::McIverGen && !ann.g) throw MissingAssertion("rule mciver-gen needs `g`");

  Certificate cert;
  cert.rule = variant;
  cert.kind = TransformerKind::WP;
  const PhiTable table = phi_table(TransformerKind::WP, ann, cfg);
  cert.conditions.push_back(subinvariance_condition(
      "subinvariance", "I <= Phi(I)", compare_table(Direction::Sub, table, cfg.tol)));
  cert.conditions.push_back(bounded_condition(ann, variant == Rule::McIverGen || variant == Rule::McIver2));
  if (variant != Rule::McIverGen) cert.conditions.push_back(harmonization_condition(ann, cfg, "f"));

  auto indicator = [&](const char* cname, const Expr& e, const char* what) {
    const bool syntactic = e.kind() == Expr::Kind::Iverson ||
                           (e.kind() == Expr::Kind::Literal && (e.is_literal(0) || e.is_literal(1)));
    for (const State& s : ann.domain.states()) {
      const ExtReal v = algebra::eval(e, s);
      if (!v.is_zero() && v != ExtReal(1))
        return failed(cname, std::string(what) + " = " + show(v) + " is not 0/1", s);
    }
    return passed(cname, std::string(what) + (syntactic ? " is an Iverson bracket"
                                                          : " takes only values 0 and 1 on the domain"));
  };

  std::optional<Expr> bound_expr = ann.invariant;
  std::function<ExtReal(const State&)> bound = invariant_fn(ann);
  std::string relation = "I <= lfp";
  const Expr one = Expr::literal(1);
  switch (variant) {
    case Rule::McIver1: {
      cert.conditions.push_back(indicator("indicator", ann.invariant, "I"));
      SideCondition t = termination_evidence("termination-probability", ann, cfg);
      if (t.status == Status::Failed) {
        t.status = Status::Passed;
        t.witness.reset();
        t.detail = "T < 1 somewhere: " + t.detail;
      }
      cert.conditions.push_back(t);
      cert.certified_bound = "T * (" + syntax::to_string(ann.invariant) + ")";
      bound_expr.reset();
      auto engine = std::make_shared<Engine>(TransformerKind::WP, oracle_config(ann, cfg));
      bound = [&ann, engine, one](const State& s) {
        return engine->evaluate(ann.loop, one, s).value * algebra::eval(ann.invariant, s);
      };
      relation = "T*I <= lfp";
      break;
    }
    case Rule::McIver2: {
      cert.conditions.push_back(indicator("indicator", *ann.g, "g"));
      const simulator::SimulationConfig sc = evidence_config(cfg);
      SideCondition c = passed("g-below-termination", "[G] <= T on sampled runs");
      c.evidence = true;
      for (const State& s : ann.domain.states()) {
        if (algebra::eval(*ann.g, s).is_zero() || !guard_holds(ann, s)) continue;
        const auto est = simulator::estimate_looping_time(ann.loop, s, sc);
        if (est.estimate.nonterminated_fraction > cfg.ast_delta) {
          c = failed("g-below-termination",
                     "G holds but sampled termination frequency is " +
                         std::to_string(1.0 - est.estimate.nonterminated_fraction),
                     s);
          c.evidence = true;
          break;
        }
      }
      cert.conditions.push_back(c);
      cert.certified_bound = "(" + syntax::to_string(*ann.g) + ") * (" +
                             syntax::to_string(ann.invariant) + ")";
      bound_expr = *ann.g * ann.invariant;
      bound = [&ann](const State& s) {
        return algebra::eval(*ann.g, s) * algebra::eval(ann.invariant, s);
      };
      relation = "[G]*I <= lfp";
      break;
    }
    case Rule::McIver3:
      cert.conditions.push_back(eps_comparison("eps-below-termination", ann, one, cfg));
      cert.certified_bound = syntax::to_string(ann.invariant);
      break;
    default:
      cert.conditions.push_back(body_ast_condition(variant, ann, cfg));
      cert.conditions.push_back(eps_comparison("eps-below-wp-g", ann, *ann.g, cfg));
      cert.certified_bound = syntax::to_string(ann.invariant);
      break;
  }
  finish(cert, ann, cfg, true, bound_expr, bound, relation);
  return cert;
}

Certificate prove_lower_ert(const AnnotationSet& ann, const CheckConfig& cfg) {
  cfg.validate();
  if (invariant_is_zero(ann)) return trivially_zero(Rule::ErtLower, TransformerKind::ERT, ann, cfg);
  if (!ann.cdb_bound) throw MissingAssertion("rule ert-lower needs `cdb_bound`");
  Certificate cert;
  cert.rule = Rule::ErtLower;
  cert.kind = TransformerKind::ERT;
  cert.certified_bound = syntax::to_string(ann.invariant);
  const PhiTable ert_table = phi_table(TransformerKind::ERT, ann, cfg);
  cert.conditions.push_back(subinvariance_condition(
      "runtime-subinvariance", "I <= Phi_ert(I)", compare_table(Direction::Sub, ert_table, cfg.tol)));
  cert.conditions.push_back(finiteness_condition(ann, "t"));
  cert.conditions.push_back(harmonization_condition(ann, cfg, "t"));
  cert.conditions.push_back(cdb_condition(ann, cfg));
  cert.conditions.push_back(
      phi_finite_condition(phi_table(TransformerKind::WP, ann, cfg), "wp-phi-finite"));
  finish(cert, ann, cfg, true, ann.invariant, invariant_fn(ann), "I <= ert");
  return cert;
}

Certificate prove(Rule rule, TransformerKind kind, const AnnotationSet& ann,
                  const CheckConfig& cfg) {
  switch (rule) {
    case Rule::ParkUpper: return prove_upper_park(kind, ann, cfg);
    case Rule::OstA:
    case Rule::OstB:
    case Rule::OstC: return prove_lower_ost(rule, ann, cfg);
    case Rule::McIver1:
    case Rule::McIver2:
    case Rule::McIver3:
    case Rule::McIverGen: return prove_lower_mciver(rule, ann, cfg);
    case Rule::ErtLower: return prove_lower_ert(ann, cfg);
  }
  throw Error("unknown rule");
}

UiReport check_uniform_integrability_empirical(const AnnotationSet& ann, int n_max,
                                               const CheckConfig& cfg) {
  if (n_max < 0) throw Error("n_max must be nonnegative");
  Engine phi_engine(TransformerKind::WP, plain_config(cfg));
  Engine lfp_engine(TransformerKind::WP, oracle_config(ann, cfg));
  UiReport report;
  for (const State& s : ann.domain.states()) {
    UiStateReport row;
    row.state = s;
    const BoundedValue bv = lfp_engine.evaluate(ann.loop, ann.post, s);
    row.lfp = bv.value;
    row.lfp_converged = bv.converged;
    for (int n = 0; n <= n_max; ++n) {
      const ExtReal v = phi_engine.phi_power(ann.loop, ann.post, ann.invariant, n, s);
      row.iterates.push_back(v);
      row.gaps.push_back(algebra::distance(v, row.lfp));
    }
    report.final_max_gap = std::max(report.final_max_gap, row.gaps.back());
    report.states.push_back(std::move(row));
  }
  return report;
}

}  // namespace probcert::certificates
