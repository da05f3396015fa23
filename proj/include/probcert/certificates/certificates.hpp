// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "probcert/algebra/eval.hpp"
#include "probcert/simulator/simulator.hpp"
#include "probcert/transformers/engine.hpp"

namespace probcert::certificates {

using algebra::ComparisonResult;
using algebra::ExtReal;
using syntax::Expr;
using syntax::Program;
using syntax::Rational;
using syntax::State;
using syntax::StateDomain;
using transformers::TransformerKind;

enum class AstAssertion { None, BodyAst, LoopAst, LoopPast };
std::string to_string(AstAssertion a);
std::optional<AstAssertion> parse_ast_assertion(const std::string& text);

enum class Rule { ParkUpper, OstA, OstB, OstC, McIver1, McIver2, McIver3, McIverGen, ErtLower };
std::string to_string(Rule r);
std::optional<Rule> parse_rule(const std::string& text);

enum class Direction { Sub, Super };

class MissingAssertion : public Error {
 public:
  using Error::Error;
};

class AnnotationError : public Error {
 public:
  using Error::Error;
};

struct AnnotationSet {
  /// The program as written; `prefix` is everything before `loop`.
  Program program;
  Program loop;
  std::vector<Program> prefix;
  Expr post;
  Expr invariant;
  StateDomain domain;
  std::optional<Rational> cdb_bound;
  /// N(s); a constant expression gives a uniform bound.
  std::optional<Expr> looping_bound;
  /// Common upper bound for f, I (and g) on the domain.
  std::optional<Rational> bound_on_f;
  std::optional<Rational> epsilon;
  /// Auxiliary expectation: g of the generalized rule, [G] of McIver variant 2.
  std::optional<Expr> g;
  AstAssertion ast = AstAssertion::None;
  std::optional<StateDomain> truncation;

  /// Splits the program at its first top-level loop and checks domain coverage.
  static AnnotationSet make(Program program, Expr post, Expr invariant, StateDomain domain);
  void validate() const;
};

struct CheckConfig {
  double tol = 1e-9;
  transformers::FixpointConfig fixpoint;
  simulator::SimulationConfig simulation;
  /// Trajectories per domain state for termination evidence.
  std::int64_t evidence_samples = 4000;
  double ast_delta = 0.01;
  int probe_depth = 5;
  /// Domain states used by the oracle cross-check (evenly spaced when the domain is larger).
  std::size_t oracle_states = 4096;

  void validate() const;
};

enum class Status { Passed, Failed, Undecided };
std::string to_string(Status s);

struct SideCondition {
  std::string name;
  Status status = Status::Passed;
  std::string detail;
  std::optional<State> witness;
  /// Set when the outcome rests on simulation rather than exhaustive evaluation.
  bool evidence = false;
};

enum class CertVerdict { Accepted, Rejected, Inconclusive };
std::string to_string(CertVerdict v);

struct OracleCheck {
  /// "I <= lfp" for lower bounds, "lfp <= I" for Park.
  std::string relation;
  std::size_t states_checked = 0;
  std::size_t states_converged = 0;
  bool consistent = true;
  double max_violation = 0.0;
  std::optional<State> worst;
};

struct ProgramBound {
  /// Loop-free prefix transformer applied to the certified bound.
  Expr expression;
  bool lower = true;
};

struct Certificate {
  Rule rule = Rule::ParkUpper;
  TransformerKind kind = TransformerKind::WP;
  CertVerdict verdict = CertVerdict::Inconclusive;
  StateDomain domain;
  /// The expectation this certificate bounds the loop by (I, T*I or [G]*I).
  std::string certified_bound;
  std::vector<SideCondition> conditions;
  std::vector<std::string> caveats;
  std::optional<OracleCheck> oracle;
  std::optional<ProgramBound> program_bound;

  const SideCondition* find(const std::string& name) const;
  /// First failed condition that carries a witness.
  const SideCondition* rejection() const;
};

struct CdbReport {
  ExtReal max_delta;
  std::optional<State> argmax;
  std::optional<bool> passed;
};

struct HarmonizationResult {
  bool holds = true;
  std::optional<State> witness;
  ExtReal invariant_value;
  ExtReal post_value;
};

/// SUB: I <= Phi(I); SUPER: Phi(I) <= I, on the domain.
ComparisonResult check_invariant(Direction dir, TransformerKind kind, const AnnotationSet& ann,
                                 const CheckConfig& cfg = {});
/// I(s) = f(s) on every guard-false domain state.
HarmonizationResult check_harmonization(const AnnotationSet& ann, const CheckConfig& cfg = {});
/// [guard](s) * wp(body, |I - I(s)|)(s).
ExtReal delta(const Expr& invariant, const Program& loop, const State& s,
              const CheckConfig& cfg = {});
CdbReport check_cdb(const AnnotationSet& ann, const CheckConfig& cfg = {});

Certificate prove_upper_park(TransformerKind kind, const AnnotationSet& ann,
                             const CheckConfig& cfg = {});
Certificate prove_lower_ost(Rule rule, const AnnotationSet& ann, const CheckConfig& cfg = {});
Certificate prove_lower_mciver(Rule variant, const AnnotationSet& ann, const CheckConfig& cfg = {});
Certificate prove_lower_ert(const AnnotationSet& ann, const CheckConfig& cfg = {});
/// Dispatches on the rule; kind only matters for park-upper.
Certificate prove(Rule rule, TransformerKind kind, const AnnotationSet& ann,
                  const CheckConfig& cfg = {});

struct UiStateReport {
  State state;
  /// Phi^n(I)(s) for n = 0..n_max.
  std::vector<ExtReal> iterates;
  ExtReal lfp;
  bool lfp_converged = true;
  /// |Phi^n(I)(s) - lfp(s)| for n = 0..n_max.
  std::vector<double> gaps;
};

struct UiReport {
  std::vector<UiStateReport> states;
  /// Largest gap at n = n_max.
  double final_max_gap = 0.0;
};

/// Empirical uniform-integrability check: evidence only, never a proof.
UiReport check_uniform_integrability_empirical(const AnnotationSet& ann, int n_max,
                                               const CheckConfig& cfg = {});

}  // namespace probcert::certificates
