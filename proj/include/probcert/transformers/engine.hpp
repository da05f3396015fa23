// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "probcert/transformers/symbolic.hpp"

namespace probcert::transformers {

using algebra::ExtReal;
using syntax::StateDomain;

struct FixpointConfig {
  double abs_tol = 1e-9;
  std::int64_t max_iters = 1'000'000;
  /// States whose listed variables fall outside these ranges are absorbing with value 0.
  std::optional<StateDomain> truncation;
  std::size_t max_states = 200'000;
  double divergence_threshold = 1e15;
  bool record_trace = false;

  void validate() const;
};

struct BoundedValue {
  ExtReal value;
  bool converged = true;
  std::int64_t iterations = 0;
  bool is_lower_bound_only = false;
  bool diverged = false;
  /// Iterates Phi^k(0)(s) of the outermost loop, k = 1, 2, ... (when requested).
  std::vector<double> trace;
};

class StateSpaceExplosion : public Error {
 public:
  using Error::Error;
};

/// Final-state sub-distribution of a program run plus its expected cost.
struct Outcome {
  std::vector<std::pair<State, ExtReal>> finals;
  ExtReal cost;
  bool converged = true;
  bool truncated = false;
  bool diverged = false;
  std::int64_t iterations = 0;

  ExtReal mass() const;
};

/// Numeric wp/ert evaluation over reachable states. One instance caches loop
/// outcomes per (loop, state); instances are not thread-safe.
class Engine {
 public:
  explicit Engine(TransformerKind kind, FixpointConfig cfg = {});

  TransformerKind kind() const { return kind_; }
  const FixpointConfig& config() const { return cfg_; }

  /// Memoized outcome of running c from s.
  const Outcome& outcome(const Program& c, const State& s);
  /// wp(c, f)(s) or ert(c, f)(s) with convergence metadata.
  BoundedValue evaluate(const Program& c, const Expr& f, const State& s);
  /// Phi(X)(s) for a While program.
  ExtReal char_apply(const Program& loop, const Expr& f, const Expr& x, const State& s);
  /// Phi^n(X)(s) for a While program.
  ExtReal phi_power(const Program& loop, const Expr& f, const Expr& x, int n, const State& s);

 private:
  using Key = std::pair<const syntax::ProgramNode*, State>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<const void*>{}(k.first) ^ (k.second.hash() * 31);
    }
  };

  Outcome run(const Program& c, const State& s);
  Outcome solve_loop(const Program& loop, const State& s, const Expr* post,
                     std::vector<double>* trace, ExtReal* post_value);
  ExtReal expected(const Outcome& o, const Expr& f) const;
  bool truncated(const State& s) const;

  TransformerKind kind_;
  FixpointConfig cfg_;
  std::unordered_map<Key, Outcome, KeyHash> loop_memo_;
  std::unordered_map<Key, Outcome, KeyHash> run_memo_;
  std::vector<Program> pinned_;
};

BoundedValue eval_transformer(TransformerKind kind, const Program& c, const Expr& f,
                              const State& s, const FixpointConfig& cfg = {});

}  // namespace probcert::transformers
