// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "probcert/simulator/rng.hpp"
#include "probcert/simulator/stats.hpp"
#include "probcert/syntax/ast.hpp"
#include "probcert/syntax/state.hpp"

namespace probcert::simulator {

using syntax::Expr;
using syntax::Program;
using syntax::State;

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

struct SimulationConfig {
  std::int64_t samples = 100'000;
  std::uint64_t seed = kDefaultSeed;
  /// Maximal number of iterations of any single loop execution.
  std::int64_t step_cap = 10'000;
  unsigned threads = 1;

  void validate() const;
};

struct Trajectory {
  /// States at the guard evaluations of the outer loop.
  std::vector<State> heads;
  bool terminated = false;
  std::optional<std::int64_t> looping_time;
  std::int64_t accumulated_cost = 0;
  State final_state;
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  double nonterminated_fraction = 0.0;
  std::uint64_t seed = kDefaultSeed;
};

struct LoopingTimeEstimate {
  Estimate estimate;
  std::int64_t max_observed = 0;
};

/// Executes P once. The outer loop is the first top-level while loop of P.
Trajectory run_once(const Program& p, const State& s, SplitMix64& rng, std::int64_t step_cap);

/// Mean of f at termination; capped runs contribute 0.
Estimate estimate_post(const Program& p, const Expr& f, const State& s,
                       const SimulationConfig& cfg = {});
/// Mean outer-loop looping time over terminating runs.
LoopingTimeEstimate estimate_looping_time(const Program& p, const State& s,
                                          const SimulationConfig& cfg = {});
/// Mean unit-cost runtime; capped runs contribute their partial cost.
Estimate estimate_ert(const Program& p, const State& s, const SimulationConfig& cfg = {});
/// Mean of X_n: f at termination if the loop stops within n iterations, else I after n+1 iterations.
Estimate estimate_induced_process(const Program& loop, const Expr& f, const Expr& inv,
                                  std::int64_t n_index, const State& s,
                                  const SimulationConfig& cfg = {});

}  // namespace probcert::simulator
