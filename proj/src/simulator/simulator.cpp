// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "probcert/simulator/simulator.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <thread>

#include "probcert/algebra/eval.hpp"
#include "probcert/syntax/printer.hpp"

namespace probcert::simulator {

namespace {

using algebra::EvalError;
using algebra::ExtReal;
using Kind = Program::Kind;

constexpr std::int64_t kChunkSize = 4096;

class Executor {
 public:
  Executor(SplitMix64& rng, std::int64_t step_cap, const syntax::ProgramNode* outer,
           std::vector<State>* heads)
      : rng_(rng), step_cap_(step_cap), outer_(outer), heads_(heads) {}

  /// False when some loop reached the step cap.
  bool exec(const Program& c, State& s) {
    switch (c.kind()) {
      case Kind::Skip:
        ++cost;
        return true;
      case Kind::Assign: {
        ++cost;
        const ExtReal v = algebra::eval_signed(c.rhs(), s);
        if (v.is_infinite())
          throw EvalError(EvalError::Kind::UndefinedArithmetic,
                          "cannot assign infinity to " + c.var());
        s.set(c.var(), v.is_exact() ? v.rational() : syntax::Rational(v.to_double()));
        return true;
      }
      case Kind::UnifAssign: {
        ++cost;
        const ExtReal lo = algebra::eval_signed(c.lo(), s);
        const ExtReal hi = algebra::eval_signed(c.hi(), s);
        if (!lo.is_exact() || !hi.is_exact() || !lo.is_integer() || !hi.is_integer() || lo > hi)
          throw EvalError(EvalError::Kind::UndefinedArithmetic,
                          "invalid uniform range in `" + syntax::to_string(c) + "` at " +
                              syntax::to_string(s));
        const mpz_class a = lo.rational().get_num();
        const mpz_class width = hi.rational().get_num() - a + 1;
        const std::uint64_t pick = rng_.below(width.get_ui());
        s.set(c.var(), syntax::Rational(mpz_class(a + mpz_class(static_cast<unsigned long>(pick)))));
        return true;
      }
      case Kind::Seq:
        return exec(c.first(), s) && exec(c.second(), s);
      case Kind::Ite:
        ++cost;
        return exec(algebra::holds(c.guard(), s) ? c.first() : c.second(), s);
      case Kind::PChoice: {
        ++cost;
        const ExtReal p = algebra::eval_signed(c.prob(), s);
        if (p.sign() < 0 || p > ExtReal(1))
          throw EvalError(EvalError::Kind::InvalidProbability,
                          "probability " + algebra::to_string(p) + " outside [0, 1] at " +
                              syntax::to_string(s));
        return exec(rng_.uniform01() < p.to_double() ? c.first() : c.second(), s);
      }
      case Kind::While: {
        const bool outer = c.node() == outer_;
        std::int64_t iterations = 0;
        for (;;) {
          ++cost;
          if (outer && heads_) heads_->push_back(s);
          if (!algebra::holds(c.guard(), s)) {
            if (outer) outer_iterations = iterations;
            return true;
          }
          if (iterations == step_cap_) return false;
          if (!exec(c.body(), s)) return false;
          ++iterations;
        }
      }
    }
    return true;
  }

  std::int64_t cost = 0;
  std::optional<std::int64_t> outer_iterations;

 private:
  SplitMix64& rng_;
  std::int64_t step_cap_;
  const syntax::ProgramNode* outer_;
  std::vector<State>* heads_;
};

const syntax::ProgramNode* outer_loop(const Program& p) {
  auto split = syntax::split_at_first_loop(p);
  return split.loop ? split.loop->node() : nullptr;
}

struct Sample {
  double value = 0.0;
  bool terminated = true;
  bool counted = true;
};

struct ChunkResult {
  RunningStats stats;
  std::int64_t nonterminated = 0;
  double max_value = 0.0;
};

template <class SampleFn>
std::vector<ChunkResult> run_chunks(const SimulationConfig& cfg, SampleFn sample) {
  cfg.validate();
  const std::int64_t n_chunks = (cfg.samples + kChunkSize - 1) / kChunkSize;
  std::vector<ChunkResult> chunks(static_cast<std::size_t>(n_chunks));
  auto work = [&](std::int64_t chunk) {
    ChunkResult& r = chunks[static_cast<std::size_t>(chunk)];
    const std::int64_t begin = chunk * kChunkSize;
    const std::int64_t end = std::min(cfg.samples, begin + kChunkSize);
    for (std::int64_t i = begin; i < end; ++i) {
      SplitMix64 rng = SplitMix64::for_trajectory(cfg.seed, static_cast<std::uint64_t>(i));
      const Sample smp = sample(rng);
      if (!smp.terminated) ++r.nonterminated;
      if (smp.counted) {
        r.stats.add(smp.value);
        r.max_value = std::max(r.max_value, smp.value);
      }
    }
  };
  const unsigned threads =
      static_cast<unsigned>(std::max<std::int64_t>(1, std::min<std::int64_t>(cfg.threads, n_chunks)));
  if (threads <= 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) work(c);
    return chunks;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::int64_t c = t; c < n_chunks; c += threads) work(c);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return chunks;
}

Estimate summarize(const std::vector<ChunkResult>& chunks, const SimulationConfig& cfg,
                   double* max_value = nullptr) {
  RunningStats total;
  std::int64_t nonterminated = 0;
  double mx = 0.0;
  for (const ChunkResult& c : chunks) {
    total.merge(c.stats);
    nonterminated += c.nonterminated;
    mx = std::max(mx, c.max_value);
  }
  if (max_value) *max_value = mx;
  Estimate e;
  e.mean = total.count() > 0 ? total.mean() : std::numeric_limits<double>::quiet_NaN();
  e.std_error = total.stderr_of_mean();
  e.n_samples = total.count();
  e.nonterminated_fraction = static_cast<double>(nonterminated) / static_cast<double>(cfg.samples);
  e.seed = cfg.seed;
  return e;
}

double finite_value(const Expr& f, const State& s) {
  const ExtReal v = algebra::eval(f, s);
  if (v.is_infinite())
    throw EvalError(EvalError::Kind::UndefinedArithmetic,
                    "simulation sample " + syntax::to_string(f) + " is infinite at " +
                        syntax::to_string(s));
  return v.to_double();
}

}  // namespace

void SimulationConfig::validate() const {
  if (samples < 1) throw Error("simulation needs at least one sample");
  if (step_cap < 1) throw Error("step cap must be at least 1");
  if (threads < 1) throw Error("thread count must be at least 1");
}

Trajectory run_once(const Program& p, const State& s, SplitMix64& rng, std::int64_t step_cap) {
  if (step_cap < 1) throw Error("step cap must be at least 1");
  Trajectory t;
  const syntax::ProgramNode* outer = outer_loop(p);
  Executor ex(rng, step_cap, outer, &t.heads);
  State state = s;
  t.terminated = ex.exec(p, state);
  t.accumulated_cost = ex.cost;
  t.final_state = state;
  if (t.terminated) t.looping_time = outer ? ex.outer_iterations.value_or(0) : 0;
  return t;
}

Estimate estimate_post(const Program& p, const Expr& f, const State& s,
                       const SimulationConfig& cfg) {
  auto chunks = run_chunks(cfg, [&](SplitMix64& rng) {
    Executor ex(rng, cfg.step_cap, nullptr, nullptr);
    State state = s;
    Sample smp;
    smp.terminated = ex.exec(p, state);
    smp.value = smp.terminated ? finite_value(f, state) : 0.0;
    return smp;
  });
  return summarize(chunks, cfg);
}

LoopingTimeEstimate estimate_looping_time(const Program& p, const State& s,
                                          const SimulationConfig& cfg) {
  const syntax::ProgramNode* outer = outer_loop(p);
  auto chunks = run_chunks(cfg, [&](SplitMix64& rng) {
    Executor ex(rng, cfg.step_cap, outer, nullptr);
    State state = s;
    Sample smp;
    smp.terminated = ex.exec(p, state);
    smp.counted = smp.terminated;
    smp.value = smp.terminated ? static_cast<double>(ex.outer_iterations.value_or(0)) : 0.0;
    return smp;
  });
  LoopingTimeEstimate out;
  double mx = 0.0;
  out.estimate = summarize(chunks, cfg, &mx);
  out.max_observed = static_cast<std::int64_t>(mx);
  return out;
}

Estimate estimate_ert(const Program& p, const State& s, const SimulationConfig& cfg) {
  auto chunks = run_chunks(cfg, [&](SplitMix64& rng) {
    Executor ex(rng, cfg.step_cap, nullptr, nullptr);
    State state = s;
    Sample smp;
    smp.terminated = ex.exec(p, state);
    smp.value = static_cast<double>(ex.cost);
    return smp;
  });
  return summarize(chunks, cfg);
}

Estimate estimate_induced_process(const Program& loop, const Expr& f, const Expr& inv,
                                  std::int64_t n_index, const State& s,
                                  const SimulationConfig& cfg) {
  if (loop.kind() != Kind::While)
    throw Error("induced process needs a while loop, got `" + syntax::to_string(loop) + "`");
  if (n_index < 0) throw Error("induced process index must be nonnegative");
  auto chunks = run_chunks(cfg, [&](SplitMix64& rng) {
    Executor ex(rng, cfg.step_cap, nullptr, nullptr);
    State state = s;
    Sample smp;
    for (std::int64_t j = 0; j <= n_index; ++j) {
      if (!algebra::holds(loop.guard(), state)) {
        smp.value = finite_value(f, state);
        return smp;
      }
      if (!ex.exec(loop.body(), state)) {
        smp.terminated = false;
        smp.value = 0.0;
        return smp;
      }
    }
    smp.value = finite_value(inv, state);
    return smp;
  });
  return summarize(chunks, cfg);
}

}  // namespace probcert::simulator
