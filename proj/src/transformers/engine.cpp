// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "probcert/transformers/engine.hpp"

#include <cmath>
#include <deque>
#include <functional>

#include "probcert/syntax/printer.hpp"

namespace probcert::transformers {

namespace {

using algebra::EvalError;
using Kind = Program::Kind;

Rational to_rational(const ExtReal& v, const std::string& context) {
  if (v.is_infinite())
    throw EvalError(EvalError::Kind::UndefinedArithmetic, "cannot store infinity in " + context);
  if (v.is_exact()) return v.rational();
  return Rational(v.to_double());
}

class DistributionBuilder {
 public:
  void add(const State& s, const ExtReal& w) {
    if (w.is_zero()) return;
    auto [it, inserted] = acc_.try_emplace(s, w);
    if (!inserted) it->second += w;
  }
  std::vector<std::pair<State, ExtReal>> take() {
    std::vector<std::pair<State, ExtReal>> out(acc_.begin(), acc_.end());
    acc_.clear();
    return out;
  }

 private:
  std::map<State, ExtReal> acc_;
};

void merge_flags(Outcome& into, const Outcome& from) {
  into.converged = into.converged && from.converged;
  into.truncated = into.truncated || from.truncated;
  into.diverged = into.diverged || from.diverged;
  into.iterations = std::max(into.iterations, from.iterations);
}

}  // namespace

void FixpointConfig::validate() const {
  if (!(abs_tol > 0)) throw Error("fixpoint abs_tol must be positive");
  if (max_iters < 1) throw Error("fixpoint max_iters must be at least 1");
  if (max_states < 1) throw Error("fixpoint max_states must be at least 1");
}

ExtReal Outcome::mass() const {
  ExtReal m(0);
  for (const auto& [s, w] : finals) m += w;
  return m;
}

Engine::Engine(TransformerKind kind, FixpointConfig cfg) : kind_(kind), cfg_(std::move(cfg)) {
  cfg_.validate();
}

bool Engine::truncated(const State& s) const {
  if (!cfg_.truncation) return false;
  for (const auto& r : cfg_.truncation->ranges()) {
    if (!s.has(r.var)) continue;
    if (!std::binary_search(r.values.begin(), r.values.end(), s.get(r.var))) return true;
  }
  return false;
}

const Outcome& Engine::outcome(const Program& c, const State& s) {
  Key key{c.node(), s};
  auto it = run_memo_.find(key);
  if (it != run_memo_.end()) return it->second;
  pinned_.push_back(c);
  return run_memo_.emplace(key, run(c, s)).first->second;
}

Outcome Engine::run(const Program& c, const State& s) {
  const bool ert = kind_ == TransformerKind::ERT;
  Outcome out;
  out.cost = ExtReal(0);
  switch (c.kind()) {
    case Kind::Skip:
      out.finals.emplace_back(s, ExtReal(1));
      out.cost = ert ? ExtReal(1) : ExtReal(0);
      return out;
    case Kind::Assign: {
      Rational v = to_rational(algebra::eval_signed(c.rhs(), s), "variable " + c.var());
      out.finals.emplace_back(s.with(c.var(), v), ExtReal(1));
      out.cost = ert ? ExtReal(1) : ExtReal(0);
      return out;
    }
    case Kind::UnifAssign: {
      const ExtReal lo = algebra::eval_signed(c.lo(), s);
      const ExtReal hi = algebra::eval_signed(c.hi(), s);
      if (!lo.is_exact() || !hi.is_exact() || !lo.is_integer() || !hi.is_integer())
        throw TransformError(TransformError::Kind::NonConstantUniformBounds,
                             "uniform bounds must evaluate to integers in `" +
                                 syntax::to_string(c) + "` at " + syntax::to_string(s));
      if (lo > hi)
        throw TransformError(TransformError::Kind::EmptyUniformRange,
                             "empty uniform range in `" + syntax::to_string(c) + "` at " +
                                 syntax::to_string(s));
      const mpz_class a = lo.rational().get_num();
      const mpz_class b = hi.rational().get_num();
      const ExtReal w(Rational(mpz_class(1), mpz_class(b - a + 1)));
      for (mpz_class m = a; m <= b; ++m) out.finals.emplace_back(s.with(c.var(), Rational(m)), w);
      out.cost = ert ? ExtReal(1) : ExtReal(0);
      return out;
    }
    case Kind::Seq: {
      Outcome first = run(c.first(), s);
      merge_flags(out, first);
      DistributionBuilder dist;
      ExtReal cost = first.cost;
      for (const auto& [mid, w] : first.finals) {
        Outcome second = run(c.second(), mid);
        merge_flags(out, second);
        if (ert) cost += w * second.cost;
        for (const auto& [fin, w2] : second.finals) dist.add(fin, w * w2);
      }
      out.finals = dist.take();
      out.cost = cost;
      return out;
    }
    case Kind::Ite: {
      Outcome branch = run(algebra::holds(c.guard(), s) ? c.first() : c.second(), s);
      if (ert) branch.cost = ExtReal(1) + branch.cost;
      return branch;
    }
    case Kind::PChoice: {
      const ExtReal p = algebra::eval_signed(c.prob(), s);
      if (p.sign() < 0 || p > ExtReal(1))
        throw EvalError(EvalError::Kind::InvalidProbability,
                        "probability " + algebra::to_string(p) + " outside [0, 1] at " +
                            syntax::to_string(s));
      const ExtReal q = ExtReal(1) - p;
      DistributionBuilder dist;
      ExtReal cost = ert ? ExtReal(1) : ExtReal(0);
      for (int side = 0; side < 2; ++side) {
        const ExtReal& w = side == 0 ? p : q;
        if (w.is_zero()) continue;
        Outcome branch = run(side == 0 ? c.first() : c.second(), s);
        merge_flags(out, branch);
        if (ert) cost += w * branch.cost;
        for (const auto& [fin, w2] : branch.finals) dist.add(fin, w * w2);
      }
      out.finals = dist.take();
      out.cost = cost;
      return out;
    }
    case Kind::While: {
      Key key{c.node(), s};
      auto it = loop_memo_.find(key);
      if (it != loop_memo_.end()) return it->second;
      Outcome solved = solve_loop(c, s, nullptr, nullptr, nullptr);
      loop_memo_.emplace(key, solved);
      return solved;
    }
  }
  return out;
}

Outcome Engine::solve_loop(const Program& loop, const State& s0, const Expr* post,
                           std::vector<double>* trace, ExtReal* post_value) {
  const bool ert = kind_ == TransformerKind::ERT;
  enum class Status { Unexplored, Exit, Continue, Truncated };
  struct Node {
    State state;
    Status status = Status::Unexplored;
    std::vector<std::pair<int, double>> succ;
    double cost = 0.0;
    bool cost_infinite = false;
    double post = 0.0;
  };

  Outcome out;
  std::vector<Node> nodes;
  std::unordered_map<State, int, syntax::StateHash> index;
  std::vector<double> cur;
  std::vector<double> next;
  std::vector<double> absorbed;

  auto intern = [&](const State& u) -> int {
    auto [it, inserted] = index.try_emplace(u, static_cast<int>(nodes.size()));
    if (inserted) {
      if (nodes.size() >= cfg_.max_states)
        throw StateSpaceExplosion("reachable state space of `while (" +
                                  syntax::to_string(loop.guard()) + ") ...` exceeds " +
                                  std::to_string(cfg_.max_states) + " states");
      Node node;
      node.state = u;
      nodes.push_back(std::move(node));
      cur.push_back(0.0);
      next.push_back(0.0);
      absorbed.push_back(0.0);
    }
    return it->second;
  };

  auto explore = [&](int id) {
    if (nodes[id].status != Status::Unexplored) return;
    const State u = nodes[id].state;
    if (truncated(u)) {
      nodes[id].status = Status::Truncated;
      return;
    }
    if (!algebra::holds(loop.guard(), u)) {
      nodes[id].status = Status::Exit;
      if (post) nodes[id].post = algebra::eval(*post, u).to_double();
      return;
    }
    const Outcome body = run(loop.body(), u);
    merge_flags(out, body);
    std::vector<std::pair<int, double>> succ;
    succ.reserve(body.finals.size());
    for (const auto& [v, w] : body.finals) succ.emplace_back(intern(v), w.to_double());
    Node& n = nodes[id];
    n.status = Status::Continue;
    n.succ = std::move(succ);
    if (ert) {
      n.cost_infinite = body.cost.is_infinite();
      n.cost = n.cost_infinite ? 0.0 : body.cost.to_double();
    }
  };

  auto remove_trapped = [&](std::vector<int>& active) -> double {
    for (int id : active) explore(id);
    std::vector<std::vector<int>> preds(nodes.size());
    std::vector<char> reach(nodes.size(), 0);
    std::deque<int> queue;
    for (std::size_t id = 0; id < nodes.size(); ++id) {
      const Node& n = nodes[id];
      if (n.status == Status::Continue) {
        for (const auto& [sid, w] : n.succ)
          if (w > 0) preds[sid].push_back(static_cast<int>(id));
      } else {
        reach[id] = 1;
        queue.push_back(static_cast<int>(id));
      }
    }
    while (!queue.empty()) {
      const int id = queue.front();
      queue.pop_front();
      for (int p : preds[id]) {
        if (!reach[p]) {
          reach[p] = 1;
          queue.push_back(p);
        }
      }
    }
    double trapped = 0.0;
    std::vector<int> kept;
    for (int id : active) {
      if (reach[id]) {
        kept.push_back(id);
      } else {
        trapped += cur[id];
        cur[id] = 0.0;
      }
    }
    active.swap(kept);
    return trapped;
  };

  double cost_total = 0.0;
  double post_acc = 0.0;
  std::vector<int> active{intern(s0)};
  cur[active[0]] = 1.0;
  bool converged = false;
  std::int64_t iter = 0;
  while (iter < cfg_.max_iters) {
    ++iter;
    std::vector<int> next_ids;
    double cost_inc = 0.0;
    for (int id : active) {
      const double m = cur[id];
      cur[id] = 0.0;
      if (m == 0.0) continue;
      explore(id);
      const Node& n = nodes[id];
      switch (n.status) {
        case Status::Truncated:
          out.truncated = true;
          break;
        case Status::Exit:
          cost_inc += m;
          absorbed[id] += m;
          post_acc += m * n.post;
          break;
        case Status::Continue:
          if (n.cost_infinite) out.diverged = true;
          cost_inc += m * (1.0 + n.cost);
          for (const auto& [sid, w] : n.succ) {
            if (w == 0.0) continue;
            if (next[sid] == 0.0) next_ids.push_back(sid);
            next[sid] += m * w;
          }
          break;
        case Status::Unexplored:
          break;
      }
    }
    if (ert) cost_total += cost_inc;
    std::swap(cur, next);
    active.swap(next_ids);
    if (trace) trace->push_back(post_acc + cost_total);
    if (out.diverged || cost_total > cfg_.divergence_threshold) {
      out.diverged = true;
      break;
    }
    double active_mass = 0.0;
    for (int id : active) active_mass += cur[id];
    if (active_mass <= cfg_.abs_tol && (!ert || cost_inc <= cfg_.abs_tol)) {
      converged = true;
      break;
    }
    if ((iter & (iter - 1)) == 0 || iter % 256 == 0) {
      const double trapped = remove_trapped(active);
      if (trapped > 0.0 && ert) {
        out.diverged = true;
        break;
      }
      active_mass -= trapped;
      if (active_mass <= cfg_.abs_tol && trapped > 0.0) {
        converged = true;
        for (int id : active) cur[id] = 0.0;
        active.clear();
        break;
      }
    }
  }
  if (!converged && !out.diverged) out.converged = false;
  out.iterations = std::max(out.iterations, iter);
  for (std::size_t id = 0; id < nodes.size(); ++id)
    if (absorbed[id] > 0.0) out.finals.emplace_back(nodes[id].state, ExtReal::approx(absorbed[id]));
  if (out.diverged) {
    out.converged = false;
    out.cost = ert ? ExtReal::infinity() : ExtReal(0);
  } else {
    out.cost = ExtReal::approx(cost_total);
  }
  if (post_value) *post_value = ExtReal::approx(post_acc + cost_total);
  return out;
}

ExtReal Engine::expected(const Outcome& o, const Expr& f) const {
  ExtReal acc = kind_ == TransformerKind::ERT ? o.cost : ExtReal(0);
  for (const auto& [s, w] : o.finals) acc += w * algebra::eval(f, s);
  return acc;
}

BoundedValue Engine::evaluate(const Program& c, const Expr& f, const State& s) {
  BoundedValue bv;
  const Outcome* o = nullptr;
  Outcome traced;
  if (cfg_.record_trace && c.kind() == Kind::While) {
    pinned_.push_back(c);
    traced = solve_loop(c, s, &f, &bv.trace, nullptr);
    o = &traced;
  } else {
    o = &outcome(c, s);
  }
  bv.iterations = o->iterations;
  if (o->diverged && kind_ == TransformerKind::ERT) {
    bv.value = ExtReal::infinity();
    bv.converged = false;
    bv.diverged = true;
    bv.is_lower_bound_only = false;
    return bv;
  }
  bv.value = expected(*o, f);
  bv.converged = o->converged;
  bv.is_lower_bound_only = o->truncated || !o->converged;
  return bv;
}

ExtReal Engine::char_apply(const Program& loop, const Expr& f, const Expr& x, const State& s) {
  return phi_power(loop, f, x, 1, s);
}

ExtReal Engine::phi_power(const Program& loop, const Expr& f, const Expr& x, int n,
                          const State& s) {
  if (loop.kind() != Kind::While)
    throw Error("phi_power expects a while loop, got `" + syntax::to_string(loop) + "`");
  const bool ert = kind_ == TransformerKind::ERT;
  std::map<std::pair<int, State>, ExtReal> memo;
  std::function<ExtReal(int, const State&)> rec = [&](int k, const State& u) -> ExtReal {
    if (k == 0) return algebra::eval(x, u);
    auto it = memo.find({k, u});
    if (it != memo.end()) return it->second;
    ExtReal v;
    if (!algebra::holds(loop.guard(), u)) {
      v = algebra::eval(f, u);
      if (ert) v = ExtReal(1) + v;
    } else {
      const Outcome& body = outcome(loop.body(), u);
      v = ert ? ExtReal(1) + body.cost : ExtReal(0);
      for (const auto& [t, w] : body.finals) v += w * rec(k - 1, t);
    }
    memo.emplace(std::make_pair(k, u), v);
    return v;
  };
  return rec(n, s);
}

BoundedValue eval_transformer(TransformerKind kind, const Program& c, const Expr& f,
                              const State& s, const FixpointConfig& cfg) {
  Engine engine(kind, cfg);
  return engine.evaluate(c, f, s);
}

}  // namespace probcert::transformers
