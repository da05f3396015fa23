#include "oracle/brute_force.hpp"

#include <deque>
#include <stdexcept>
#include <vector>

namespace probcert::oracle {

namespace {

using Kind = Program::Kind;

Rational value_of(const Expr& e, const State& s) {
  algebra::ExtReal v = algebra::eval_signed(e, s);
  if (!v.is_exact()) throw std::runtime_error("oracle: inexact value");
  return v.rational();
}

void add(Dist& d, const State& s, const Rational& p) {
  if (p == 0) return;
  d[s] += p;
}

std::vector<Rational> uniform_support(const Program& c, const State& s) {
  Rational lo = value_of(c.lo(), s);
  Rational hi = value_of(c.hi(), s);
  std::vector<Rational> out;
  for (mpz_class m = lo.get_num(); m <= hi.get_num(); ++m) out.emplace_back(m);
  return out;
}

struct Successor {
  std::vector<Program> stack;
  State state;
  Rational prob;
};

// One small-step move of the top statement. Returns the unit cost of the move.
int step(const std::vector<Program>& stack, const State& s, std::vector<Successor>& out) {
  std::vector<Program> rest(stack.begin(), stack.end() - 1);
  const Program c = stack.back();
  switch (c.kind()) {
    case Kind::Skip:
      out.push_back({rest, s, 1});
      return 1;
    case Kind::Assign:
      out.push_back({rest, s.with(c.var(), value_of(c.rhs(), s)), 1});
      return 1;
    case Kind::UnifAssign: {
      auto support = uniform_support(c, s);
      Rational p(1, static_cast<long>(support.size()));
      for (const auto& v : support) out.push_back({rest, s.with(c.var(), v), p});
      return 1;
    }
    case Kind::Seq: {
      auto next = rest;
      next.push_back(c.second());
      next.push_back(c.first());
      out.push_back({next, s, 1});
      return 0;
    }
    case Kind::Ite: {
      auto next = rest;
      next.push_back(algebra::holds(c.guard(), s) ? c.first() : c.second());
      out.push_back({next, s, 1});
      return 1;
    }
    case Kind::PChoice: {
      Rational p = value_of(c.prob(), s);
      auto left = rest;
      left.push_back(c.first());
      auto right = rest;
      right.push_back(c.second());
      out.push_back({left, s, p});
      out.push_back({right, s, 1 - p});
      return 1;
    }
    case Kind::While: {
      auto next = rest;
      if (algebra::holds(c.guard(), s)) {
        next.push_back(c);
        next.push_back(c.body());
      }
      out.push_back({next, s, 1});
      return 1;
    }
  }
  return 0;
}

using Key = std::pair<std::vector<const syntax::ProgramNode*>, State>;

Key key_of(const std::vector<Program>& stack, const State& s) {
  std::vector<const syntax::ProgramNode*> nodes;
  nodes.reserve(stack.size());
  for (const auto& p : stack) nodes.push_back(p.node());
  return {nodes, s};
}

// Solves x = b + A x for the unknowns in `active`; entries outside read as 0.
std::vector<Rational> solve(const std::vector<std::vector<std::pair<std::size_t, Rational>>>& rows,
                            const std::vector<Rational>& rhs, const std::vector<bool>& active) {
  const std::size_t n = rows.size();
  std::vector<std::size_t> index(n, n);
  std::vector<std::size_t> vars;
  for (std::size_t i = 0; i < n; ++i) {
    if (active[i]) {
      index[i] = vars.size();
      vars.push_back(i);
    }
  }
  const std::size_t m = vars.size();
  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m + 1, 0));
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t i = vars[r];
    a[r][r] += 1;
    for (const auto& [j, p] : rows[i]) {
      if (index[j] < n) a[r][index[j]] -= p;
    }
    a[r][m] = rhs[i];
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    while (piv < m && a[piv][col] == 0) ++piv;
    if (piv == m) throw std::runtime_error("oracle: singular system");
    std::swap(a[piv], a[col]);
    const Rational inv = 1 / a[col][col];
    for (std::size_t k = col; k <= m; ++k) a[col][k] *= inv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational factor = a[r][col];
      for (std::size_t k = col; k <= m; ++k) a[r][k] -= factor * a[col][k];
    }
  }
  std::vector<Rational> x(n, 0);
  for (std::size_t r = 0; r < m; ++r) x[vars[r]] = a[r][m];
  return x;
}

}  // namespace

Dist run_loopfree(const Program& c, const State& s) {
  Dist out;
  switch (c.kind()) {
    case Kind::Skip:
      out[s] = 1;
      break;
    case Kind::Assign:
      out[s.with(c.var(), value_of(c.rhs(), s))] = 1;
      break;
    case Kind::UnifAssign: {
      auto support = uniform_support(c, s);
      Rational p(1, static_cast<long>(support.size()));
      for (const auto& v : support) add(out, s.with(c.var(), v), p);
      break;
    }
    case Kind::Seq:
      for (const auto& [t, p] : run_loopfree(c.first(), s))
        for (const auto& [u, q] : run_loopfree(c.second(), t)) add(out, u, p * q);
      break;
    case Kind::Ite:
      out = run_loopfree(algebra::holds(c.guard(), s) ? c.first() : c.second(), s);
      break;
    case Kind::PChoice: {
      Rational p = value_of(c.prob(), s);
      for (const auto& [t, q] : run_loopfree(c.first(), s)) add(out, t, p * q);
      for (const auto& [t, q] : run_loopfree(c.second(), s)) add(out, t, (1 - p) * q);
      break;
    }
    case Kind::While:
      throw std::runtime_error("oracle: loop in loop-free program");
  }
  return out;
}

Rational expect(const Dist& d, const Expr& f) {
  Rational sum = 0;
  for (const auto& [s, p] : d) sum += p * value_of(f, s);
  return sum;
}

Rational cost_loopfree(const Program& c, const State& s) {
  switch (c.kind()) {
    case Kind::Skip:
    case Kind::Assign:
    case Kind::UnifAssign:
      return 1;
    case Kind::Seq: {
      Rational sum = cost_loopfree(c.first(), s);
      for (const auto& [t, p] : run_loopfree(c.first(), s)) sum += p * cost_loopfree(c.second(), t);
      return sum;
    }
    case Kind::Ite:
      return 1 + cost_loopfree(algebra::holds(c.guard(), s) ? c.first() : c.second(), s);
    case Kind::PChoice: {
      Rational p = value_of(c.prob(), s);
      return 1 + p * cost_loopfree(c.first(), s) + (1 - p) * cost_loopfree(c.second(), s);
    }
    case Kind::While:
      break;
  }
  throw std::runtime_error("oracle: loop in loop-free program");
}

Rational phi_power(const Program& loop, const Expr& f, const Expr& x, int n, const State& s) {
  if (n == 0) return value_of(x, s);
  if (!algebra::holds(loop.guard(), s)) return value_of(f, s);
  Rational sum = 0;
  for (const auto& [t, p] : run_loopfree(loop.body(), s)) sum += p * phi_power(loop, f, x, n - 1, t);
  return sum;
}

ChainResult solve_chain(const Program& c, const Expr& f, const State& s, Reward reward,
                        std::size_t max_configurations) {
  std::map<Key, std::size_t> ids;
  std::vector<std::vector<Program>> stacks;
  std::vector<State> states;
  std::deque<std::size_t> todo;
  auto intern = [&](const std::vector<Program>& stack, const State& t) {
    Key k = key_of(stack, t);
    auto it = ids.find(k);
    if (it != ids.end()) return it->second;
    if (stacks.size() >= max_configurations) throw std::runtime_error("oracle: chain too large");
    const std::size_t id = stacks.size();
    ids.emplace(std::move(k), id);
    stacks.push_back(stack);
    states.push_back(t);
    todo.push_back(id);
    return id;
  };
  intern({c}, s);

  std::vector<std::vector<std::pair<std::size_t, Rational>>> rows;
  std::vector<int> costs;
  while (!todo.empty()) {
    const std::size_t id = todo.front();
    todo.pop_front();
    if (rows.size() <= id) {
      rows.resize(id + 1);
      costs.resize(id + 1, 0);
    }
    if (stacks[id].empty()) continue;
    std::vector<Successor> succ;
    costs[id] = step(stacks[id], states[id], succ);
    for (const auto& nx : succ) {
      if (nx.prob == 0) continue;
      const std::size_t j = intern(nx.stack, nx.state);
      rows[id].emplace_back(j, nx.prob);
    }
  }
  const std::size_t n = stacks.size();
  rows.resize(n);
  costs.resize(n, 0);

  // Backward reachability of termination.
  std::vector<std::vector<std::size_t>> preds(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [j, p] : rows[i]) preds[j].push_back(i);
  std::vector<bool> reaches(n, false);
  std::deque<std::size_t> q;
  for (std::size_t i = 0; i < n; ++i) {
    if (stacks[i].empty()) {
      reaches[i] = true;
      q.push_back(i);
    }
  }
  while (!q.empty()) {
    const std::size_t j = q.front();
    q.pop_front();
    for (std::size_t i : preds[j]) {
      if (!reaches[i]) {
        reaches[i] = true;
        q.push_back(i);
      }
    }
  }

  std::vector<bool> active(n, false);
  std::vector<Rational> rhs(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!reaches[i]) continue;
    active[i] = true;
    if (stacks[i].empty()) {
      rhs[i] = value_of(f, states[i]);
    } else if (reward == Reward::Runtime) {
      rhs[i] = costs[i];
    }
  }

  ChainResult out;
  out.configurations = n;
  if (reward == Reward::Runtime) {
    std::vector<Rational> one(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      if (stacks[i].empty()) one[i] = 1;
    auto term = solve(rows, one, active);
    if (!reaches[0] || term[0] != 1) {
      out.infinite = true;
      return out;
    }
  }
  out.value = solve(rows, rhs, active)[0];
  return out;
}

}  // namespace probcert::oracle
