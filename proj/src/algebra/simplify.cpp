// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "probcert/algebra/eval.hpp"
#include "probcert/syntax/printer.hpp"

namespace probcert::algebra {

namespace {

using Kind = Expr::Kind;
using PK = Pred::Kind;

constexpr std::size_t kMaxTerms = 64;

bool has_infinity(const Expr& e);

bool has_infinity(const Pred& p) {
  switch (p.kind()) {
    case PK::True:
    case PK::False:
      return false;
    case PK::Not:
      return has_infinity(p.operand());
    case PK::And:
    case PK::Or:
      return has_infinity(p.lhs()) || has_infinity(p.rhs());
    case PK::Even:
    case PK::Odd:
      return has_infinity(p.lhs_expr());
    default:
      return has_infinity(p.lhs_expr()) || has_infinity(p.rhs_expr());
  }
}

bool has_infinity(const Expr& e) {
  switch (e.kind()) {
    case Kind::Infinity:
      return true;
    case Kind::Literal:
    case Kind::Var:
      return false;
    case Kind::Iverson:
      return has_infinity(e.predicate());
    case Kind::Neg:
    case Kind::Abs:
    case Kind::Harm:
      return has_infinity(e.operand());
    default:
      return has_infinity(e.lhs()) || has_infinity(e.rhs());
  }
}

std::optional<Expr> fold_closed(const Expr& e) {
  if (!syntax::free_variables(e).empty()) return std::nullopt;
  try {
    ExtReal v = eval_signed(e, State{});
    if (v.is_exact()) return Expr::literal(v.rational());
    if (v.is_infinite()) return Expr::infinity();
  } catch (const Error&) {
  }
  return std::nullopt;
}

PK complement_kind(PK k) {
  switch (k) {
    case PK::Lt: return PK::Ge;
    case PK::Le: return PK::Gt;
    case PK::Gt: return PK::Le;
    case PK::Ge: return PK::Lt;
    case PK::Eq: return PK::Ne;
    case PK::Ne: return PK::Eq;
    case PK::Even: return PK::Odd;
    case PK::Odd: return PK::Even;
    default: return k;
  }
}

std::optional<Pred> complement(const Pred& p) {
  switch (p.kind()) {
    case PK::True: return Pred::constant(false);
    case PK::False: return Pred::constant(true);
    case PK::Not: return p.operand();
    case PK::And:
    case PK::Or: return std::nullopt;
    case PK::Even:
    case PK::Odd: return Pred::parity(complement_kind(p.kind()), p.lhs_expr());
    default: return Pred::compare(complement_kind(p.kind()), p.lhs_expr(), p.rhs_expr());
  }
}

// Sparse polynomial over opaque atoms; atoms are keyed by their printed form.
class Poly {
 public:
  using Monomial = std::vector<std::string>;

  static Poly constant(const Rational& q) {
    Poly p;
    if (q != 0) p.terms_[{}] = q;
    return p;
  }
  static Poly atom(const Expr& e) {
    Poly p;
    std::string key = syntax::to_string(e);
    p.atoms_.emplace(key, e);
    p.terms_[{key}] = 1;
    return p;
  }

  std::size_t size() const { return terms_.size(); }
  Rational constant_term() const {
    auto it = terms_.find({});
    return it == terms_.end() ? Rational(0) : it->second;
  }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  const Expr& atom_expr(const std::string& key) const { return atoms_.at(key); }

  Poly operator+(const Poly& o) const {
    Poly r = *this;
    r.atoms_.insert(o.atoms_.begin(), o.atoms_.end());
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
  }
  Poly scaled(const Rational& k) const {
    Poly r;
    if (k == 0) return r;
    r.atoms_ = atoms_;
    for (const auto& [m, c] : terms_) r.terms_[m] = c * k;
    return r;
  }
  Poly operator*(const Poly& o) const {
    Poly r;
    r.atoms_ = atoms_;
    r.atoms_.insert(o.atoms_.begin(), o.atoms_.end());
    for (const auto& [m1, c1] : terms_) {
      for (const auto& [m2, c2] : o.terms_) {
        if (auto m = r.multiply(m1, m2)) r.add_term(*m, c1 * c2);
      }
    }
    return r;
  }

  // c1*M*[p] + c2*M*[not p] = c1*M + (c2 - c1)*M*[not p], eliminating the smaller coefficient.
  void merge_complements() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [m1, c1] : terms_) {
        for (std::size_t i = 0; i < m1.size() && !changed; ++i) {
          auto comp = complement_key(m1[i]);
          if (!comp) continue;
          Monomial m2 = m1;
          m2[i] = comp->first;
          std::sort(m2.begin(), m2.end());
          auto it = terms_.find(m2);
          if (it == terms_.end()) continue;
          Rational c2 = it->second;
          if (c1 > c2 || (c1 == c2 && m1 > m2)) continue;
          Monomial rest = m1;
          rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
          atoms_.emplace(comp->first, comp->second);
          Monomial drop = m1;
          Rational low = c1;
          terms_.erase(drop);
          terms_.erase(m2);
          add_term(rest, low);
          add_term(m2, c2 - low);
          changed = true;
        }
        if (changed) break;
      }
    }
  }

  Expr to_expr() const {
    std::optional<Expr> out;
    auto push = [&](const Expr& term, bool negative) {
      if (!out) {
        out = negative ? Expr::unary(Kind::Neg, term) : term;
      } else {
        out = negative ? Expr::binary(Kind::Sub, *out, term) : *out + term;
      }
    };
    Rational k = constant_term();
    if (k != 0) push(Expr::literal(abs(k)), k < 0);
    for (const auto& [m, c] : terms_) {
      if (m.empty()) continue;
      std::optional<Expr> product;
      Rational mag = abs(c);
      if (mag != 1) product = Expr::literal(mag);
      for (const auto& key : m) {
        const Expr& a = atoms_.at(key);
        product = product ? *product * a : a;
      }
      push(*product, c < 0);
    }
    return out ? *out : Expr::literal(0);
  }

 private:
  void add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    Rational& slot = terms_[m];
    slot += c;
    if (slot == 0) terms_.erase(m);
  }

  std::optional<std::pair<std::string, Expr>> complement_key(const std::string& key) const {
    const Expr& a = atoms_.at(key);
    if (a.kind() != Kind::Iverson) return std::nullopt;
    auto comp = complement(a.predicate());
    if (!comp) return std::nullopt;
    Expr e = Expr::iverson(*comp);
    return std::make_pair(syntax::to_string(e), e);
  }

  // Iverson atoms are idempotent and complementary ones annihilate.
  std::optional<Monomial> multiply(const Monomial& a, const Monomial& b) const {
    Monomial out = a;
    for (const auto& key : b) {
      if (atoms_.at(key).kind() == Kind::Iverson) {
        if (std::find(out.begin(), out.end(), key) != out.end()) continue;
        auto comp = complement_key(key);
        if (comp && std::find(out.begin(), out.end(), comp->first) != out.end())
          return std::nullopt;
      }
      out.push_back(key);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::map<Monomial, Rational> terms_;
  std::map<std::string, Expr> atoms_;
};

Expr simplify_atomic(const Expr& f);

std::optional<Poly> to_poly(const Expr& e) {
  switch (e.kind()) {
    case Kind::Literal:
      return Poly::constant(e.value());
    case Kind::Add:
    case Kind::Sub: {
      auto a = to_poly(e.lhs());
      auto b = to_poly(e.rhs());
      if (!a || !b) return std::nullopt;
      Poly r = e.kind() == Kind::Add ? *a + *b : *a + b->scaled(-1);
      if (r.size() > kMaxTerms) return std::nullopt;
      return r;
    }
    case Kind::Neg: {
      auto a = to_poly(e.operand());
      if (!a) return std::nullopt;
      return a->scaled(-1);
    }
    case Kind::Mul: {
      auto a = to_poly(e.lhs());
      auto b = to_poly(e.rhs());
      if (!a || !b) return std::nullopt;
      if (a->size() * b->size() > kMaxTerms) return Poly::atom(simplify_atomic(e));
      return *a * *b;
    }
    case Kind::Div: {
      Expr d = simplify(e.rhs());
      if (d.kind() == Kind::Literal && d.value() != 0) {
        auto a = to_poly(e.lhs());
        if (!a) return std::nullopt;
        return a->scaled(1 / d.value());
      }
      break;
    }
    default:
      break;
  }
  Expr s = simplify_atomic(e);
  if (s.kind() == Kind::Literal) return Poly::constant(s.value());
  if (s.kind() == Kind::Infinity) return std::nullopt;
  return Poly::atom(s);
}

Expr simplify_atomic(const Expr& f) {
  switch (f.kind()) {
    case Kind::Literal:
    case Kind::Infinity:
    case Kind::Var:
      return f;
    case Kind::Iverson: {
      Pred p = simplify(f.predicate());
      if (p.kind() == PK::True) return Expr::literal(1);
      if (p.kind() == PK::False) return Expr::literal(0);
      return Expr::iverson(p);
    }
    case Kind::Neg:
    case Kind::Abs:
    case Kind::Harm: {
      Expr r = Expr::unary(f.kind(), simplify(f.operand()));
      if (auto folded = fold_closed(r)) return *folded;
      return r;
    }
    default:
      break;
  }
  Expr a = simplify(f.lhs());
  Expr b = simplify(f.rhs());
  Expr r = Expr::binary(f.kind(), a, b);
  if (auto folded = fold_closed(r)) return *folded;
  switch (f.kind()) {
    case Kind::Div:
      if (b.is_literal(1)) return a;
      break;
    case Kind::Pow:
      if (b.is_literal(1)) return a;
      if (b.is_literal(0)) return Expr::literal(1);
      break;
    default:
      break;
  }
  return r;
}

// a*x + c  (op)  0  becomes  x (op') -c/a.
std::optional<Pred> solve_linear(PK kind, const Poly& diff) {
  std::optional<std::pair<std::string, Rational>> linear;
  for (const auto& [m, c] : diff.terms()) {
    if (m.empty()) continue;
    if (m.size() != 1 || linear) return std::nullopt;
    if (diff.atom_expr(m[0]).kind() != Kind::Var) return std::nullopt;
    linear = std::make_pair(m[0], c);
  }
  if (!linear) return std::nullopt;
  const auto& [key, a] = *linear;
  Rational rhs = -diff.constant_term() / a;
  PK k = kind;
  if (a < 0) {
    switch (kind) {
      case PK::Lt: k = PK::Gt; break;
      case PK::Le: k = PK::Ge; break;
      case PK::Gt: k = PK::Lt; break;
      case PK::Ge: k = PK::Le; break;
      default: break;
    }
  }
  return Pred::compare(k, diff.atom_expr(key), Expr::literal(rhs));
}

}  // namespace

Expr simplify(const Expr& f) {
  switch (f.kind()) {
    case Kind::Add:
    case Kind::Sub:
    case Kind::Neg:
    case Kind::Mul:
    case Kind::Div:
      break;
    default:
      return simplify_atomic(f);
  }
  if (has_infinity(f)) return simplify_atomic(f);
  auto p = to_poly(f);
  if (!p) return simplify_atomic(f);
  p->merge_complements();
  return p->to_expr();
}

Pred simplify(const Pred& p) {
  switch (p.kind()) {
    case PK::True:
    case PK::False:
      return p;
    case PK::Not: {
      Pred a = simplify(p.operand());
      if (a.kind() == PK::True || a.kind() == PK::False)
        return Pred::constant(a.kind() == PK::False);
      if (auto c = complement(a); c && a.kind() != PK::Not) return *c;
      return Pred::negate(a);
    }
    case PK::And: {
      Pred a = simplify(p.lhs());
      Pred b = simplify(p.rhs());
      if (a.kind() == PK::False || b.kind() == PK::False) return Pred::constant(false);
      if (a.kind() == PK::True) return b;
      if (b.kind() == PK::True) return a;
      return Pred::conj(a, b);
    }
    case PK::Or: {
      Pred a = simplify(p.lhs());
      Pred b = simplify(p.rhs());
      if (a.kind() == PK::True || b.kind() == PK::True) return Pred::constant(true);
      if (a.kind() == PK::False) return b;
      if (b.kind() == PK::False) return a;
      return Pred::disj(a, b);
    }
    case PK::Even:
    case PK::Odd: {
      Pred r = Pred::parity(p.kind(), simplify(p.lhs_expr()));
      if (syntax::free_variables(r).empty()) {
        try {
          return Pred::constant(holds(r, State{}));
        } catch (const Error&) {
        }
      }
      return r;
    }
    default: {
      Expr lhs = simplify(p.lhs_expr());
      Expr rhs = simplify(p.rhs_expr());
      Pred r = Pred::compare(p.kind(), lhs, rhs);
      if (syntax::free_variables(r).empty()) {
        try {
          return Pred::constant(holds(r, State{}));
        } catch (const Error&) {
        }
        return r;
      }
      if (!has_infinity(lhs) && !has_infinity(rhs)) {
        auto diff = to_poly(Expr::binary(Kind::Sub, lhs, rhs));
        if (diff) {
          if (auto solved = solve_linear(p.kind(), *diff)) return *solved;
        }
      }
      return r;
    }
  }
}

}  // namespace probcert::algebra
