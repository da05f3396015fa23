// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "probcert/syntax/ast.hpp"

namespace probcert::syntax {

/// Finite map from variable names to rationals.
class State {
 public:
  State() = default;
  State(std::initializer_list<std::pair<const std::string, Rational>> init) : values_(init) {}

  bool has(const std::string& var) const { return values_.count(var) != 0; }
  /// Throws UnboundVariable when absent.
  const Rational& get(const std::string& var) const;
  void set(const std::string& var, const Rational& value) { values_[var] = value; }
  State with(const std::string& var, const Rational& value) const;

  const std::map<std::string, Rational>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  std::size_t hash() const;

  friend bool operator==(const State& a, const State& b) { return a.values_ == b.values_; }
  friend bool operator!=(const State& a, const State& b) { return !(a == b); }
  friend bool operator<(const State& a, const State& b) { return a.values_ < b.values_; }

 private:
  std::map<std::string, Rational> values_;
};

std::string to_string(const State& s);

struct StateHash {
  std::size_t operator()(const State& s) const { return s.hash(); }
};

/// Finite Cartesian product of per-variable value sets.
class StateDomain {
 public:
  struct Range {
    std::string var;
    std::vector<Rational> values;  // sorted, distinct
    std::string text;              // as written, e.g. `0..20` or `{0,1}`
  };

  StateDomain() = default;
  /// Ranges may be given in any order; they are sorted by variable name.
  explicit StateDomain(std::vector<Range> ranges);

  const std::vector<Range>& ranges() const { return ranges_; }
  std::size_t size() const;
  /// Lexicographic by variable name, last variable varying fastest.
  State at(std::size_t index) const;
  std::vector<State> states() const;

  std::set<std::string> variables() const;
  bool covers(const std::set<std::string>& vars) const;
  /// True iff every variable constrained by this domain holds an allowed value in s.
  bool contains(const State& s) const;

 private:
  std::vector<Range> ranges_;
};

std::string to_string(const StateDomain& d);

}  // namespace probcert::syntax
