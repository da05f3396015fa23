// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "probcert/syntax/state.hpp"

#include <algorithm>
#include <functional>

#include "probcert/syntax/errors.hpp"
#include "probcert/syntax/printer.hpp"

namespace probcert::syntax {

const Rational& State::get(const std::string& var) const {
  auto it = values_.find(var);
  if (it == values_.end()) throw UnboundVariable(var);
  return it->second;
}

State State::with(const std::string& var, const Rational& value) const {
  State copy = *this;
  copy.values_[var] = value;
  return copy;
}

std::size_t State::hash() const {
  std::size_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (const auto& [name, value] : values_) {
    mix(std::hash<std::string>{}(name));
    mix(static_cast<std::size_t>(mpz_get_si(value.get_num_mpz_t())));
    mix(static_cast<std::size_t>(mpz_get_ui(value.get_den_mpz_t())));
  }
  return h;
}

std::string to_string(const State& s) {
  std::string out = "(";
  bool first = true;
  for (const auto& [name, value] : s.values()) {
    if (!first) out += ", ";
    first = false;
    out += name + "=" + to_string(value);
  }
  return out + ")";
}

StateDomain::StateDomain(std::vector<Range> ranges) : ranges_(std::move(ranges)) {
  std::sort(ranges_.begin(), ranges_.end(),
            [](const Range& a, const Range& b) { return a.var < b.var; });
  for (std::size_t i = 0; i < ranges_.size(); ++i) {
    Range& r = ranges_[i];
    if (i > 0 && ranges_[i - 1].var == r.var)
      throw DomainError("duplicate variable '" + r.var + "' in domain");
    if (r.values.empty()) throw DomainError("empty range for variable '" + r.var + "'");
    std::sort(r.values.begin(), r.values.end());
    r.values.erase(std::unique(r.values.begin(), r.values.end()), r.values.end());
  }
}

std::size_t StateDomain::size() const {
  std::size_t n = 1;
  for (const Range& r : ranges_) n *= r.values.size();
  return n;
}

State StateDomain::at(std::size_t index) const {
  State s;
  for (auto it = ranges_.rbegin(); it != ranges_.rend(); ++it) {
    const std::size_t k = it->values.size();
    s.set(it->var, it->values[index % k]);
    index /= k;
  }
  return s;
}

std::vector<State> StateDomain::states() const {
  std::vector<State> out;
  const std::size_t n = size();
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(at(i));
  return out;
}

std::set<std::string> StateDomain::variables() const {
  std::set<std::string> out;
  for (const Range& r : ranges_) out.insert(r.var);
  return out;
}

bool StateDomain::covers(const std::set<std::string>& vars) const {
  const auto mine = variables();
  return std::includes(mine.begin(), mine.end(), vars.begin(), vars.end());
}

bool StateDomain::contains(const State& s) const {
  for (const Range& r : ranges_) {
    if (!s.has(r.var)) return false;
    if (!std::binary_search(r.values.begin(), r.values.end(), s.get(r.var))) return false;
  }
  return true;
}

std::string to_string(const StateDomain& d) {
  std::string out;
  for (const auto& r : d.ranges()) {
    if (!out.empty()) out += "; ";
    out += r.var + " in " + r.text;
  }
  return out;
}

}  // namespace probcert::syntax
