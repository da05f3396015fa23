// Seeded generators of small loop-free programs, expectations, and states.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "probcert/syntax/ast.hpp"
#include "probcert/syntax/state.hpp"

namespace probcert::oracle {

class RandomPrograms {
 public:
  explicit RandomPrograms(std::uint64_t seed) : rng_(seed) {}

  /// Loop-free program over x and y; values stay nonnegative integers.
  syntax::Program program(int depth = 3);
  /// Nonnegative expectation over x and y.
  syntax::Expr expectation(int depth = 2);
  syntax::Pred predicate();
  syntax::State state();
  /// Nonnegative rational weight with small denominator.
  syntax::Rational weight();

  std::mt19937_64& engine() { return rng_; }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  syntax::Expr atom();
  syntax::Expr var();

  std::mt19937_64 rng_;
};

/// All states with x, y in 0..hi.
std::vector<syntax::State> grid(int hi);

}  // namespace probcert::oracle
