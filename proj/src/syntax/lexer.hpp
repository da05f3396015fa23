// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "probcert/syntax/ast.hpp"

namespace probcert::syntax::detail {

struct Token {
  enum class Kind { Number, Ident, Symbol, End };
  Kind kind;
  std::string text;
  Rational number;
  int line;
  int column;
};

std::vector<Token> tokenize(std::string_view text);
std::string describe(const Token& t);

}  // namespace probcert::syntax::detail
