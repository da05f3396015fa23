// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "probcert/syntax/ast.hpp"

namespace probcert::syntax {

std::string to_string(const Rational& q);
std::string to_string(const Expr& e);
std::string to_string(const Pred& p);
/// Multi-line rendering with two-space indentation; parses back to an equal AST.
std::string to_string(const Program& c);

}  // namespace probcert::syntax
