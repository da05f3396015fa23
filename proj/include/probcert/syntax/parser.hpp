// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

#include "probcert/syntax/ast.hpp"
#include "probcert/syntax/errors.hpp"
#include "probcert/syntax/state.hpp"

namespace probcert::syntax {

Program parse_program(std::string_view text);
Expr parse_expectation(std::string_view text);
Pred parse_predicate(std::string_view text);
/// `a in {0,1}; b in 0..20`. Empty text yields the single empty state.
StateDomain parse_domain(std::string_view text);
/// `a=1, b=0` (commas or semicolons).
State parse_state(std::string_view text);

}  // namespace probcert::syntax
