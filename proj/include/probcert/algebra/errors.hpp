// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "probcert/syntax/errors.hpp"

namespace probcert::algebra {

class EvalError : public Error {
 public:
  enum class Kind { NegativeExpectation, UndefinedArithmetic, UnboundVariable, InvalidProbability };

  EvalError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace probcert::algebra
