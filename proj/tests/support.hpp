// Shared helpers for the test binaries.
#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "probcert/syntax/parser.hpp"

namespace probcert::test {

inline std::string fixture(const std::string& rel) { return std::string(PROBCERT_FIXTURES) + "/" + rel; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline syntax::Program program(const std::string& name) {
  return syntax::parse_program(slurp(fixture("programs/" + name + ".pgcl")));
}

inline syntax::Expr ex(const std::string& text) { return syntax::parse_expectation(text); }
inline syntax::State st(const std::string& text) { return syntax::parse_state(text); }

}  // namespace probcert::test
