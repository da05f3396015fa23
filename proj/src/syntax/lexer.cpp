// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "lexer.hpp"

#include <array>
#include <cctype>

#include "probcert/syntax/errors.hpp"

namespace probcert::syntax::detail {

namespace {

constexpr std::array<std::string_view, 8> kTwoCharSymbols = {":=", "..", "<=", ">=",
                                                             "==", "!=", "&&", "||"};
constexpr std::string_view kOneCharSymbols = ";{}()[],+-*/^<>=!";

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  int col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok{Token::Kind::Symbol, "", 0, line, col};
    if (is_digit(c)) {
      std::size_t j = i;
      while (j < text.size() && is_digit(text[j])) ++j;
      std::string digits(text.substr(i, j - i));
      std::string frac;
      if (j + 1 < text.size() && text[j] == '.' && is_digit(text[j + 1])) {
        std::size_t k = j + 1;
        while (k < text.size() && is_digit(text[k])) ++k;
        frac = std::string(text.substr(j + 1, k - j - 1));
        j = k;
      }
      tok.kind = Token::Kind::Number;
      tok.text = std::string(text.substr(i, j - i));
      mpz_class num(digits + frac, 10);
      mpz_class den = 1;
      for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
      tok.number = Rational(num, den);
      tok.number.canonicalize();
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      tok.kind = Token::Kind::Ident;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    bool matched = false;
    if (i + 1 < text.size()) {
      for (std::string_view sym : kTwoCharSymbols) {
        if (text.substr(i, 2) == sym) {
          tok.text = std::string(sym);
          advance(2);
          matched = true;
          break;
        }
      }
    }
    if (!matched && kOneCharSymbols.find(c) != std::string_view::npos) {
      tok.text = std::string(1, c);
      advance(1);
      matched = true;
    }
    if (!matched) throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    out.push_back(std::move(tok));
  }
  out.push_back(Token{Token::Kind::End, "", 0, line, col});
  return out;
}

std::string describe(const Token& t) {
  if (t.kind == Token::Kind::End) return "end of input";
  return "'" + t.text + "'";
}

}  // namespace probcert::syntax::detail
