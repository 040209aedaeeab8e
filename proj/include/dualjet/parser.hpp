// Copyright 2026 The dualjet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Recursive-descent parser for scalar fields over a chart:
//
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | factor
//   factor := base ('^' ['-'|'+'] number)?
//   base   := number | ident | '(' expr ')' | func '(' expr ')'
//   func   := sin | cos | exp | log | sqrt | neg
//   ident  := t<k> | x<k> | p<i>_<a>
//
// Numbers accept a decimal fraction and exponent (1.5e-3). Whitespace is
// insignificant.

#include <cctype>
#include <cstdlib>
#include <string>
#include <string_view>

#include "dualjet/expr.hpp"

namespace dualjet {

namespace detail {

class Parser {
 public:
  Parser(std::string_view source, const ChartSpec& chart) : src_(source), chart_(chart) {}

  Expr parse() {
    Expr e = expr();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError("syntax error: " + what, pos_); }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = lhs + term();
      else if (accept('-'))
        lhs = lhs - term();
      else
        return lhs;
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = lhs * unary();
      else if (accept('/'))
        lhs = lhs / unary();
      else
        return lhs;
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    return factor();
  }

  Expr factor() {
    Expr b = base();
    if (accept('^')) {
      double sign = 1.0;
      if (accept('-'))
        sign = -1.0;
      else
        accept('+');
      skip_space();
      if (pos_ >= src_.size() || !(std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
        fail("expected numeric exponent");
      return pow(b, sign * number());
    }
    return b;
  }

  double number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size()) {
      pos_ = start;
      fail("malformed number '" + text + "'");
    }
    return value;
  }

  Expr base() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr(number());
    if (c == '(') {
      ++pos_;
      Expr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      const std::string_view ident = src_.substr(start, pos_ - start);
      static constexpr std::pair<std::string_view, Expr (*)(Expr)> functions[] = {
          {"sin", [](Expr a) { return sin(a); }},   {"cos", [](Expr a) { return cos(a); }},
          {"exp", [](Expr a) { return exp(a); }},   {"log", [](Expr a) { return log(a); }},
          {"sqrt", [](Expr a) { return sqrt(a); }}, {"neg", [](Expr a) { return -a; }},
      };
      for (const auto& [name, apply] : functions) {
        if (ident == name) {
          expect('(');
          Expr arg = expr();
          expect(')');
          return apply(arg);
        }
      }
      if (auto v = chart_.lookup(ident)) return Expr(*v);
      throw UnknownVariableError(std::string(ident), start);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view src_;
  const ChartSpec& chart_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses `source` into an expression over `chart`.
inline Expr parse_scalar(std::string_view source, const ChartSpec& chart) {
  return detail::Parser(source, chart).parse();
}

}  // namespace dualjet
