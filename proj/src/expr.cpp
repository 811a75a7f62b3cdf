// Copyright 2026 The qmsroot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmsroot/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "qmsroot/error.hpp"

namespace qmsroot {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  double run() {
    const double v = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    if (!std::isfinite(v)) fail("result is not finite");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::InvalidInput, "expression \"" + std::string(s_) + "\": " + why +
                                             " at column " + std::to_string(pos_ + 1));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  double sum() {
    double v = product();
    for (;;) {
      if (eat('+')) {
        v += product();
      } else if (eat('-')) {
        v -= product();
      } else {
        return v;
      }
    }
  }

  double product() {
    double v = unary();
    for (;;) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        v /= unary();
      } else {
        return v;
      }
    }
  }

  double unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  double power() {
    const double base = primary();
    if (eat('^')) return std::pow(base, unary());
    return base;
  }

  double primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      const double v = sum();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string_view name = s_.substr(start, pos_ - start);
      if (name == "pi") return std::numbers::pi;
      if (name == "e") return std::numbers::e;
      double (*fn)(double) = nullptr;
      if (name == "exp") fn = [](double x) { return std::exp(x); };
      if (name == "log") fn = [](double x) { return std::log(x); };
      if (name == "sqrt") fn = [](double x) { return std::sqrt(x); };
      if (!fn) {
        pos_ = start;
        fail("unknown name '" + std::string(name) + "'");
      }
      if (!eat('(')) fail("expected '(' after " + std::string(name));
      const double arg = sum();
      if (!eat(')')) fail("expected ')'");
      return fn(arg);
    }
    fail("unexpected character");
  }

  double number() {
    double v = 0.0;
    const char* begin = s_.data() + pos_;
    const char* end = s_.data() + s_.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc()) fail("bad number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

double eval_expression(std::string_view text) { return Parser(text).run(); }

}  // namespace qmsroot
