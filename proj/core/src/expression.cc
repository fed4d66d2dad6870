/*
 * Copyright 2026 The edpdiag Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "edpdiag/expression.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

#include "edpdiag/error.h"

namespace edpdiag {

using Op = Expression::Op;

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expression Run() {
    Expression expr;
    expr.source_ = std::string(src_);
    out_ = &expr;
    expr.root_ = ParseCond();
    SkipSpace();
    if (pos_ != src_.size()) Fail("unexpected trailing input");
    return expr;
  }

 private:
  [[noreturn]] void Fail(const std::string& what) const {
    throw ConfigError("rule expression '" + std::string(src_) + "': " + what +
                      " at position " + std::to_string(pos_));
  }

  void SkipSpace() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
  }

  bool Accept(std::string_view token) {
    SkipSpace();
    if (src_.substr(pos_, token.size()) != token) return false;
    // Keyword operators must not run into an identifier.
    if (std::isalpha(static_cast<unsigned char>(token.front()))) {
      const std::size_t end = pos_ + token.size();
      if (end < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[end])) ||
                                src_[end] == '_')) {
        return false;
      }
    }
    pos_ += token.size();
    return true;
  }

  void Expect(std::string_view token) {
    if (!Accept(token)) Fail("expected '" + std::string(token) + "'");
  }

  int Add(Op op, int a = -1, int b = -1, int c = -1) {
    Expression::Node node;
    node.op = op;
    node.args[0] = a;
    node.args[1] = b;
    node.args[2] = c;
    out_->nodes_.push_back(node);
    return static_cast<int>(out_->nodes_.size() - 1);
  }

  int ParseCond() {
    int cond = ParseOr();
    if (Accept("?")) {
      int then = ParseCond();
      Expect(":");
      int otherwise = ParseCond();
      return Add(Op::kCond, cond, then, otherwise);
    }
    return cond;
  }

  int ParseOr() {
    int lhs = ParseAnd();
    while (Accept("||") || Accept("or")) lhs = Add(Op::kOr, lhs, ParseAnd());
    return lhs;
  }

  int ParseAnd() {
    int lhs = ParseCmp();
    while (Accept("&&") || Accept("and")) lhs = Add(Op::kAnd, lhs, ParseCmp());
    return lhs;
  }

  int ParseCmp() {
    int lhs = ParseSum();
    // Two-character operators first.
    static constexpr std::pair<std::string_view, Op> kOps[] = {
        {"<=", Op::kLe}, {">=", Op::kGe}, {"==", Op::kEq},
        {"!=", Op::kNe}, {"<", Op::kLt},  {">", Op::kGt},
    };
    for (const auto& [token, op] : kOps) {
      if (Accept(token)) return Add(op, lhs, ParseSum());
    }
    return lhs;
  }

  int ParseSum() {
    int lhs = ParseProduct();
    for (;;) {
      if (Accept("+")) {
        lhs = Add(Op::kAdd, lhs, ParseProduct());
      } else if (Accept("-")) {
        lhs = Add(Op::kSub, lhs, ParseProduct());
      } else {
        return lhs;
      }
    }
  }

  int ParseProduct() {
    int lhs = ParseUnary();
    for (;;) {
      if (Accept("*")) {
        lhs = Add(Op::kMul, lhs, ParseUnary());
      } else if (Accept("/")) {
        lhs = Add(Op::kDiv, lhs, ParseUnary());
      } else {
        return lhs;
      }
    }
  }

  int ParseUnary() {
    if (Accept("-")) return Add(Op::kNeg, ParseUnary());
    if (Accept("+")) return ParseUnary();
    SkipSpace();
    if (src_.substr(pos_, 2) != "!=" && Accept("!")) {
      return Add(Op::kNot, ParseUnary());
    }
    if (Accept("not")) return Add(Op::kNot, ParseUnary());
    return ParsePower();
  }

  int ParsePower() {
    int base = ParsePrimary();
    if (Accept("^")) return Add(Op::kPow, base, ParseUnary());
    return base;
  }

  int ParsePrimary() {
    SkipSpace();
    if (pos_ >= src_.size()) Fail("unexpected end of input");
    const char ch = src_[pos_];
    if (ch == '(') {
      ++pos_;
      int inner = ParseCond();
      Expect(")");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      double value = 0.0;
      auto [ptr, ec] =
          std::from_chars(src_.data() + pos_, src_.data() + src_.size(), value);
      if (ec != std::errc()) Fail("malformed number");
      pos_ = static_cast<std::size_t>(ptr - src_.data());
      const int node = Add(Op::kConst);
      out_->nodes_[node].value = value;
      return node;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_' || src_[pos_] == '.')) {
        ++pos_;
      }
      std::string name(src_.substr(start, pos_ - start));
      if (Accept("(")) return ParseCall(name);
      return Variable(std::move(name));
    }
    Fail(std::string("unexpected character '") + ch + "'");
  }

  int ParseCall(const std::string& name) {
    static constexpr std::pair<std::string_view, Op> kUnary[] = {
        {"abs", Op::kAbs}, {"sqrt", Op::kSqrt},   {"exp", Op::kExp},
        {"log", Op::kLog}, {"floor", Op::kFloor}, {"ceil", Op::kCeil},
    };
    static constexpr std::pair<std::string_view, Op> kBinary[] = {
        {"min", Op::kMin}, {"max", Op::kMax}, {"pow", Op::kPow}};
    for (const auto& [fn, op] : kUnary) {
      if (name == fn) {
        int a = ParseCond();
        Expect(")");
        return Add(op, a);
      }
    }
    for (const auto& [fn, op] : kBinary) {
      if (name == fn) {
        int a = ParseCond();
        Expect(",");
        int b = ParseCond();
        Expect(")");
        return Add(op, a, b);
      }
    }
    if (name == "if") {
      int c = ParseCond();
      Expect(",");
      int a = ParseCond();
      Expect(",");
      int b = ParseCond();
      Expect(")");
      return Add(Op::kCond, c, a, b);
    }
    Fail("unknown function '" + name + "'");
  }

  int Variable(std::string name) {
    auto& ids = out_->identifiers_;
    std::size_t index = 0;
    while (index < ids.size() && ids[index] != name) ++index;
    if (index == ids.size()) ids.push_back(std::move(name));
    const int node = Add(Op::kVar);
    out_->nodes_[node].var = index;
    return node;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Expression* out_ = nullptr;
};

Expression Expression::Parse(std::string_view source) {
  return Parser(source).Run();
}

Expression::Bound Expression::Bind(const Dataset& data,
                                   bool allow_treatment) const {
  Bound bound;
  bound.nodes_ = nodes_;
  bound.root_ = root_;
  for (const auto& name : identifiers_) {
    std::size_t column = 0;
    if (name == "a_obs") {
      column = data.treatment_index();
    } else if (auto c = data.FindColumn(name)) {
      column = *c;
    } else {
      throw ConfigError("rule expression '" + source_ +
                        "' references unknown column '" + name + "'");
    }
    if (!allow_treatment && column == data.treatment_index()) {
      throw ConfigError("rule expression '" + source_ +
                        "' may not reference the treatment ('" + name +
                        "'); use an mtp rule to depend on the natural value");
    }
    bound.columns_.push_back(column);
  }
  return bound;
}

double Expression::Bound::Evaluate(const Dataset& data, std::size_t row) const {
  std::vector<double> values(columns_.size());
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    values[i] = data.at(row, columns_[i]);
  }
  return Eval(root_, values);
}

double Expression::Bound::EvaluateWith(const std::vector<double>& values) const {
  return Eval(root_, values);
}

double Expression::Bound::Eval(int index,
                               const std::vector<double>& values) const {
  const Node& n = nodes_[static_cast<std::size_t>(index)];
  auto arg = [&](int k) { return Eval(n.args[k], values); };
  switch (n.op) {
    case Op::kConst:
      return n.value;
    case Op::kVar:
      return values[n.var];
    case Op::kNeg:
      return -arg(0);
    case Op::kNot:
      return arg(0) == 0.0 ? 1.0 : 0.0;
    case Op::kAdd:
      return arg(0) + arg(1);
    case Op::kSub:
      return arg(0) - arg(1);
    case Op::kMul:
      return arg(0) * arg(1);
    case Op::kDiv:
      return arg(0) / arg(1);
    case Op::kPow:
      return std::pow(arg(0), arg(1));
    case Op::kLt:
      return arg(0) < arg(1) ? 1.0 : 0.0;
    case Op::kLe:
      return arg(0) <= arg(1) ? 1.0 : 0.0;
    case Op::kGt:
      return arg(0) > arg(1) ? 1.0 : 0.0;
    case Op::kGe:
      return arg(0) >= arg(1) ? 1.0 : 0.0;
    case Op::kEq:
      return arg(0) == arg(1) ? 1.0 : 0.0;
    case Op::kNe:
      return arg(0) != arg(1) ? 1.0 : 0.0;
    case Op::kAnd:
      return (arg(0) != 0.0 && arg(1) != 0.0) ? 1.0 : 0.0;
    case Op::kOr:
      return (arg(0) != 0.0 || arg(1) != 0.0) ? 1.0 : 0.0;
    case Op::kCond:
      return arg(0) != 0.0 ? arg(1) : arg(2);
    case Op::kMin:
      return std::fmin(arg(0), arg(1));
    case Op::kMax:
      return std::fmax(arg(0), arg(1));
    case Op::kAbs:
      return std::fabs(arg(0));
    case Op::kSqrt:
      return std::sqrt(arg(0));
    case Op::kExp:
      return std::exp(arg(0));
    case Op::kLog:
      return std::log(arg(0));
    case Op::kFloor:
      return std::floor(arg(0));
    case Op::kCeil:
      return std::ceil(arg(0));
  }
  return 0.0;
}

}  // namespace edpdiag
