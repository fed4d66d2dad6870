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
// Small arithmetic rule language for dynamic and modified-treatment-policy
// interventions. A rule is evaluated once per row over the row's columns.
//
//   expr    := cond
//   cond    := or [ '?' cond ':' cond ]
//   or      := and { ('||' | 'or') and }
//   and     := cmp { ('&&' | 'and') cmp }
//   cmp     := sum [ ('<' | '<=' | '>' | '>=' | '==' | '!=') sum ]
//   sum     := product { ('+' | '-') product }
//   product := unary { ('*' | '/') unary }
//   unary   := ('-' | '+' | '!' | 'not') unary | power
//   power   := primary [ '^' unary ]
//   primary := number | identifier | call | '(' expr ')'
//   call    := ('min' | 'max' | 'pow') '(' expr ',' expr ')'
//            | ('abs' | 'sqrt' | 'exp' | 'log' | 'floor' | 'ceil') '(' expr ')'
//            | 'if' '(' expr ',' expr ',' expr ')'
//
// Comparisons and logic yield 1 or 0; any nonzero value is true. Identifiers
// name dataset columns; `a_obs` is an alias for the treatment column.

#ifndef EDPDIAG_EXPRESSION_H_
#define EDPDIAG_EXPRESSION_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "edpdiag/dataset.h"

namespace edpdiag {

class Expression {
 public:
  enum class Op {
    kConst, kVar, kNeg, kNot, kAdd, kSub, kMul, kDiv, kPow,
    kLt, kLe, kGt, kGe, kEq, kNe, kAnd, kOr, kCond,
    kMin, kMax, kAbs, kSqrt, kExp, kLog, kFloor, kCeil,
  };

  struct Node {
    Op op = Op::kConst;
    double value = 0.0;     // kConst
    std::size_t var = 0;    // kVar: index into identifiers()
    int args[3] = {-1, -1, -1};
  };

  // Throws ConfigError with the offending position.
  static Expression Parse(std::string_view source);

  const std::string& source() const { return source_; }
  const std::vector<std::string>& identifiers() const { return identifiers_; }

  // Resolves identifiers to columns of `data`. Throws ConfigError for unknown
  // names, or for the treatment column when `allow_treatment` is false.
  class Bound;
  Bound Bind(const Dataset& data, bool allow_treatment) const;

 private:
  friend class Parser;
  std::string source_;
  std::vector<std::string> identifiers_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

class Expression::Bound {
 public:
  double Evaluate(const Dataset& data, std::size_t row) const;
  // Evaluate with an explicit value per bound identifier.
  double EvaluateWith(const std::vector<double>& values) const;

 private:
  friend class Expression;
  double Eval(int node, const std::vector<double>& values) const;

  std::vector<Node> nodes_;
  std::vector<std::size_t> columns_;  // identifier -> dataset column
  int root_ = -1;
};

}  // namespace edpdiag

#endif  // EDPDIAG_EXPRESSION_H_
