#pragma once

// Scalar expression language used by problem configs.
//
//   expr     := sum
//   sum      := product (('+' | '-') product)*
//   product  := unary (('*' | '/') unary)*
//   unary    := ('-' | '+') unary | power
//   power    := primary ('^' unary)?            right associative
//   primary  := number | name | name '(' args ')' | '(' expr ')'
//
// Names: tau, x, v, sigma (variables); pi, e (constants). Functions: sin,
// cos, exp, log, abs, sqrt, gamma, mittag_leffler(alpha, z). Arguments are
// separated by ',' or ';'. piecewise(a < b : e1, c >= d : e2, ..., default)
// returns the first expression whose guard holds.

#include <cstddef>
#include <memory>
#include <string>

#include "fracimp/errors.hpp"

namespace fracimp {

class ExpressionError : public ConfigError {
public:
    ExpressionError(const std::string& message, std::size_t line, std::size_t column);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

struct Variables {
    double tau = 0.0;
    double x = 0.0;
    double v = 0.0;
    double sigma = 0.0;
};

struct ExprNode;

class Expression {
public:
    /// Throws ExpressionError on syntax errors, unknown names and arity mismatches.
    static Expression parse(const std::string& source);

    /// Throws EvaluationError on non-finite results or arguments outside a
    /// function's domain, or when no piecewise guard matches.
    double evaluate(const Variables& vars) const;

    const std::string& source() const noexcept { return source_; }

    /// True when the named variable appears in the expression.
    bool uses(const std::string& variable) const;

private:
    std::string source_;
    std::shared_ptr<const ExprNode> root_;
};

}  // namespace fracimp
