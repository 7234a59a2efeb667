#include "fracimp/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "fracimp/special_functions.hpp"

namespace fracimp {

ExpressionError::ExpressionError(const std::string& message, std::size_t line, std::size_t column)
    : ConfigError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

enum class Op { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call, Piecewise };
enum class Cmp { Lt, Le, Gt, Ge, Eq, Ne };
enum class Fn { Sin, Cos, Exp, Log, Abs, Sqrt, Gamma, MittagLeffler };
enum class Var { Tau, X, V, Sigma };

struct Guard {
    Cmp cmp;
    std::shared_ptr<const ExprNode> lhs, rhs, value;
};

struct ExprNode {
    Op op = Op::Number;
    double number = 0.0;
    Var var = Var::Tau;
    Fn fn = Fn::Sin;
    std::vector<std::shared_ptr<const ExprNode>> args;
    std::vector<Guard> guards;
    std::shared_ptr<const ExprNode> fallback;
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

struct FnInfo {
    const char* name;
    Fn fn;
    std::size_t arity;
};

constexpr FnInfo kFunctions[] = {
    {"sin", Fn::Sin, 1},   {"cos", Fn::Cos, 1},   {"exp", Fn::Exp, 1},     {"log", Fn::Log, 1},
    {"abs", Fn::Abs, 1},   {"sqrt", Fn::Sqrt, 1}, {"gamma", Fn::Gamma, 1}, {"mittag_leffler", Fn::MittagLeffler, 2},
};

enum class Tok { Number, Name, Op, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    double number = 0.0;
    std::size_t line = 1;
    std::size_t column = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : src_(s) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            Token t;
            t.line = line_;
            t.column = col_;
            if (pos_ >= src_.size()) {
                t.kind = Tok::End;
                out.push_back(t);
                return out;
            }
            const char c = src_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && pos_ + 1 < src_.size() &&
                                                                std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
                t.kind = Tok::Number;
                const std::size_t start = pos_;
                while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
                    advance();
                if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                    std::size_t look = pos_ + 1;
                    if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
                    if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                        while (pos_ < look) advance();
                        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
                    }
                }
                t.text = src_.substr(start, pos_ - start);
                char* end = nullptr;
                t.number = std::strtod(t.text.c_str(), &end);
                if (end != t.text.c_str() + t.text.size()) {
                    throw ExpressionError("malformed number '" + t.text + "'", t.line, t.column);
                }
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                t.kind = Tok::Name;
                const std::size_t start = pos_;
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                    advance();
                t.text = src_.substr(start, pos_ - start);
            } else {
                t.kind = Tok::Op;
                static const char* two[] = {"<=", ">=", "==", "!="};
                bool matched = false;
                for (const char* op : two) {
                    if (src_.compare(pos_, 2, op) == 0) {
                        t.text = op;
                        advance();
                        advance();
                        matched = true;
                        break;
                    }
                }
                if (!matched) {
                    if (std::string("+-*/^(),;:<>").find(c) == std::string::npos) {
                        throw ExpressionError(std::string("unexpected character '") + c + "'", t.line, t.column);
                    }
                    t.text = std::string(1, c);
                    advance();
                }
            }
            out.push_back(t);
        }
    }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    NodePtr parse_all() {
        NodePtr n = sum();
        if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
        return n;
    }

private:
    const Token& peek() const { return toks_[i_]; }
    Token take() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }
    bool is_op(const char* s) const { return peek().kind == Tok::Op && peek().text == s; }
    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        throw ExpressionError(t.kind == Tok::End ? msg + " at end of input" : msg, t.line, t.column);
    }
    void expect(const char* s) {
        if (!is_op(s)) fail(std::string("expected '") + s + "'");
        take();
    }

    static NodePtr binary(Op op, NodePtr a, NodePtr b) {
        auto n = std::make_shared<ExprNode>();
        n->op = op;
        n->args = {std::move(a), std::move(b)};
        return n;
    }

    NodePtr sum() {
        NodePtr lhs = product();
        while (is_op("+") || is_op("-")) {
            const Op op = take().text == "+" ? Op::Add : Op::Sub;
            lhs = binary(op, lhs, product());
        }
        return lhs;
    }

    NodePtr product() {
        NodePtr lhs = unary();
        while (is_op("*") || is_op("/")) {
            const Op op = take().text == "*" ? Op::Mul : Op::Div;
            lhs = binary(op, lhs, unary());
        }
        return lhs;
    }

    NodePtr unary() {
        if (is_op("-")) {
            take();
            auto n = std::make_shared<ExprNode>();
            n->op = Op::Neg;
            n->args = {unary()};
            return n;
        }
        if (is_op("+")) {
            take();
            return unary();
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (is_op("^")) {
            take();
            return binary(Op::Pow, base, unary());
        }
        return base;
    }

    std::optional<Cmp> comparison() {
        if (peek().kind != Tok::Op) return std::nullopt;
        const std::string& s = peek().text;
        if (s == "<") return Cmp::Lt;
        if (s == "<=") return Cmp::Le;
        if (s == ">") return Cmp::Gt;
        if (s == ">=") return Cmp::Ge;
        if (s == "==") return Cmp::Eq;
        if (s == "!=") return Cmp::Ne;
        return std::nullopt;
    }

    bool separator() const { return is_op(",") || is_op(";"); }

    NodePtr piecewise(const Token& name) {
        auto n = std::make_shared<ExprNode>();
        n->op = Op::Piecewise;
        expect("(");
        while (true) {
            NodePtr lhs = sum();
            if (auto cmp = comparison()) {
                take();
                NodePtr rhs = sum();
                expect(":");
                NodePtr value = sum();
                if (n->fallback) fail("piecewise default must be the last argument");
                n->guards.push_back({*cmp, lhs, rhs, value});
            } else if (is_op(":")) {
                fail("piecewise guard needs a comparison before ':'");
            } else {
                if (n->fallback) fail("piecewise accepts a single default");
                n->fallback = lhs;
            }
            if (separator()) {
                take();
                continue;
            }
            break;
        }
        if (!is_op(")")) fail("expected ')' to close piecewise");
        take();
        if (n->guards.empty()) {
            throw ExpressionError("piecewise needs at least one guarded branch", name.line, name.column);
        }
        return n;
    }

    NodePtr primary() {
        const Token t = peek();
        if (t.kind == Tok::Number) {
            take();
            auto n = std::make_shared<ExprNode>();
            n->op = Op::Number;
            n->number = t.number;
            return n;
        }
        if (is_op("(")) {
            take();
            NodePtr inner = sum();
            expect(")");
            return inner;
        }
        if (t.kind != Tok::Name) fail(t.kind == Tok::End ? "expected an operand" : "unexpected '" + t.text + "'");
        take();
        if (t.text == "piecewise") {
            return piecewise(t);
        }
        if (is_op("(")) {
            const FnInfo* info = nullptr;
            for (const auto& f : kFunctions) {
                if (t.text == f.name) info = &f;
            }
            if (!info) throw ExpressionError("unknown function '" + t.text + "'", t.line, t.column);
            take();
            auto n = std::make_shared<ExprNode>();
            n->op = Op::Call;
            n->fn = info->fn;
            if (!is_op(")")) {
                n->args.push_back(sum());
                while (separator()) {
                    take();
                    n->args.push_back(sum());
                }
            }
            expect(")");
            if (n->args.size() != info->arity) {
                throw ExpressionError(t.text + " expects " + std::to_string(info->arity) + " argument" +
                                          (info->arity == 1 ? "" : "s") + ", got " + std::to_string(n->args.size()),
                                      t.line, t.column);
            }
            return n;
        }
        auto n = std::make_shared<ExprNode>();
        if (t.text == "pi" || t.text == "e") {
            n->op = Op::Number;
            n->number = t.text == "pi" ? std::numbers::pi : std::numbers::e;
            return n;
        }
        n->op = Op::Var;
        if (t.text == "tau") n->var = Var::Tau;
        else if (t.text == "x") n->var = Var::X;
        else if (t.text == "v") n->var = Var::V;
        else if (t.text == "sigma") n->var = Var::Sigma;
        else throw ExpressionError("unknown identifier '" + t.text + "'", t.line, t.column);
        return n;
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
};

[[noreturn]] void eval_fail(const std::string& what) { throw EvaluationError("expression: " + what); }

double checked(double v, const char* what) {
    if (!std::isfinite(v)) eval_fail(std::string(what) + " produced a non-finite value");
    return v;
}

double eval(const ExprNode& n, const Variables& vars) {
    switch (n.op) {
        case Op::Number: return n.number;
        case Op::Var:
            switch (n.var) {
                case Var::Tau: return vars.tau;
                case Var::X: return vars.x;
                case Var::V: return vars.v;
                case Var::Sigma: return vars.sigma;
            }
            return 0.0;
        case Op::Neg: return -eval(*n.args[0], vars);
        case Op::Add: return checked(eval(*n.args[0], vars) + eval(*n.args[1], vars), "'+'");
        case Op::Sub: return checked(eval(*n.args[0], vars) - eval(*n.args[1], vars), "'-'");
        case Op::Mul: return checked(eval(*n.args[0], vars) * eval(*n.args[1], vars), "'*'");
        case Op::Div: {
            const double d = eval(*n.args[1], vars);
            if (d == 0.0) eval_fail("division by zero");
            return checked(eval(*n.args[0], vars) / d, "'/'");
        }
        case Op::Pow: return checked(std::pow(eval(*n.args[0], vars), eval(*n.args[1], vars)), "'^'");
        case Op::Call: {
            const double a = eval(*n.args[0], vars);
            switch (n.fn) {
                case Fn::Sin: return std::sin(a);
                case Fn::Cos: return std::cos(a);
                case Fn::Exp: return checked(std::exp(a), "exp");
                case Fn::Log: return checked(std::log(a), "log");
                case Fn::Abs: return std::abs(a);
                case Fn::Sqrt: return checked(std::sqrt(a), "sqrt");
                case Fn::Gamma:
                    try {
                        return gamma_fn(a);
                    } catch (const std::exception& e) {
                        eval_fail(e.what());
                    }
                case Fn::MittagLeffler:
                    try {
                        return mittag_leffler(a, eval(*n.args[1], vars));
                    } catch (const std::exception& e) {
                        eval_fail(e.what());
                    }
            }
            return 0.0;
        }
        case Op::Piecewise: {
            for (const auto& g : n.guards) {
                const double l = eval(*g.lhs, vars);
                const double r = eval(*g.rhs, vars);
                bool hit = false;
                switch (g.cmp) {
                    case Cmp::Lt: hit = l < r; break;
                    case Cmp::Le: hit = l <= r; break;
                    case Cmp::Gt: hit = l > r; break;
                    case Cmp::Ge: hit = l >= r; break;
                    case Cmp::Eq: hit = l == r; break;
                    case Cmp::Ne: hit = l != r; break;
                }
                if (hit) return eval(*g.value, vars);
            }
            if (n.fallback) return eval(*n.fallback, vars);
            eval_fail("no piecewise guard holds");
        }
    }
    return 0.0;
}

bool uses_var(const ExprNode& n, Var v) {
    if (n.op == Op::Var) return n.var == v;
    for (const auto& a : n.args)
        if (uses_var(*a, v)) return true;
    for (const auto& g : n.guards)
        if (uses_var(*g.lhs, v) || uses_var(*g.rhs, v) || uses_var(*g.value, v)) return true;
    return n.fallback && uses_var(*n.fallback, v);
}

}  // namespace

Expression Expression::parse(const std::string& source) {
    Expression e;
    e.source_ = source;
    e.root_ = Parser(Lexer(source).run()).parse_all();
    return e;
}

double Expression::evaluate(const Variables& vars) const { return checked(eval(*root_, vars), "expression"); }

bool Expression::uses(const std::string& variable) const {
    if (variable == "tau") return uses_var(*root_, Var::Tau);
    if (variable == "x") return uses_var(*root_, Var::X);
    if (variable == "v") return uses_var(*root_, Var::V);
    if (variable == "sigma") return uses_var(*root_, Var::Sigma);
    return false;
}

}  // namespace fracimp
