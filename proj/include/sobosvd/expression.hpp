#pragma once
//
// Pointwise arithmetic expressions in x, y, z.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?          right associative
//   atom   := number | x | y | z | pi | e | name '(' expr ')' | '(' expr ')'
//   name   := abs | exp | cos | sin | sqrt | log
//

#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>

#include "error.hpp"

namespace sobosvd {

class Expression {
public:
    explicit Expression(std::string source) : src_(std::move(source)) {
        pos_ = 0;
        root_ = parse_expr();
        skip();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    }

    double operator()(double x, double y, double z = 0.0) const { return root_->eval(x, y, z); }

    const std::string& source() const noexcept { return src_; }

private:
    struct Node {
        enum class Kind { Num, Var, Neg, Add, Sub, Mul, Div, Pow, Call } kind;
        double value = 0;
        int var = 0;
        double (*fn)(double) = nullptr;
        std::shared_ptr<Node> a, b;

        double eval(double x, double y, double z) const {
            switch (kind) {
            case Kind::Num: return value;
            case Kind::Var: return var == 0 ? x : var == 1 ? y : z;
            case Kind::Neg: return -a->eval(x, y, z);
            case Kind::Add: return a->eval(x, y, z) + b->eval(x, y, z);
            case Kind::Sub: return a->eval(x, y, z) - b->eval(x, y, z);
            case Kind::Mul: return a->eval(x, y, z) * b->eval(x, y, z);
            case Kind::Div: return a->eval(x, y, z) / b->eval(x, y, z);
            case Kind::Pow: return std::pow(a->eval(x, y, z), b->eval(x, y, z));
            case Kind::Call: return fn(a->eval(x, y, z));
            }
            return 0;
        }
    };
    using Ptr = std::shared_ptr<Node>;

    static Ptr make(Node::Kind k, Ptr a = nullptr, Ptr b = nullptr) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->a = std::move(a);
        n->b = std::move(b);
        return n;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw InvalidArgument("expression '" + src_ + "' at position " + std::to_string(pos_) + ": " + msg);
    }

    void skip() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Ptr parse_expr() {
        Ptr lhs = parse_term();
        for (;;) {
            if (accept('+')) lhs = make(Node::Kind::Add, lhs, parse_term());
            else if (accept('-')) lhs = make(Node::Kind::Sub, lhs, parse_term());
            else return lhs;
        }
    }

    Ptr parse_term() {
        Ptr lhs = parse_unary();
        for (;;) {
            if (accept('*')) lhs = make(Node::Kind::Mul, lhs, parse_unary());
            else if (accept('/')) lhs = make(Node::Kind::Div, lhs, parse_unary());
            else return lhs;
        }
    }

    Ptr parse_unary() {
        if (accept('-')) return make(Node::Kind::Neg, parse_unary());
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    Ptr parse_power() {
        Ptr base = parse_atom();
        if (accept('^')) return make(Node::Kind::Pow, base, parse_unary());
        return base;
    }

    Ptr parse_atom() {
        skip();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        if (accept('(')) {
            Ptr e = parse_expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            double v = 0;
            try {
                v = std::stod(src_.substr(pos_), &used);
            } catch (const std::exception&) {
                fail("malformed number");
            }
            pos_ += used;
            auto n = make(Node::Kind::Num);
            n->value = v;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            const std::string_view name(src_.data() + start, pos_ - start);
            if (name == "x" || name == "y" || name == "z") {
                auto n = make(Node::Kind::Var);
                n->var = name[0] - 'x';
                return n;
            }
            if (name == "pi" || name == "e") {
                auto n = make(Node::Kind::Num);
                n->value = name == "pi" ? std::numbers::pi : std::numbers::e;
                return n;
            }
            double (*fn)(double) = nullptr;
            if (name == "abs") fn = [](double v) { return std::abs(v); };
            else if (name == "exp") fn = [](double v) { return std::exp(v); };
            else if (name == "cos") fn = [](double v) { return std::cos(v); };
            else if (name == "sin") fn = [](double v) { return std::sin(v); };
            else if (name == "sqrt") fn = [](double v) { return std::sqrt(v); };
            else if (name == "log") fn = [](double v) { return std::log(v); };
            else fail("unknown identifier '" + std::string(name) + "'");
            if (!accept('(')) fail("expected '(' after function name");
            auto n = make(Node::Kind::Call, parse_expr());
            n->fn = fn;
            if (!accept(')')) fail("expected ')'");
            return n;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string src_;
    std::size_t pos_ = 0;
    Ptr root_;
};

} // namespace sobosvd
