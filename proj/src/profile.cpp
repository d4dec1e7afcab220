#include "blochgap/profile.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "blochgap/error.hpp"

namespace blochgap {

namespace {

using Kind = ProfileExpression::Kind;
using Node = ProfileExpression::Node;
using NodePtr = ProfileExpression::NodePtr;

NodePtr leaf(Kind k, double v = 0.0) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->value = v;
    return n;
}

NodePtr binary(Kind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    NodePtr run() {
        auto e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r')) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= s_.size()) fail(std::string("expected '") + c + "' but reached end of input");
            fail(std::string("expected '") + c + "'");
        }
    }

    NodePtr expr() {
        auto lhs = term();
        while (true) {
            if (accept('+')) lhs = binary(Kind::Add, lhs, term());
            else if (accept('-')) lhs = binary(Kind::Sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        auto lhs = factor();
        while (accept('*')) lhs = binary(Kind::Mul, lhs, factor());
        return lhs;
    }

    NodePtr factor() {
        auto base = atom();
        if (!accept('^')) return base;
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected unsigned integer exponent");
        unsigned e = 0;
        auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, e);
        if (ec != std::errc()) {
            pos_ = start;
            fail("exponent out of range");
        }
        auto n = std::make_shared<Node>();
        n->kind = Kind::Pow;
        n->exponent = e;
        n->lhs = base;
        return n;
    }

    NodePtr atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (c == '(') {
            ++pos_;
            auto e = expr();
            expect(')');
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::string_view id = s_.substr(start, pos_ - start);
            if (id == "pi") return leaf(Kind::Pi);
            if (id == "x1") return leaf(Kind::X1);
            if (id == "x2") return leaf(Kind::X2);
            if (id == "sin" || id == "cos") {
                expect('(');
                auto arg = expr();
                expect(')');
                auto n = std::make_shared<Node>();
                n->kind = id == "sin" ? Kind::Sin : Kind::Cos;
                n->lhs = arg;
                return n;
            }
            pos_ = start;
            fail("unknown identifier '" + std::string(id) + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            } else {
                pos_ = save;
            }
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        if (ec != std::errc() || ptr != s_.data() + pos_ || !std::isfinite(v)) {
            pos_ = start;
            fail("malformed number");
        }
        return leaf(Kind::Number, v);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

double eval(const Node& n, const Point2& x) {
    switch (n.kind) {
        case Kind::Number: return n.value;
        case Kind::Pi: return std::numbers::pi;
        case Kind::X1: return x[0];
        case Kind::X2: return x[1];
        case Kind::Add: return eval(*n.lhs, x) + eval(*n.rhs, x);
        case Kind::Sub: return eval(*n.lhs, x) - eval(*n.rhs, x);
        case Kind::Mul: return eval(*n.lhs, x) * eval(*n.rhs, x);
        case Kind::Pow: {
            double b = eval(*n.lhs, x), r = 1.0;
            for (unsigned i = 0; i < n.exponent; ++i) r *= b;
            return r;
        }
        case Kind::Sin: return std::sin(eval(*n.lhs, x));
        case Kind::Cos: return std::cos(eval(*n.lhs, x));
    }
    return 0.0;
}

int precedence(Kind k) {
    switch (k) {
        case Kind::Add:
        case Kind::Sub: return 1;
        case Kind::Mul: return 2;
        case Kind::Pow: return 3;
        default: return 4;
    }
}

void print(const Node& n, std::string& out);

void print_wrapped(const Node& n, bool wrap, std::string& out) {
    if (wrap) out += '(';
    print(n, out);
    if (wrap) out += ')';
}

void print(const Node& n, std::string& out) {
    switch (n.kind) {
        case Kind::Number: {
            std::array<char, 64> buf{};
            auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), n.value);
            out.append(buf.data(), ptr);
            return;
        }
        case Kind::Pi: out += "pi"; return;
        case Kind::X1: out += "x1"; return;
        case Kind::X2: out += "x2"; return;
        case Kind::Sin:
        case Kind::Cos:
            out += n.kind == Kind::Sin ? "sin(" : "cos(";
            print(*n.lhs, out);
            out += ')';
            return;
        case Kind::Pow:
            print_wrapped(*n.lhs, precedence(n.lhs->kind) < 4, out);
            out += '^';
            out += std::to_string(n.exponent);
            return;
        case Kind::Add:
        case Kind::Sub:
        case Kind::Mul: {
            int p = precedence(n.kind);
            print_wrapped(*n.lhs, precedence(n.lhs->kind) < p, out);
            out += n.kind == Kind::Add ? "+" : n.kind == Kind::Sub ? "-" : "*";
            // Operators are left-associative; a right operand of equal precedence needs parentheses.
            print_wrapped(*n.rhs, precedence(n.rhs->kind) <= p, out);
            return;
        }
    }
}

bool same(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Kind::Number: return a.value == b.value;
        case Kind::Pi:
        case Kind::X1:
        case Kind::X2: return true;
        case Kind::Pow: return a.exponent == b.exponent && same(*a.lhs, *b.lhs);
        case Kind::Sin:
        case Kind::Cos: return same(*a.lhs, *b.lhs);
        default: return same(*a.lhs, *b.lhs) && same(*a.rhs, *b.rhs);
    }
}

bool mentions_x2(const Node& n) {
    if (n.kind == Kind::X2) return true;
    if (n.lhs && mentions_x2(*n.lhs)) return true;
    return n.rhs && mentions_x2(*n.rhs);
}

}  // namespace

ProfileExpression ProfileExpression::parse(std::string_view text) { return ProfileExpression(Parser(text).run()); }

ProfileExpression ProfileExpression::number(double v) { return ProfileExpression(leaf(Kind::Number, v)); }
ProfileExpression ProfileExpression::x1() { return ProfileExpression(leaf(Kind::X1)); }
ProfileExpression ProfileExpression::x2() { return ProfileExpression(leaf(Kind::X2)); }

ProfileExpression ProfileExpression::product(const ProfileExpression& a, const ProfileExpression& b) {
    return ProfileExpression(binary(Kind::Mul, a.root_, b.root_));
}

double ProfileExpression::evaluate(const Point2& x) const { return eval(*root_, x); }

std::string ProfileExpression::to_string() const {
    std::string out;
    print(*root_, out);
    return out;
}

bool ProfileExpression::uses_x2() const { return mentions_x2(*root_); }

bool operator==(const ProfileExpression& a, const ProfileExpression& b) { return same(*a.root_, *b.root_); }

}  // namespace blochgap
