#include "kt/expression.hpp"
#include <cmath>
#include <random>

namespace kt {

struct Expression::Node {
    enum class Kind { Number, ImagUnit, Pi, Coord, Param, Add, Sub, Mul, Div, Pow, Neg, Call };
    Kind kind;
    double value = 0.0;              // Number
    Rational exact;                  // Number, when exactly representable
    bool exactOk = false;
    int coord = 0;                   // Coord: 0..3
    std::string name;                // Param or Call function name
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

struct Token {
    enum class Type { Number, Ident, Op, End };
    Type type;
    std::string text;
    std::size_t pos;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }
    const Token& peek() const { return tok_; }
    Token take() { Token t = tok_; advance(); return t; }

private:
    void advance() {
        while (i_ < s_.size() && std::isspace((unsigned char)s_[i_])) ++i_;
        tok_.pos = i_;
        if (i_ >= s_.size()) { tok_.type = Token::Type::End; tok_.text.clear(); return; }
        char c = s_[i_];
        if (std::isdigit((unsigned char)c) || c == '.') {
            std::size_t j = i_;
            while (j < s_.size() && (std::isdigit((unsigned char)s_[j]) || s_[j] == '.')) ++j;
            tok_.type = Token::Type::Number;
            tok_.text = s_.substr(i_, j - i_);
            i_ = j;
            return;
        }
        if (std::isalpha((unsigned char)c) || c == '_') {
            std::size_t j = i_;
            while (j < s_.size() && (std::isalnum((unsigned char)s_[j]) || s_[j] == '_')) ++j;
            tok_.type = Token::Type::Ident;
            tok_.text = s_.substr(i_, j - i_);
            i_ = j;
            return;
        }
        tok_.type = Token::Type::Op;
        tok_.text = std::string(1, c);
        ++i_;
    }

    std::string s_;
    std::size_t i_ = 0;
    Token tok_;
};

class Parser {
public:
    Parser(const std::string& s, const std::set<std::string>& params)
        : lex_(s), params_(params) {}

    NodePtr parseAll() {
        NodePtr e = parseSum();
        if (lex_.peek().type != Token::Type::End)
            throw ExprError(lex_.peek().pos, "unexpected token '" + lex_.peek().text + "'");
        return e;
    }

private:
    Lexer lex_;
    const std::set<std::string>& params_;

    bool isOp(const char* t) const {
        return lex_.peek().type == Token::Type::Op && lex_.peek().text == t;
    }

    NodePtr mk(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
        auto n = std::make_shared<Node>();
        n->kind = k; n->a = a; n->b = b;
        return n;
    }

    NodePtr parseSum() {
        NodePtr e = parseProduct();
        while (isOp("+") || isOp("-")) {
            bool plus = isOp("+");
            lex_.take();
            NodePtr rhs = parseProduct();
            e = mk(plus ? Node::Kind::Add : Node::Kind::Sub, e, rhs);
        }
        return e;
    }

    NodePtr parseProduct() {
        NodePtr e = parseUnary();
        while (isOp("*") || isOp("/")) {
            bool mul = isOp("*");
            lex_.take();
            NodePtr rhs = parseUnary();
            e = mk(mul ? Node::Kind::Mul : Node::Kind::Div, e, rhs);
        }
        return e;
    }

    NodePtr parseUnary() {
        if (isOp("-")) { lex_.take(); return mk(Node::Kind::Neg, parseUnary()); }
        if (isOp("+")) { lex_.take(); return parseUnary(); }
        return parsePower();
    }

    NodePtr parsePower() {
        NodePtr base = parsePrimary();
        if (isOp("^")) {
            lex_.take();
            NodePtr expo = parseUnary();   // right-associative
            return mk(Node::Kind::Pow, base, expo);
        }
        return base;
    }

    NodePtr parsePrimary() {
        Token t = lex_.peek();
        if (t.type == Token::Type::Number) {
            lex_.take();
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Number;
            try {
                n->exact = Rational::fromDecimalString(t.text);
                n->exactOk = true;
                n->value = n->exact.toDouble();
            } catch (const std::exception&) {
                throw ExprError(t.pos, "malformed number '" + t.text + "'");
            }
            return n;
        }
        if (t.type == Token::Type::Ident) {
            lex_.take();
            if (t.text == "i") return mk(Node::Kind::ImagUnit);
            if (t.text == "pi") return mk(Node::Kind::Pi);
            if (t.text.size() == 2 && t.text[0] == 'x' && t.text[1] >= '1' && t.text[1] <= '4') {
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::Coord;
                n->coord = t.text[1] - '1';
                return n;
            }
            if (t.text == "sin" || t.text == "cos" || t.text == "exp") {
                if (!isOp("("))
                    throw ExprError(lex_.peek().pos, "expected '(' after " + t.text);
                lex_.take();
                NodePtr arg = parseSum();
                if (!isOp(")"))
                    throw ExprError(lex_.peek().pos, "expected ')'");
                lex_.take();
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::Call;
                n->name = t.text;
                n->a = arg;
                return n;
            }
            if (params_.count(t.text)) {
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::Param;
                n->name = t.text;
                return n;
            }
            throw ExprError(t.pos, "unknown symbol '" + t.text + "'");
        }
        if (isOp("(")) {
            lex_.take();
            NodePtr e = parseSum();
            if (!isOp(")"))
                throw ExprError(lex_.peek().pos, "expected ')'");
            lex_.take();
            return e;
        }
        throw ExprError(t.pos, t.type == Token::Type::End
                                   ? "unexpected end of expression"
                                   : "unexpected token '" + t.text + "'");
    }
};

std::complex<double> evalNode(const Node* n, const std::array<double, 4>& x,
                              const std::map<std::string, std::complex<double>>& params) {
    using K = Node::Kind;
    switch (n->kind) {
        case K::Number: return {n->value, 0.0};
        case K::ImagUnit: return {0.0, 1.0};
        case K::Pi: return {M_PI, 0.0};
        case K::Coord: return {x[n->coord], 0.0};
        case K::Param: {
            auto it = params.find(n->name);
            if (it == params.end())
                throw std::invalid_argument("expression: unbound parameter '" + n->name + "'");
            return it->second;
        }
        case K::Add: return evalNode(n->a.get(), x, params) + evalNode(n->b.get(), x, params);
        case K::Sub: return evalNode(n->a.get(), x, params) - evalNode(n->b.get(), x, params);
        case K::Mul: return evalNode(n->a.get(), x, params) * evalNode(n->b.get(), x, params);
        case K::Div: return evalNode(n->a.get(), x, params) / evalNode(n->b.get(), x, params);
        case K::Neg: return -evalNode(n->a.get(), x, params);
        case K::Pow: {
            std::complex<double> b = evalNode(n->a.get(), x, params);
            std::complex<double> e = evalNode(n->b.get(), x, params);
            if (e.imag() == 0.0 && e.real() == std::floor(e.real()) && std::abs(e.real()) <= 64) {
                int k = (int)e.real();
                std::complex<double> r = 1.0;
                for (int j = 0; j < std::abs(k); ++j) r *= b;
                return k < 0 ? 1.0 / r : r;
            }
            return std::pow(b, e);
        }
        case K::Call: {
            std::complex<double> a = evalNode(n->a.get(), x, params);
            if (n->name == "sin") return std::sin(a);
            if (n->name == "cos") return std::cos(a);
            return std::exp(a);
        }
    }
    return {};
}

std::optional<CQ> exactNode(const Node* n, const std::map<std::string, CQ>& params) {
    using K = Node::Kind;
    switch (n->kind) {
        case K::Number:
            if (!n->exactOk) return std::nullopt;
            return CQ(n->exact);
        case K::ImagUnit: return cqi();
        case K::Pi: return std::nullopt;
        case K::Coord: return std::nullopt;
        case K::Param: {
            auto it = params.find(n->name);
            if (it == params.end()) return std::nullopt;
            return it->second;
        }
        case K::Add: case K::Sub: case K::Mul: case K::Div: {
            auto a = exactNode(n->a.get(), params);
            auto b = exactNode(n->b.get(), params);
            if (!a || !b) return std::nullopt;
            try {
                switch (n->kind) {
                    case K::Add: return *a + *b;
                    case K::Sub: return *a - *b;
                    case K::Mul: return *a * *b;
                    default: return *a / *b;
                }
            } catch (const std::exception&) { return std::nullopt; }
        }
        case K::Neg: {
            auto a = exactNode(n->a.get(), params);
            if (!a) return std::nullopt;
            return -*a;
        }
        case K::Pow: {
            auto a = exactNode(n->a.get(), params);
            auto b = exactNode(n->b.get(), params);
            if (!a || !b) return std::nullopt;
            if (!b->im.isZero() || !b->re.isInteger()) return std::nullopt;
            long long k = b->re.num();
            if (k < -16 || k > 16) return std::nullopt;
            try {
                CQ r = cq(1);
                for (long long j = 0; j < (k < 0 ? -k : k); ++j) r *= *a;
                return k < 0 ? cq(1) / r : r;
            } catch (const std::exception&) { return std::nullopt; }
        }
        case K::Call: return std::nullopt;
    }
    return std::nullopt;
}

bool coordNode(const Node* n) {
    using K = Node::Kind;
    if (n->kind == K::Coord) return true;
    if (n->a && coordNode(n->a.get())) return true;
    if (n->b && coordNode(n->b.get())) return true;
    return false;
}

} // namespace

Expression Expression::parse(const std::string& text, const std::set<std::string>& paramNames) {
    Parser p(text, paramNames);
    Expression e;
    e.root_ = p.parseAll();
    e.text_ = text;
    return e;
}

std::complex<double> Expression::eval(const std::array<double, 4>& x,
                                      const std::map<std::string, std::complex<double>>& params) const {
    if (!root_) throw std::logic_error("Expression: empty");
    return evalNode(root_.get(), x, params);
}

std::optional<CQ> Expression::tryExactEval(const std::map<std::string, CQ>& params) const {
    if (!root_) return std::nullopt;
    return exactNode(root_.get(), params);
}

bool Expression::dependsOnCoordinates() const {
    return root_ && coordNode(root_.get());
}

double Expression::quotientPeriodicityDefect(
    const std::map<std::string, std::complex<double>>& params, int samples, unsigned seed) const {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        std::array<double, 4> x = {U(rng), U(rng), U(rng), U(rng)};
        std::complex<double> base = eval(x, params);
        std::array<double, 4> deck = {x[0] + 1.0, x[1], x[2] + x[1], x[3]};
        worst = std::max(worst, std::abs(eval(deck, params) - base));
        for (int k = 1; k < 4; ++k) {
            std::array<double, 4> shifted = x;
            shifted[k] += 1.0;
            worst = std::max(worst, std::abs(eval(shifted, params) - base));
        }
    }
    return worst;
}

} // namespace kt
