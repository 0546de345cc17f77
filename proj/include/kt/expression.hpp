//==============================================================================
// expression.hpp
// Small expression language for coefficient functions on the quotient:
// rational/decimal literals, i, pi, named parameters, coordinates x1..x4,
// the operators + - * / ^ and the functions sin, cos, exp. Parsing is
// deterministic with standard precedence; syntax errors carry a character
// offset; unknown identifiers are rejected at parse time.
//==============================================================================
#pragma once

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>
#include "kt/cx.hpp"

namespace kt {

struct ExprError : std::runtime_error {
    std::size_t offset;
    ExprError(std::size_t off, const std::string& msg)
        : std::runtime_error(msg + " (offset " + std::to_string(off) + ")"), offset(off) {}
};

class Expression {
public:
    Expression() = default;

    // paramNames lists the identifiers allowed besides i, pi, x1..x4 and the
    // built-in functions
    static Expression parse(const std::string& text, const std::set<std::string>& paramNames);

    bool empty() const { return !root_; }
    const std::string& text() const { return text_; }

    std::complex<double> eval(const std::array<double, 4>& x,
                              const std::map<std::string, std::complex<double>>& params) const;

    // exact evaluation for coordinate-free expressions built from rationals,
    // i, + - * / and integer powers; empty when the expression needs doubles
    std::optional<CQ> tryExactEval(const std::map<std::string, CQ>& params) const;

    bool dependsOnCoordinates() const;

    // max deviation of the deck-transformation identities
    //   F(x1+1, x2, x3+x2, x4) = F(x), F(x + unit e_k) = F(x) for k = 2,3,4
    // sampled at `samples` quasi-random points
    double quotientPeriodicityDefect(const std::map<std::string, std::complex<double>>& params,
                                     int samples = 64, unsigned seed = 12345) const;

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

} // namespace kt
