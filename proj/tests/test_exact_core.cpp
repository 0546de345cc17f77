#include "doctest.h"
#include "kt/rational.hpp"
#include "kt/cx.hpp"
#include "kt/qmatrix.hpp"

using namespace kt;

TEST_CASE("rational normalization and arithmetic") {
    Rational a(2, 4), b(1, 2);
    CHECK(a == b);
    CHECK((a + b) == Rational(1));
    CHECK((a * Rational(-3, 5)) == Rational(-3, 10));
    CHECK((Rational(7, 3) / Rational(7, 3)) == Rational(1));
    CHECK(Rational(-4, -8) == Rational(1, 2));
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
    CHECK_THROWS_AS(Rational(1, 3) / Rational(0), std::domain_error);
}

TEST_CASE("rational decimal parsing") {
    CHECK(Rational::fromDecimalString("0.25") == Rational(1, 4));
    CHECK(Rational::fromDecimalString("-1.5") == Rational(-3, 2));
    CHECK(Rational::fromDecimalString("3/4") == Rational(3, 4));
    CHECK(Rational::fromDecimalString("7") == Rational(7));
}

TEST_CASE("rational overflow detection") {
    Rational big(INT64_MAX / 2, 1);
    CHECK_THROWS_AS(big * big, std::overflow_error);
}

TEST_CASE("complex rational field ops") {
    CQ z = cqi() * cqi();
    CHECK(z == cq(-1));
    CQ w = (cq(1) + cqi()) / (cq(1) - cqi());
    CHECK(w == cqi());
    CHECK(conjOf(cq(2, 3) + cqi()) == (cq(2, 3) - cqi()));
}

TEST_CASE("exact matrix inverse and solve") {
    Mat<CQ> m(2, 2);
    m(0, 0) = cq(1); m(0, 1) = cqi();
    m(1, 0) = cq(2); m(1, 1) = cq(1);
    Mat<CQ> inv = m.inverse();
    Mat<CQ> prod = m * inv;
    CHECK(prod(0, 0) == cq(1));
    CHECK(prod(0, 1) == cq(0));
    CHECK(prod(1, 1) == cq(1));

    std::vector<CQ> b = {cq(3), cq(1)};
    auto x = m.solve(b);
    // verify residual exactly
    CHECK((m(0, 0) * x[0] + m(0, 1) * x[1]) == b[0]);
    CHECK((m(1, 0) * x[0] + m(1, 1) * x[1]) == b[1]);
}

TEST_CASE("rational matrix rank and nullspace") {
    Mat<Rational> m(3, 4);
    // rows: r2 = 2*r1, r3 independent
    m(0, 0) = Rational(1); m(0, 1) = Rational(2); m(0, 2) = Rational(0); m(0, 3) = Rational(1);
    m(1, 0) = Rational(2); m(1, 1) = Rational(4); m(1, 2) = Rational(0); m(1, 3) = Rational(2);
    m(2, 0) = Rational(0); m(2, 1) = Rational(0); m(2, 2) = Rational(1); m(2, 3) = Rational(-1);
    CHECK(m.rank() == 2);
    Mat<Rational> ns = m.nullspace();
    CHECK(ns.cols() == 2);
    // every nullspace column is annihilated
    for (std::size_t k = 0; k < ns.cols(); ++k)
        for (std::size_t i = 0; i < 3; ++i) {
            Rational acc;
            for (std::size_t j = 0; j < 4; ++j) acc += m(i, j) * ns(j, k);
            CHECK(acc.isZero());
        }
}
