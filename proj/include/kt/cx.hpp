//==============================================================================
// cx.hpp
// Minimal complex-over-a-field template so the same exterior algebra and
// Hodge star code can run over exact rationals (Cx<Rational>) and over
// doubles (std::complex<double>). Field operations used by the generic code
// are routed through the small trait functions at the bottom.
//==============================================================================
#pragma once

#include <complex>
#include <string>
#include "kt/rational.hpp"

namespace kt {

template <class T>
struct Cx {
    T re{}, im{};

    Cx() = default;
    Cx(T r) : re(std::move(r)) {}
    Cx(T r, T i) : re(std::move(r)), im(std::move(i)) {}

    bool isZero() const { return re.isZero() && im.isZero(); }

    Cx operator-() const { return Cx(-re, -im); }

    friend Cx operator+(const Cx& a, const Cx& b) { return Cx(a.re + b.re, a.im + b.im); }
    friend Cx operator-(const Cx& a, const Cx& b) { return Cx(a.re - b.re, a.im - b.im); }
    friend Cx operator*(const Cx& a, const Cx& b) {
        return Cx(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend Cx operator/(const Cx& a, const Cx& b) {
        T n = b.re * b.re + b.im * b.im;
        if (n.isZero()) throw std::domain_error("Cx: division by zero");
        return Cx((a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n);
    }

    Cx& operator+=(const Cx& o) { return *this = *this + o; }
    Cx& operator-=(const Cx& o) { return *this = *this - o; }
    Cx& operator*=(const Cx& o) { return *this = *this * o; }
    Cx& operator/=(const Cx& o) { return *this = *this / o; }

    friend bool operator==(const Cx& a, const Cx& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Cx& a, const Cx& b) { return !(a == b); }
};

using CQ = Cx<Rational>;

inline CQ cqi() { return CQ(Rational(0), Rational(1)); }
inline CQ cq(long long n) { return CQ(Rational(n)); }
inline CQ cq(long long p, long long q) { return CQ(Rational(p, q)); }

inline std::string cqStr(const CQ& z) {
    if (z.im.isZero()) return z.re.str();
    if (z.re.isZero()) return z.im.str() + "*i";
    std::string s = z.re.str();
    s += z.im.isNegative() ? " - " : " + ";
    s += z.im.abs().str() + "*i";
    return s;
}

inline std::complex<double> toComplex(const CQ& z) {
    return {z.re.toDouble(), z.im.toDouble()};
}

// ---- field trait shims used by templated algebra/star code ----------------

inline CQ conjOf(const CQ& z) { return CQ(z.re, -z.im); }
inline std::complex<double> conjOf(const std::complex<double>& z) { return std::conj(z); }

inline bool isZero(const CQ& z) { return z.isZero(); }
inline bool isZero(const std::complex<double>& z) { return z == std::complex<double>(0.0); }

inline CQ scalarOne(const CQ*) { return cq(1); }
inline std::complex<double> scalarOne(const std::complex<double>*) { return {1.0, 0.0}; }

inline CQ scalarI(const CQ*) { return cqi(); }
inline std::complex<double> scalarI(const std::complex<double>*) { return {0.0, 1.0}; }

inline double realPart(const CQ& z) { return z.re.toDouble(); }
inline double realPart(const std::complex<double>& z) { return z.real(); }

} // namespace kt
