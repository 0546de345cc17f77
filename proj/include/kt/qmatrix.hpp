//==============================================================================
// qmatrix.hpp
// Small dense matrices over an exact field (Rational or Cx<Rational>), with
// the elimination routines the cohomology and frame code rely on: rank,
// reduced row echelon form, nullspace, inverse and linear solve. Everything
// here is exact; pivots are chosen as the first nonzero entry so results are
// deterministic.
//==============================================================================
#pragma once

#include <vector>
#include <stdexcept>
#include <cstddef>
#include "kt/rational.hpp"

namespace kt {

inline bool isZero(const Rational& r) { return r.isZero(); }

template <class F>
class Mat {
public:
    Mat() : r_(0), c_(0) {}
    Mat(std::size_t r, std::size_t c) : r_(r), c_(c), a_(r * c, F{}) {}

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }

    F& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const F& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = F(1);
        return m;
    }

    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.c_ != b.r_) throw std::invalid_argument("Mat: size mismatch");
        Mat m(a.r_, b.c_);
        for (std::size_t i = 0; i < a.r_; ++i)
            for (std::size_t k = 0; k < a.c_; ++k) {
                const F& aik = a(i, k);
                if (isZero(aik)) continue;
                for (std::size_t j = 0; j < b.c_; ++j)
                    m(i, j) += aik * b(k, j);
            }
        return m;
    }

    Mat transposed() const {
        Mat m(c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    // Gauss-Jordan in place; returns rank and records pivot columns.
    std::size_t rref(std::vector<std::size_t>* pivots = nullptr) {
        std::size_t rank = 0;
        for (std::size_t col = 0; col < c_ && rank < r_; ++col) {
            std::size_t p = rank;
            while (p < r_ && isZero((*this)(p, col))) ++p;
            if (p == r_) continue;
            if (p != rank)
                for (std::size_t j = 0; j < c_; ++j) std::swap(a_[p * c_ + j], a_[rank * c_ + j]);
            F inv = F(1) / (*this)(rank, col);
            for (std::size_t j = col; j < c_; ++j) (*this)(rank, j) *= inv;
            for (std::size_t i = 0; i < r_; ++i) {
                if (i == rank) continue;
                F f = (*this)(i, col);
                if (isZero(f)) continue;
                for (std::size_t j = col; j < c_; ++j)
                    (*this)(i, j) -= f * (*this)(rank, j);
            }
            if (pivots) pivots->push_back(col);
            ++rank;
        }
        return rank;
    }

    std::size_t rank() const { Mat m = *this; return m.rref(); }

    // Columns spanning {x : Ax = 0}.
    Mat nullspace() const {
        Mat m = *this;
        std::vector<std::size_t> piv;
        m.rref(&piv);
        std::vector<bool> isPivot(c_, false);
        for (auto p : piv) isPivot[p] = true;
        std::size_t nfree = c_ - piv.size();
        Mat ns(c_, nfree);
        std::size_t k = 0;
        for (std::size_t col = 0; col < c_; ++col) {
            if (isPivot[col]) continue;
            ns(col, k) = F(1);
            for (std::size_t i = 0; i < piv.size(); ++i)
                ns(piv[i], k) = -m(i, col);
            ++k;
        }
        return ns;
    }

    Mat inverse() const {
        if (r_ != c_) throw std::invalid_argument("Mat: inverse of non-square");
        Mat aug(r_, 2 * c_);
        for (std::size_t i = 0; i < r_; ++i) {
            for (std::size_t j = 0; j < c_; ++j) aug(i, j) = (*this)(i, j);
            aug(i, c_ + i) = F(1);
        }
        if (aug.rref() != r_) throw std::domain_error("Mat: singular matrix");
        Mat inv(r_, c_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) inv(i, j) = aug(i, c_ + j);
        return inv;
    }

    // Solves Ax = b; throws if the system is singular/inconsistent.
    std::vector<F> solve(const std::vector<F>& b) const {
        if (b.size() != r_) throw std::invalid_argument("Mat: solve size mismatch");
        Mat aug(r_, c_ + 1);
        for (std::size_t i = 0; i < r_; ++i) {
            for (std::size_t j = 0; j < c_; ++j) aug(i, j) = (*this)(i, j);
            aug(i, c_) = b[i];
        }
        std::vector<std::size_t> piv;
        aug.rref(&piv);
        if (!piv.empty() && piv.back() == c_)
            throw std::domain_error("Mat: inconsistent system");
        if (piv.size() != c_)
            throw std::domain_error("Mat: underdetermined system");
        std::vector<F> x(c_);
        for (std::size_t i = 0; i < c_; ++i) x[i] = aug(i, c_);
        return x;
    }

    F det() const {
        if (r_ != c_) throw std::invalid_argument("Mat: det of non-square");
        Mat m = *this;
        F d = F(1);
        for (std::size_t col = 0; col < c_; ++col) {
            std::size_t p = col;
            while (p < r_ && isZero(m(p, col))) ++p;
            if (p == r_) return F(0);
            if (p != col) {
                for (std::size_t j = 0; j < c_; ++j) std::swap(m.a_[p * c_ + j], m.a_[col * c_ + j]);
                d = -d;
            }
            d *= m(col, col);
            F inv = F(1) / m(col, col);
            for (std::size_t i = col + 1; i < r_; ++i) {
                F f = m(i, col) * inv;
                if (isZero(f)) continue;
                for (std::size_t j = col; j < c_; ++j) m(i, j) -= f * m(col, j);
            }
        }
        return d;
    }

private:
    std::size_t r_, c_;
    std::vector<F> a_;
};

} // namespace kt
