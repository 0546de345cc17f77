//==============================================================================
// hodge_star.hpp
// Pointwise Hodge star and Hermitian inner product on the exterior algebra of
// a 2-dimensional complex Hermitian vector space, over the complex coframe
// slots (Phi^1, Phi^2, Phi^1b, Phi^2b).
//
// Conventions. The metric is the 2x2 Hermitian positive matrix h with
//     omega = (i/2) sum_{j,k} h_{jk} Phi^j ^ Phi^kbar ,
// and the star uses the orientation in which omega^2/2 is the positive
// volume form. Writing h = G^dag D G^-dag (unit triangular G, positive
// diagonal D) gives a coframe chi in which the metric is diagonal; in the
// unitary coframe psi^j = sqrt(lambda_j) chi^j the star is a fixed exact
// table, and the sqrt factors recombine into integer powers of lambda, so
// the whole map is rational in the entries of h. The same code runs over
// exact complex rationals and over std::complex<double>.
//
// For h = I the (1,1) block reads
//     *(A P11b + B P12b + L P21b + M P22b)
//        = M P11b - B P12b - L P21b + A P22b,
// *omega = omega, and *1 = omega^2/2.
//==============================================================================
#pragma once

#include <array>
#include <stdexcept>
#include "kt/invariant_form.hpp"
#include "kt/qmatrix.hpp"

namespace kt {

// 16x16 coefficient maps, row-major: out[t] = sum_s M[t*16+s] in[s]
template <class T>
using Coef16 = std::array<T, 256>;

namespace detail {

// old^j = sum_m B(j,m) new^m extended to all degrees by wedge:
// old^S = sum_T E[S][T] new^T, E returned as E[S*16+T].
template <class T>
Coef16<T> exteriorSubstitution(const std::array<T, 16>& B4) {
    Coef16<T> E{};
    E[0] = T(1);
    for (int S = 1; S < 16; ++S) {
        int low = S & -S;                // lowest slot
        int rest = S ^ low;
        int j = std::countr_zero((unsigned)low);
        // old^S = old^j ^ old^rest
        std::array<T, 16> restRow{};
        for (int t = 0; t < 16; ++t) restRow[t] = E[rest * 16 + t];
        for (int m = 0; m < 4; ++m) {
            const T& bj = B4[j * 4 + m];
            if (isZero(bj)) continue;
            for (int t = 0; t < 16; ++t) {
                if (isZero(restRow[t])) continue;
                int sgn = mask::wedgeSign(1 << m, t);
                if (sgn == 0) continue;
                T v = bj * restRow[t];
                E[S * 16 + ((1 << m) | t)] += (sgn < 0 ? -v : v);
            }
        }
    }
    return E;
}

// coefficient transform induced by a basis substitution: if old^S = sum E[S][T] new^T
// then coefficients transform by a_new[T] = sum_S E[S][T] a_old[S]
template <class T>
Coef16<T> coefTransform(const Coef16<T>& E) {
    Coef16<T> M{};
    for (int s = 0; s < 16; ++s)
        for (int t = 0; t < 16; ++t) M[t * 16 + s] = E[s * 16 + t];
    return M;
}

template <class T>
Coef16<T> compose(const Coef16<T>& A, const Coef16<T>& B) {   // A after B
    Coef16<T> C{};
    for (int i = 0; i < 16; ++i)
        for (int k = 0; k < 16; ++k) {
            const T& a = A[i * 16 + k];
            if (isZero(a)) continue;
            for (int j = 0; j < 16; ++j) {
                const T& b = B[k * 16 + j];
                if (isZero(b)) continue;
                C[i * 16 + j] += a * b;
            }
        }
    return C;
}

// Exact star table of the unitary coframe: *psi^S = sum_T U[S][T] psi^T.
// Built once through the real orthonormal basis u with psi^1 = u^1 + i u^2,
// psi^2 = u^3 + i u^4 and vol = u^{1234}.
const Coef16<CQ>& unitaryStarTable();

inline bool isPositiveReal(const CQ& z) { return z.im.isZero() && !z.re.isNegative() && !z.re.isZero(); }
inline bool isPositiveReal(const std::complex<double>& z) {
    return std::abs(z.imag()) <= 1e-12 * (1.0 + std::abs(z.real())) && z.real() > 0.0;
}

template <class T> T fromCQ(const CQ& z);
template <> inline CQ fromCQ<CQ>(const CQ& z) { return z; }
template <> inline std::complex<double> fromCQ<std::complex<double>>(const CQ& z) { return toComplex(z); }

} // namespace detail

// Star as a 16x16 coefficient map in the Phi-basis. Throws std::domain_error
// when h is not Hermitian positive definite.
template <class T>
Coef16<T> starMatrix(const T& h11, const T& h12, const T& h21, const T& h22) {
    using detail::isPositiveReal;
    if (!(h12 == conjOf(h21)) || !(h11 == conjOf(h11)) || !(h22 == conjOf(h22)))
        throw std::domain_error("starMatrix: h is not Hermitian");
    if (!isPositiveReal(h11))
        throw std::domain_error("starMatrix: h is not positive definite");
    T lam1 = h11;
    T lam2 = h22 - h21 * h12 / h11;
    if (!isPositiveReal(lam2))
        throw std::domain_error("starMatrix: h is not positive definite");

    // G = [[1, -conj(b)/h11],[0,1]], b = h21; chi-frame substitution:
    // Phi^j = sum conj(G)(j,m) chi^m on slots 0,1 and G on the barred slots.
    T zero = h11 - h11;
    T one = zero + T(1);
    T g01 = zero - h12 / h11;            // -conj(b)/h11 = -h12/h11
    std::array<T, 16> B4{};              // Phi (old) in chi (new)
    B4[0 * 4 + 0] = one; B4[0 * 4 + 1] = conjOf(g01);
    B4[1 * 4 + 1] = one;
    B4[2 * 4 + 2] = one; B4[2 * 4 + 3] = g01;
    B4[3 * 4 + 3] = one;
    Coef16<T> toChi = detail::coefTransform(detail::exteriorSubstitution(B4));

    std::array<T, 16> B4inv{};           // chi (old) in Phi (new): invert the unit triangular
    B4inv[0 * 4 + 0] = one; B4inv[0 * 4 + 1] = zero - conjOf(g01);
    B4inv[1 * 4 + 1] = one;
    B4inv[2 * 4 + 2] = one; B4inv[2 * 4 + 3] = zero - g01;
    B4inv[3 * 4 + 3] = one;
    Coef16<T> fromChi = detail::coefTransform(detail::exteriorSubstitution(B4inv));

    // diagonal star in the chi frame: *chi^S = sum_T U[S][T] lam1^{1-m1} lam2^{1-m2} chi^T
    const Coef16<CQ>& U = detail::unitaryStarTable();
    Coef16<T> diag{};
    for (int S = 0; S < 16; ++S) {
        int m1 = ((S & 1) ? 1 : 0) + ((S & 4) ? 1 : 0);
        int m2 = ((S & 2) ? 1 : 0) + ((S & 8) ? 1 : 0);
        T f = one;
        if (m1 == 0) f = f * lam1; else if (m1 == 2) f = f / lam1;
        if (m2 == 0) f = f * lam2; else if (m2 == 2) f = f / lam2;
        for (int t = 0; t < 16; ++t) {
            CQ u = U[S * 16 + t];
            if (u.isZero()) continue;
            diag[t * 16 + S] = detail::fromCQ<T>(u) * f;
        }
    }
    return detail::compose(fromChi, detail::compose(diag, toChi));
}

// Pointwise Hermitian inner-product Gram in the Phi-basis:
// <a,b>_h = sum_{S,T} a_S G[S][T] conj(b_T), with <omega,omega> = 2.
template <class T>
Coef16<T> innerGram(const T& h11, const T& h12, const T& h21, const T& h22) {
    using detail::isPositiveReal;
    if (!isPositiveReal(h11)) throw std::domain_error("innerGram: h not positive definite");
    T lam1 = h11;
    T lam2 = h22 - h21 * h12 / h11;
    if (!isPositiveReal(lam2)) throw std::domain_error("innerGram: h not positive definite");
    T zero = h11 - h11;
    T one = zero + T(1);
    T g01 = zero - h12 / h11;
    std::array<T, 16> B4{};
    B4[0 * 4 + 0] = one; B4[0 * 4 + 1] = conjOf(g01);
    B4[1 * 4 + 1] = one;
    B4[2 * 4 + 2] = one; B4[2 * 4 + 3] = g01;
    B4[3 * 4 + 3] = one;
    Coef16<T> toChi = detail::coefTransform(detail::exteriorSubstitution(B4));
    // In the unitary coframe the Gram is diag(2^{deg R}); pulling the basis
    // weights sqrt(lam)^{...} through leaves only integer powers:
    // G[S][T] = sum_R toChi[R,S] conj(toChi[R,T]) 2^{deg R} / (lam1^{m1(R)} lam2^{m2(R)})
    Coef16<T> G{};
    for (int R = 0; R < 16; ++R) {
        int m1 = ((R & 1) ? 1 : 0) + ((R & 4) ? 1 : 0);
        int m2 = ((R & 2) ? 1 : 0) + ((R & 8) ? 1 : 0);
        T w = one * T(1 << mask::degree(R));
        for (int k = 0; k < m1; ++k) w = w / lam1;
        for (int k = 0; k < m2; ++k) w = w / lam2;
        for (int s = 0; s < 16; ++s) {
            T ts = toChi[R * 16 + s];
            if (isZero(ts)) continue;
            for (int t = 0; t < 16; ++t) {
                T tt = toChi[R * 16 + t];
                if (isZero(tt)) continue;
                G[s * 16 + t] += ts * w * conjOf(tt);
            }
        }
    }
    return G;
}

template <class T>
std::array<T, 16> applyCoef16(const Coef16<T>& M, const std::array<T, 16>& a) {
    std::array<T, 16> out{};
    for (int t = 0; t < 16; ++t)
        for (int s = 0; s < 16; ++s) {
            const T& m = M[t * 16 + s];
            if (isZero(m)) continue;
            out[t] += m * a[s];
        }
    return out;
}

} // namespace kt
