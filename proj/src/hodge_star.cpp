#include "kt/hodge_star.hpp"

namespace kt::detail {

// *psi^S over the complex basis, computed once through the real orthonormal
// coframe u with psi^1 = u^1 + i u^2, psi^2 = u^3 + i u^4 and vol = u^{1234}.
const Coef16<CQ>& unitaryStarTable() {
    static const Coef16<CQ> table = [] {
        // psi-slots expressed in u-slots
        std::array<CQ, 16> C4{};
        C4[0 * 4 + 0] = cq(1); C4[0 * 4 + 1] = cqi();    // psi^1
        C4[1 * 4 + 2] = cq(1); C4[1 * 4 + 3] = cqi();    // psi^2
        C4[2 * 4 + 0] = cq(1); C4[2 * 4 + 1] = -cqi();   // psi^1bar
        C4[3 * 4 + 2] = cq(1); C4[3 * 4 + 3] = -cqi();   // psi^2bar
        Coef16<CQ> c2u = exteriorSubstitution(C4);       // psi^S = sum E[S][T] u^T

        // u-slots in psi-slots: u^1 = (psi^1+psi^1b)/2, u^2 = (psi^1-psi^1b)/(2i), ...
        std::array<CQ, 16> C4inv{};
        CQ half = cq(1, 2);
        CQ mhalfI = cq(1, 2) / cqi();                    // 1/(2i) = -i/2
        C4inv[0 * 4 + 0] = half;   C4inv[0 * 4 + 2] = half;
        C4inv[1 * 4 + 0] = mhalfI; C4inv[1 * 4 + 2] = -mhalfI;
        C4inv[2 * 4 + 1] = half;   C4inv[2 * 4 + 3] = half;
        C4inv[3 * 4 + 1] = mhalfI; C4inv[3 * 4 + 3] = -mhalfI;
        Coef16<CQ> u2c = exteriorSubstitution(C4inv);    // u^T = sum E[T][R] psi^R

        Coef16<CQ> U{};   // U[S*16+R]: *psi^S = sum_R U[S][R] psi^R
        for (int S = 0; S < 16; ++S) {
            for (int T = 0; T < 16; ++T) {
                CQ a = c2u[S * 16 + T];
                if (a.isZero()) continue;
                int Tc = 15 ^ T;
                int sgn = mask::wedgeSign(T, Tc);        // u^T ^ u^Tc = sgn u^{1234}
                CQ b = sgn < 0 ? -a : a;
                for (int R = 0; R < 16; ++R) {
                    CQ w = u2c[Tc * 16 + R];
                    if (w.isZero()) continue;
                    U[S * 16 + R] += b * w;
                }
            }
        }
        return U;
    }();
    return table;
}

} // namespace kt::detail
