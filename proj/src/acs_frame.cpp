#include "kt/acs_frame.hpp"

namespace kt {

AcsFrame::AcsFrame(const Mat<CQ>& P) : P_(P) {
    if (P.rows() != 2 || P.cols() != 4)
        throw std::invalid_argument("AcsFrame: P must be 2x4");
    Q_ = Mat<CQ>(4, 4);
    for (std::size_t j = 0; j < 4; ++j) {
        Q_(0, j) = P(0, j);
        Q_(1, j) = P(1, j);
        Q_(2, j) = conjOf(P(0, j));
        Q_(3, j) = conjOf(P(1, j));
    }
    detQ_ = Q_.det();
    if (detQ_.isZero())
        throw std::invalid_argument("AcsFrame: {Phi, conj Phi} is not a coframe");
    Mat<CQ> Qinv = Q_.inverse();
    R_ = Q_.transposed().inverse();
    // e^j = sum_m Qinv(j,m) Phi^m
    for (int j = 0; j < 4; ++j) {
        InvariantForm f;
        f.frameTag = this;
        for (int m = 0; m < 4; ++m) f.c[1 << m] = Qinv(j, m);
        eForms_[j] = f;
    }
}

AcsFrame AcsFrame::Ja(const Rational& a) {
    Mat<CQ> P(2, 4);
    P(0, 0) = cq(1); P(0, 2) = cqi(); P(0, 3) = CQ(a);
    P(1, 1) = cq(1); P(1, 3) = cqi();
    return AcsFrame(P);
}

InvariantForm AcsFrame::realCoframeWedge(int i, int j) const {
    return wedge(eForms_[i], eForms_[j]);
}

} // namespace kt
