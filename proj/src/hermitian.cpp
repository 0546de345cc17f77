#include "kt/hermitian.hpp"

namespace kt {

namespace {
const int M11b = 0b0101, M12b = 0b1001, M21b = 0b0110, M22b = 0b1010;
}

bool ConstMetric::isHermitianPD() const {
    if (!(h12 == conjOf(h21)) || !h11.im.isZero() || !h22.im.isZero()) return false;
    if (!(h11.re > Rational(0))) return false;
    CQ det = h11 * h22 - h12 * h21;
    return det.im.isZero() && det.re > Rational(0);
}

InvariantForm fundamentalForm(const AcsFrame& frame, const ConstMetric& h) {
    InvariantForm w;
    w.frameTag = frame.tag();
    CQ iHalf = cqi() * cq(1, 2);
    w.c[M11b] = iHalf * h.h11;
    w.c[M12b] = iHalf * h.h12;
    w.c[M21b] = iHalf * h.h21;
    w.c[M22b] = iHalf * h.h22;
    return w;
}

InvariantForm hodgeStar(const AcsFrame& frame, const ConstMetric& h, const InvariantForm& a) {
    Coef16<CQ> S = starMatrix<CQ>(h.h11, h.h12, h.h21, h.h22);
    InvariantForm out;
    out.frameTag = frame.tag();
    out.c = applyCoef16(S, a.c);
    return out;
}

CQ integrate(const AcsFrame& frame, const InvariantForm& a) {
    for (int m = 0; m < 15; ++m)
        if (!a.c[m].isZero())
            throw std::invalid_argument("integrate: input is not a 4-form");
    return a.c[15] * frame.detQ();
}

CQ lambdaContract(const AcsFrame& frame, const ConstMetric& h, const InvariantForm& a) {
    if (a.homogeneousDegree() != 2 && !a.isZero())
        throw std::invalid_argument("lambdaContract: degree-2 input required");
    Coef16<CQ> G = innerGram<CQ>(h.h11, h.h12, h.h21, h.h22);
    InvariantForm w = fundamentalForm(frame, h);
    CQ acc;
    for (int s = 0; s < 16; ++s) {
        if (a.c[s].isZero()) continue;
        for (int t = 0; t < 16; ++t) {
            if (w.c[t].isZero()) continue;
            acc += a.c[s] * G[s * 16 + t] * conjOf(w.c[t]);
        }
    }
    return acc;
}

LeeFormResult leeForm(const ExteriorD& D, const AcsFrame& frame, const ConstMetric& h) {
    InvariantForm w = fundamentalForm(frame, h);
    InvariantForm dw = D.d(w);
    static const int threeMasks[4] = {0b0111, 0b1011, 0b1101, 0b1110};
    Mat<CQ> L(4, 4);
    for (int s = 0; s < 4; ++s) {
        InvariantForm col = wedge(InvariantForm::basis(1 << s, frame.tag()), w);
        for (int r = 0; r < 4; ++r) L(r, s) = col.c[threeMasks[r]];
    }
    std::vector<CQ> rhs(4);
    for (int r = 0; r < 4; ++r) rhs[r] = dw.c[threeMasks[r]];
    std::vector<CQ> t = L.solve(rhs);   // throws when omega is degenerate
    InvariantForm theta;
    theta.frameTag = frame.tag();
    for (int s = 0; s < 4; ++s) theta.c[1 << s] = t[s];
    LeeFormResult res;
    res.theta = theta;
    res.residualZero = (dw - wedge(theta, w)).isZero();
    return res;
}

InvariantForm gauduchonDefect(const ExteriorD& D, const AcsFrame& frame, const ConstMetric& h) {
    InvariantForm w = fundamentalForm(frame, h);
    return D.d(D.dc(w));
}

const char* metricClassName(MetricClass c) {
    switch (c) {
        case MetricClass::AlmostKahler: return "AlmostKahler";
        case MetricClass::GloballyConformallyKahler: return "GloballyConformallyKahler";
        case MetricClass::StrictlyLCK: return "StrictlyLCK";
        default: return "General";
    }
}

std::array<CQ, 4> toRealCoframe(const AcsFrame& frame, const InvariantForm& oneForm) {
    // Phi^m = sum_j Q(m,j) e^j, so t_j = sum_m a_m Q(m,j)
    std::array<CQ, 4> t{};
    for (int j = 0; j < 4; ++j)
        for (int m = 0; m < 4; ++m)
            t[j] += oneForm.c[1 << m] * frame.Q()(m, j);
    return t;
}

MetricClass classifyInvariantMetric(const ExteriorD& D, const AcsFrame& frame,
                                    const ConstMetric& h,
                                    const std::vector<std::array<Rational, 4>>& referenceHarmonic1Forms) {
    LeeFormResult lee = leeForm(D, frame, h);
    if (lee.theta.isZero()) return MetricClass::AlmostKahler;
    if (!D.d(lee.theta).isZero()) return MetricClass::General;
    // exactness: theta is exact iff it pairs to zero with every reference
    // harmonic 1-form (pairings exact for invariant theta)
    std::array<CQ, 4> te = toRealCoframe(frame, lee.theta);
    for (const auto& eta : referenceHarmonic1Forms) {
        CQ p;
        for (int j = 0; j < 4; ++j) p += te[j] * CQ(eta[j]);
        if (!p.isZero()) return MetricClass::StrictlyLCK;
    }
    return MetricClass::GloballyConformallyKahler;
}

} // namespace kt
