//==============================================================================
// acs_frame.hpp
// Almost-complex structure on a 4-dimensional invariant coframe, given by the
// 2x4 complex matrix P with Phi^i = sum_j P_ij e^j. Stacking P over its
// conjugate gives the 4x4 change of coframe Q; its inverse transpose R gives
// the dual frame vectors V_1, V_2, V_1bar, V_2bar as combinations of the real
// frame e_1..e_4.
//==============================================================================
#pragma once

#include <memory>
#include "kt/qmatrix.hpp"
#include "kt/cx.hpp"
#include "kt/invariant_form.hpp"
#include "kt/lie_algebra.hpp"

namespace kt {

class AcsFrame {
public:
    // rows: Phi^1, Phi^2 on (e^1..e^4); throws if {Phi, conj Phi} is not a coframe
    explicit AcsFrame(const Mat<CQ>& P);

    // copies are distinct frame identities; their cached coframe forms are retagged
    AcsFrame(const AcsFrame& o) { *this = o; }
    AcsFrame& operator=(const AcsFrame& o) {
        P_ = o.P_; Q_ = o.Q_; R_ = o.R_; detQ_ = o.detQ_; eForms_ = o.eForms_;
        for (auto& f : eForms_) f.frameTag = this;
        return *this;
    }

    // Phi^1_a = (e^1 + a e^4) + i e^3, Phi^2_a = e^2 + i e^4
    static AcsFrame Ja(const Rational& a);
    // phi^1 = e^1 + i e^3, phi^2 = e^2 + i e^4  (same as Ja with a = 0)
    static AcsFrame example42() { return Ja(Rational(0)); }

    const Mat<CQ>& P() const { return P_; }
    const Mat<CQ>& Q() const { return Q_; }       // rows Phi^1,Phi^2,Phi^1b,Phi^2b over e^j
    const Mat<CQ>& R() const { return R_; }       // V_i = sum_k R(i,k) e_k
    const CQ& detQ() const { return detQ_; }      // Phi^{1 2 1b 2b} = detQ * e^{1234}

    // e^j (0-based) expressed in the complex coframe basis
    const InvariantForm& realCoframe(int j) const { return eForms_[j]; }
    // e^{i} ^ e^{j} (0-based, i < j)
    InvariantForm realCoframeWedge(int i, int j) const;

    const void* tag() const { return this; }

private:
    Mat<CQ> P_, Q_, R_;
    CQ detQ_;
    std::array<InvariantForm, 4> eForms_;
};

} // namespace kt
