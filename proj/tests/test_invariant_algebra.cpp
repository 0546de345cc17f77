#include "doctest.h"
#include <random>
#include "kt/exterior_d.hpp"

using namespace kt;

namespace {

const int M_12 = 0b0011;   // Phi^{1 2}
const int M_11b = 0b0101;  // Phi^{1 1b}
const int M_21b = 0b0110;  // Phi^{2 1b}
const int M_12b = 0b1001;  // Phi^{1 2b}
const int M_22b = 0b1010;  // Phi^{2 2b}
const int M_1b2b = 0b1100; // Phi^{1b 2b}

InvariantForm randomForm(std::mt19937& rng, const void* tag) {
    std::uniform_int_distribution<int> num(-4, 4), den(1, 4);
    InvariantForm f;
    f.frameTag = tag;
    for (int m = 0; m < 16; ++m)
        f.c[m] = CQ(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
    return f;
}

InvariantForm omegaOf(const AcsFrame& fr) {
    // (i/2)(Phi^{1 1b} + Phi^{2 2b})
    InvariantForm w;
    w.frameTag = fr.tag();
    w.c[M_11b] = CQ(Rational(0), Rational(1, 2));
    w.c[M_22b] = CQ(Rational(0), Rational(1, 2));
    return w;
}

} // namespace

TEST_CASE("wedge basics") {
    AcsFrame fr = AcsFrame::Ja(Rational(1, 2));
    InvariantForm p1 = InvariantForm::basis(0b0001, fr.tag());
    InvariantForm p1b = InvariantForm::basis(0b0100, fr.tag());
    InvariantForm w = wedge(p1, p1b);
    CHECK(w.c[M_11b] == cq(1));
    CHECK(wedge(p1, p1).isZero());

    // graded commutativity on random homogeneous pieces
    std::mt19937 rng(7);
    InvariantForm a = randomForm(rng, fr.tag()).degreePart(1);
    InvariantForm b = randomForm(rng, fr.tag()).degreePart(2);
    CHECK(wedge(a, b) == wedge(b, a));                        // deg 1*2 even swaps? (-1)^{1*2}=+1
    InvariantForm a2 = randomForm(rng, fr.tag()).degreePart(1);
    CHECK(wedge(a, a2) == -wedge(a2, a));                     // (-1)^{1*1}
}

TEST_CASE("omega_a wedge omega_a gives the exact volume multiple") {
    AcsFrame fr = AcsFrame::Ja(Rational(1, 2));
    InvariantForm w = omegaOf(fr);
    InvariantForm w2 = wedge(w, w);
    // 2 (i/2)^2 Phi^{1 1b} ^ Phi^{2 2b} = (1/2) Phi^{1 2 1b 2b}
    CHECK(w2.c[15] == cq(1, 2));
    for (int m = 0; m < 15; ++m) CHECK(w2.c[m].isZero());
    // expressed on the real coframe this is -2 e^{1234}: detQ = -4
    CHECK(fr.detQ() == cq(-4));
}

TEST_CASE("structure equations reproduce the Ja preset table") {
    NilLieAlgebra kt = NilLieAlgebra::kodairaThurston();
    AcsFrame fr = AcsFrame::Ja(Rational(1, 2));
    ExteriorD D(kt, fr);

    const InvariantForm& dPhi1 = D.dCoframe(0);
    CHECK(dPhi1.c[M_12] == CQ(Rational(0), Rational(-1, 4)));
    CHECK(dPhi1.c[M_12b] == CQ(Rational(0), Rational(-1, 4)));
    CHECK(dPhi1.c[M_21b] == CQ(Rational(0), Rational(1, 4)));
    CHECK(dPhi1.c[M_22b] == cq(1, 4));                        // a/2 at a = 1/2
    CHECK(dPhi1.c[M_1b2b] == CQ(Rational(0), Rational(-1, 4)));
    CHECK(dPhi1.c[M_11b].isZero());
    CHECK(D.dCoframe(1).isZero());

    // the a = 0 frame drops the (a/2) Phi^{2 2b} term
    AcsFrame fr0 = AcsFrame::example42();
    ExteriorD D0(kt, fr0);
    const InvariantForm& dphi1 = D0.dCoframe(0);
    CHECK(dphi1.c[M_12] == CQ(Rational(0), Rational(-1, 4)));
    CHECK(dphi1.c[M_22b].isZero());
    CHECK(dphi1.c[M_1b2b] == CQ(Rational(0), Rational(-1, 4)));
}

TEST_CASE("d on the real coframe matches the structure constants") {
    NilLieAlgebra kt = NilLieAlgebra::kodairaThurston();
    AcsFrame fr = AcsFrame::Ja(Rational(1, 2));
    ExteriorD D(kt, fr);
    InvariantForm e3 = fr.realCoframe(2);
    InvariantForm e12 = fr.realCoframeWedge(0, 1);
    CHECK(D.d(e3) == -e12);
    CHECK(D.d(fr.realCoframe(0)).isZero());
    CHECK(D.d(fr.realCoframe(1)).isZero());
    CHECK(D.d(fr.realCoframe(3)).isZero());
}

TEST_CASE("split of d on Phi^1 lands in the displayed bidegrees") {
    NilLieAlgebra kt = NilLieAlgebra::kodairaThurston();
    AcsFrame fr = AcsFrame::Ja(Rational(1, 2));
    ExteriorD D(kt, fr);
    InvariantForm p1 = InvariantForm::basis(0b0001, fr.tag());
    DSplit s = D.splitD(p1);

    CHECK(s.mu.isZero());
    CHECK(s.partial.c[M_12] == CQ(Rational(0), Rational(-1, 4)));
    CHECK(s.dbar.c[M_12b] == CQ(Rational(0), Rational(-1, 4)));
    CHECK(s.dbar.c[M_21b] == CQ(Rational(0), Rational(1, 4)));
    CHECK(s.dbar.c[M_22b] == cq(1, 4));
    CHECK(s.mubar.c[M_1b2b] == CQ(Rational(0), Rational(-1, 4)));

    // reassembly is exact
    CHECK((s.mu + s.partial + s.dbar + s.mubar) == D.d(p1));

    // constants have vanishing d
    CHECK(D.d(InvariantForm::scalar(cq(1))).isZero());
}

TEST_CASE("integrability flag") {
    NilLieAlgebra kt = NilLieAlgebra::kodairaThurston();
    CHECK_FALSE(ExteriorD(kt, AcsFrame::Ja(Rational(1, 2))).isIntegrable());
    CHECK_FALSE(ExteriorD(kt, AcsFrame::example42()).isIntegrable());
    NilLieAlgebra ab = NilLieAlgebra::abelian();
    CHECK(ExteriorD(ab, AcsFrame::example42()).isIntegrable());
}

TEST_CASE("seven d^2 identities hold for valid presets and fail for broken constants") {
    NilLieAlgebra kt = NilLieAlgebra::kodairaThurston();
    CHECK(ExteriorD(kt, AcsFrame::Ja(Rational(1, 2))).verifyD2Identities().all());
    CHECK(ExteriorD(kt, AcsFrame::example42()).verifyD2Identities().all());
    CHECK(ExteriorD(NilLieAlgebra::abelian(), AcsFrame::example42()).verifyD2Identities().all());

    NilLieAlgebra broken;
    broken.setC(3, 1, 2, Rational(-1));
    broken.setC(1, 3, 4, Rational(1));
    CHECK(broken.d2Defect().has_value());
    AcsFrame fr = AcsFrame::example42();
    CHECK_FALSE(ExteriorD(broken, fr).verifyD2Identities().all());
}

TEST_CASE("d^2 = 0 and Leibniz on random rational forms") {
    NilLieAlgebra kt = NilLieAlgebra::kodairaThurston();
    AcsFrame fr = AcsFrame::Ja(Rational(1, 2));
    ExteriorD D(kt, fr);
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 100; ++trial) {
        InvariantForm a = randomForm(rng, fr.tag());
        CHECK(D.d(D.d(a)).isZero());
    }
    for (int trial = 0; trial < 25; ++trial) {
        for (int ka = 0; ka <= 2; ++ka) {
            InvariantForm a = randomForm(rng, fr.tag()).degreePart(ka);
            InvariantForm b = randomForm(rng, fr.tag());
            InvariantForm lhs = D.d(wedge(a, b));
            InvariantForm rhs = wedge(D.d(a), b) +
                (ka % 2 == 0 ? wedge(a, D.d(b)) : -wedge(a, D.d(b)));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("conjugation intertwines the split operators") {
    NilLieAlgebra kt = NilLieAlgebra::kodairaThurston();
    AcsFrame fr = AcsFrame::Ja(Rational(1, 2));
    ExteriorD D(kt, fr);
    std::mt19937 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        InvariantForm a = randomForm(rng, fr.tag());
        CHECK(D.dbar(a.conjugated()) == D.partial(a).conjugated());
        CHECK(D.mubar(a.conjugated()) == D.mu(a).conjugated());
    }
}

TEST_CASE("J action examples") {
    AcsFrame fr = AcsFrame::Ja(Rational(1, 2));
    InvariantForm p11b = InvariantForm::basis(M_11b, fr.tag());
    CHECK(jAction(p11b) == p11b);
    InvariantForm p1 = InvariantForm::basis(0b0001, fr.tag());
    CHECK(jAction(p1) == (-cqi() * p1));
    InvariantForm p1b2b = InvariantForm::basis(M_1b2b, fr.tag());
    CHECK(jAction(p1b2b) == -p1b2b);
}

TEST_CASE("mismatched frames are rejected") {
    AcsFrame f1 = AcsFrame::Ja(Rational(1, 2));
    AcsFrame f2 = AcsFrame::example42();
    InvariantForm a = InvariantForm::basis(1, f1.tag());
    InvariantForm b = InvariantForm::basis(2, f2.tag());
    CHECK_THROWS_AS(wedge(a, b), std::invalid_argument);
}
