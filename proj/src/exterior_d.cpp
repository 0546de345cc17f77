#include "kt/exterior_d.hpp"

namespace kt {

ExteriorD::ExteriorD(const NilLieAlgebra& alg, const AcsFrame& frame)
    : alg_(&alg), frame_(&frame) {
    // dPhi^s = sum_j Q(s,j) de^j, expanded back into the complex coframe
    static const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (int s = 0; s < 4; ++s) {
        InvariantForm acc;
        acc.frameTag = frame.tag();
        for (int j = 0; j < 4; ++j) {
            CQ w = frame.Q()(s, j);
            if (w.isZero()) continue;
            auto de = alg.dRealCoframe(j);       // coefficients on e^{ab} pairs
            for (int p = 0; p < 6; ++p) {
                if (de[p].isZero()) continue;
                InvariantForm eab = frame.realCoframeWedge(pairs[p][0], pairs[p][1]);
                acc = acc + ((w * CQ(de[p])) * eab);
            }
        }
        dPhi_[s] = acc;
    }
}

InvariantForm ExteriorD::dBasis(int m) const {
    if (dBasisReady_[m]) return dBasisCache_[m];
    InvariantForm out;
    out.frameTag = frame_->tag();
    // Leibniz over the slots of m in increasing order
    int pos = 0;
    for (int s = 0; s < 4; ++s) {
        if (!(m & (1 << s))) continue;
        InvariantForm term = InvariantForm::scalar(pos % 2 == 0 ? cq(1) : cq(-1));
        term.frameTag = frame_->tag();
        for (int t = 0; t < 4; ++t) {
            if (!(m & (1 << t))) continue;
            term = wedge(term, t == s ? dPhi_[t] : InvariantForm::basis(1 << t, frame_->tag()));
        }
        out = out + term;
        ++pos;
    }
    dBasisCache_[m] = out;
    dBasisReady_[m] = true;
    return out;
}

InvariantForm ExteriorD::d(const InvariantForm& a) const {
    InvariantForm out;
    out.frameTag = frame_->tag();
    for (int m = 0; m < 16; ++m) {
        if (a.c[m].isZero()) continue;
        out = out + (a.c[m] * dBasis(m));
    }
    return out;
}

DSplit ExteriorD::splitD(const InvariantForm& a) const {
    auto [p, q] = a.bidegree();
    InvariantForm da = d(a);
    DSplit s;
    s.mu = da.part(p + 2, q - 1);
    s.partial = da.part(p + 1, q);
    s.dbar = da.part(p, q + 1);
    s.mubar = da.part(p - 1, q + 2);
    return s;
}

// The four pieces applied to a non-homogeneous form act per bidegree component.
static InvariantForm applyPiece(const ExteriorD& D, const InvariantForm& a, int dp, int dq) {
    InvariantForm out;
    out.frameTag = a.frameTag;
    for (int p = 0; p <= 2; ++p)
        for (int q = 0; q <= 2; ++q) {
            InvariantForm comp = a.part(p, q);
            if (comp.isZero()) continue;
            out = out + D.d(comp).part(p + dp, q + dq);
        }
    return out;
}

InvariantForm ExteriorD::mu(const InvariantForm& a) const { return applyPiece(*this, a, 2, -1); }
InvariantForm ExteriorD::partial(const InvariantForm& a) const { return applyPiece(*this, a, 1, 0); }
InvariantForm ExteriorD::dbar(const InvariantForm& a) const { return applyPiece(*this, a, 0, 1); }
InvariantForm ExteriorD::mubar(const InvariantForm& a) const { return applyPiece(*this, a, -1, 2); }

InvariantForm ExteriorD::dc(const InvariantForm& a) const {
    // J^{-1} = (-1)^k J on k-forms; apply degree by degree
    InvariantForm out;
    out.frameTag = a.frameTag;
    for (int k = 0; k <= 4; ++k) {
        InvariantForm comp = a.degreePart(k);
        if (comp.isZero()) continue;
        InvariantForm dJ = d(jAction(comp));    // degree k+1
        InvariantForm JinvDJ = jAction(dJ);
        if ((k + 1) % 2 == 1) JinvDJ = -JinvDJ; // (-1)^{k+1}
        out = out + (-JinvDJ);
    }
    return out;
}

bool ExteriorD::isIntegrable() const {
    for (int s = 0; s < 4; ++s) {
        InvariantForm base = InvariantForm::basis(1 << s, frame_->tag());
        if (!mu(base).isZero() || !mubar(base).isZero()) return false;
    }
    return true;
}

const std::array<std::string, 7>& ExteriorD::IdentityReport::names() {
    static const std::array<std::string, 7> n = {
        "mu^2 = 0",
        "mu del + del mu = 0",
        "del^2 + mu dbar + dbar mu = 0",
        "del dbar + dbar del + mu mubar + mubar mu = 0",
        "dbar^2 + mubar del + del mubar = 0",
        "mubar dbar + dbar mubar = 0",
        "mubar^2 = 0"};
    return n;
}

ExteriorD::IdentityReport ExteriorD::verifyD2Identities() const {
    IdentityReport rep;
    rep.holds.fill(true);
    for (int m = 0; m < 16; ++m) {
        InvariantForm a = InvariantForm::basis(m, frame_->tag());
        auto M = [&](const InvariantForm& f) { return mu(f); };
        auto P = [&](const InvariantForm& f) { return partial(f); };
        auto B = [&](const InvariantForm& f) { return dbar(f); };
        auto Mb = [&](const InvariantForm& f) { return mubar(f); };
        if (!M(M(a)).isZero()) rep.holds[0] = false;
        if (!(M(P(a)) + P(M(a))).isZero()) rep.holds[1] = false;
        if (!(P(P(a)) + M(B(a)) + B(M(a))).isZero()) rep.holds[2] = false;
        if (!(P(B(a)) + B(P(a)) + M(Mb(a)) + Mb(M(a))).isZero()) rep.holds[3] = false;
        if (!(B(B(a)) + Mb(P(a)) + P(Mb(a))).isZero()) rep.holds[4] = false;
        if (!(Mb(B(a)) + B(Mb(a))).isZero()) rep.holds[5] = false;
        if (!Mb(Mb(a)).isZero()) rep.holds[6] = false;
    }
    return rep;
}

std::vector<ExteriorD::StructureRow> ExteriorD::structureEquations() const {
    std::vector<StructureRow> rows;
    for (int s = 0; s < 2; ++s) {
        StructureRow row;
        row.coframeSlot = s;
        for (int m = 0; m < 16; ++m)
            if (!dPhi_[s].c[m].isZero()) row.terms.push_back({m, dPhi_[s].c[m]});
        rows.push_back(row);
    }
    return rows;
}

} // namespace kt
