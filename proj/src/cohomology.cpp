#include "kt/cohomology.hpp"
#include <stdexcept>

namespace kt {

std::string RealForm::str() const {
    std::string s;
    for (int m = 0; m < 16; ++m) {
        if (c[m].isZero()) continue;
        if (!s.empty()) s += " + ";
        std::string basisName = "e^{";
        for (int b = 0; b < 4; ++b)
            if (m & (1 << b)) basisName += std::to_string(b + 1);
        basisName += "}";
        s += "(" + c[m].str() + ") " + (m == 0 ? "1" : basisName);
    }
    return s.empty() ? "0" : s;
}

// d(e^I) by Leibniz over slots, using de^k = - sum_{i<j} c^k_{ij} e^{ij}
static RealForm dRealBasis(const NilLieAlgebra& alg, int m) {
    static const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    RealForm out;
    int pos = 0;
    for (int s = 0; s < 4; ++s) {
        if (!(m & (1 << s))) continue;
        int rest = m & ~(1 << s);
        Rational sgn((pos % 2 == 0) ? 1 : -1);
        auto de = alg.dRealCoframe(s);
        for (int p = 0; p < 6; ++p) {
            if (de[p].isZero()) continue;
            int pm = (1 << pairs[p][0]) | (1 << pairs[p][1]);
            int ws = mask::wedgeSign(pm, rest);
            if (ws == 0) continue;
            Rational v = sgn * de[p];
            out.c[pm | rest] += (ws < 0 ? -v : v);
        }
        ++pos;
    }
    return out;
}

RealForm dReal(const NilLieAlgebra& alg, const RealForm& a) {
    RealForm out;
    for (int m = 0; m < 16; ++m) {
        if (a.c[m].isZero()) continue;
        RealForm db = dRealBasis(alg, m);
        out = out + (a.c[m] * db);
    }
    return out;
}

RiemannianMetric RiemannianMetric::identity() {
    RiemannianMetric g;
    g.H = Mat<Rational>::identity(4);
    g.sqrtDetH = Rational(1);
    return g;
}

RiemannianMetric RiemannianMetric::fromCoframeMap(const Mat<Rational>& A) {
    if (A.rows() != 4 || A.cols() != 4)
        throw std::invalid_argument("RiemannianMetric: A must be 4x4");
    Rational det = A.det();
    if (det.isZero()) throw std::invalid_argument("RiemannianMetric: A is singular");
    RiemannianMetric g;
    g.H = A.transposed() * A;
    g.sqrtDetH = det.abs();
    return g;
}

static Rational gramMinor(const Mat<Rational>& H, const std::vector<int>& I,
                          const std::vector<int>& J) {
    std::size_t k = I.size();
    if (k == 0) return Rational(1);
    Mat<Rational> m(k, k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) m(a, b) = H(I[a], J[b]);
    return m.det();
}

static std::vector<int> slotsOf(int m) {
    std::vector<int> s;
    for (int j = 0; j < 4; ++j)
        if (m & (1 << j)) s.push_back(j);
    return s;
}

RealForm realStar(const RiemannianMetric& g, const RealForm& a) {
    RealForm out;
    for (int J = 0; J < 16; ++J) {
        if (a.c[J].isZero()) continue;
        int k = mask::degree(J);
        auto Js = slotsOf(J);
        for (int I = 0; I < 16; ++I) {
            if (mask::degree(I) != k) continue;
            Rational ip = gramMinor(g.H, Js, slotsOf(I));
            if (ip.isZero()) continue;
            int Ic = 15 ^ I;
            int sgn = mask::wedgeSign(I, Ic);
            Rational v = a.c[J] * ip / g.sqrtDetH;
            out.c[Ic] += (sgn < 0 ? -v : v);
        }
    }
    return out;
}

std::array<int, 5> ceBetti(const NilLieAlgebra& alg) {
    if (auto defect = alg.d2Defect())
        throw std::invalid_argument("ceBetti: invalid algebra, " + *defect);
    std::array<int, 5> b{};
    std::array<int, 5> rank{};   // rank of d_k: degree k -> k+1
    for (int k = 0; k < 4; ++k) {
        auto dom = mask::masksOfDegree(k);
        auto cod = mask::masksOfDegree(k + 1);
        Mat<Rational> M(cod.size(), dom.size());
        for (std::size_t j = 0; j < dom.size(); ++j) {
            RealForm db = dRealBasis(alg, dom[j]);
            for (std::size_t i = 0; i < cod.size(); ++i) M(i, j) = db.c[cod[i]];
        }
        rank[k] = (int)M.rank();
    }
    for (int k = 0; k <= 4; ++k) {
        int dimK = (int)mask::masksOfDegree(k).size();
        int kerDim = (k < 4) ? dimK - rank[k] : dimK;
        int imDim = (k > 0) ? rank[k - 1] : 0;
        b[k] = kerDim - imDim;
    }
    return b;
}

std::vector<RealForm> harmonicInvariantForms(const NilLieAlgebra& alg,
                                             const RiemannianMetric& g, int k) {
    if (k < 0 || k > 4) throw std::invalid_argument("harmonicInvariantForms: bad degree");
    auto dom = mask::masksOfDegree(k);
    auto cod1 = mask::masksOfDegree(k + 1);
    auto cod2 = mask::masksOfDegree(4 - k + 1);
    std::size_t rows = cod1.size() + cod2.size();
    Mat<Rational> M(rows, dom.size());
    for (std::size_t j = 0; j < dom.size(); ++j) {
        RealForm basisJ = RealForm::basis(dom[j]);
        RealForm db = dReal(alg, basisJ);
        for (std::size_t i = 0; i < cod1.size(); ++i) M(i, j) = db.c[cod1[i]];
        // coclosedness: d(*a) = 0 (equivalent to d* a = 0 since * is invertible)
        RealForm dstar = dReal(alg, realStar(g, basisJ));
        for (std::size_t i = 0; i < cod2.size(); ++i)
            M(cod1.size() + i, j) = dstar.c[cod2[i]];
    }
    Mat<Rational> ns = M.nullspace();
    std::vector<RealForm> basis;
    for (std::size_t col = 0; col < ns.cols(); ++col) {
        RealForm f;
        for (std::size_t j = 0; j < dom.size(); ++j) f.c[dom[j]] = ns(j, col);
        basis.push_back(f);
    }
    return basis;
}

SdAsdSplitResult sdAsdSplit(const NilLieAlgebra& alg, const std::vector<RealForm>& basis,
                            const RiemannianMetric& g) {
    (void)alg;
    std::size_t n = basis.size();
    auto dom = mask::masksOfDegree(2);
    // express each *gamma_i in the span: solve basis-matrix * x = star-vector
    Mat<Rational> B(dom.size(), n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < dom.size(); ++i) B(i, j) = basis[j].c[dom[i]];
    Mat<Rational> S(n, n);   // star restricted to the span
    for (std::size_t j = 0; j < n; ++j) {
        RealForm sg = realStar(g, basis[j]);
        std::vector<Rational> rhs(dom.size());
        for (std::size_t i = 0; i < dom.size(); ++i) rhs[i] = sg.c[dom[i]];
        // solve least-structure: append rhs and check consistency via rank
        Mat<Rational> aug(dom.size(), n + 1);
        for (std::size_t i = 0; i < dom.size(); ++i) {
            for (std::size_t c = 0; c < n; ++c) aug(i, c) = B(i, c);
            aug(i, n) = rhs[i];
        }
        if (aug.rank() != B.rank())
            throw std::domain_error("sdAsdSplit: star does not preserve the harmonic span");
        // solve B x = rhs (B has full column rank for a basis)
        std::vector<std::size_t> piv;
        aug.rref(&piv);
        for (std::size_t c = 0; c < n; ++c) S(c, j) = Rational(0);
        for (std::size_t r = 0; r < piv.size(); ++r)
            if (piv[r] < n) S(piv[r], j) = aug(r, n);
    }
    // projectors (1 +- S)/2; their column spaces give the SD/ASD pieces
    SdAsdSplitResult res;
    for (int sign = 0; sign < 2; ++sign) {
        Mat<Rational> P(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Rational v = S(i, j);
                if (sign == 1) v = -v;
                if (i == j) v += Rational(1);
                P(i, j) = v / Rational(2);
            }
        // column space basis: pivot columns of P
        Mat<Rational> Pc = P;
        std::vector<std::size_t> piv;
        Pc.rref(&piv);
        std::vector<RealForm> out;
        for (auto col : piv) {
            RealForm f;
            for (std::size_t i = 0; i < n; ++i)
                f = f + (P(i, col) * basis[i]);
            out.push_back(f);
        }
        if (sign == 0) { res.bPlus = (int)out.size(); res.sdBasis = out; }
        else { res.bMinus = (int)out.size(); res.asdBasis = out; }
    }
    return res;
}

BettiReport bettiReport(const NilLieAlgebra& alg, const RiemannianMetric& g) {
    BettiReport rep;
    rep.b = ceBetti(alg);
    for (int k = 0; k <= 4; ++k)
        rep.harmonicBasis[k] = harmonicInvariantForms(alg, g, k);
    auto split = sdAsdSplit(alg, rep.harmonicBasis[2], g);
    rep.bPlus = split.bPlus;
    rep.bMinus = split.bMinus;
    rep.sdBasis = split.sdBasis;
    rep.asdBasis = split.asdBasis;
    return rep;
}

InvariantForm toInvariantForm(const RealForm& a, const AcsFrame& frame) {
    InvariantForm out;
    out.frameTag = frame.tag();
    for (int m = 0; m < 16; ++m) {
        if (a.c[m].isZero()) continue;
        InvariantForm term = InvariantForm::scalar(CQ(a.c[m]));
        term.frameTag = frame.tag();
        for (int j = 0; j < 4; ++j)
            if (m & (1 << j)) term = wedge(term, frame.realCoframe(j));
        out = out + term;
    }
    return out;
}

} // namespace kt
