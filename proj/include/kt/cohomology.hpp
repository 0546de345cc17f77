//==============================================================================
// cohomology.hpp
// Invariant-form (Chevalley-Eilenberg) de Rham cohomology of the nilmanifold
// over the real coframe e^1..e^4, in exact rational arithmetic: Betti
// numbers, d-harmonic invariant representatives for an invariant Riemannian
// metric, and the self-dual / anti-self-dual splitting of the harmonic
// 2-forms. The real Hodge star here uses the orientation with e^{1234}
// positive; a metric is given by the Gram matrix H of the coframe, entered
// as H = A^T A so that the volume normalization stays rational.
//==============================================================================
#pragma once

#include <array>
#include <vector>
#include <string>
#include "kt/lie_algebra.hpp"
#include "kt/qmatrix.hpp"
#include "kt/invariant_form.hpp"
#include "kt/acs_frame.hpp"

namespace kt {

struct RealForm {
    std::array<Rational, 16> c{};   // coefficients on e^I, bit j = e^{j+1}

    bool isZero() const {
        for (const auto& v : c) if (!v.isZero()) return false;
        return true;
    }
    static RealForm basis(int m) { RealForm f; f.c[m] = Rational(1); return f; }
    friend RealForm operator+(const RealForm& a, const RealForm& b) {
        RealForm f;
        for (int m = 0; m < 16; ++m) f.c[m] = a.c[m] + b.c[m];
        return f;
    }
    friend RealForm operator-(const RealForm& a, const RealForm& b) {
        RealForm f;
        for (int m = 0; m < 16; ++m) f.c[m] = a.c[m] - b.c[m];
        return f;
    }
    friend RealForm operator*(const Rational& s, const RealForm& a) {
        RealForm f;
        for (int m = 0; m < 16; ++m) f.c[m] = s * a.c[m];
        return f;
    }
    friend bool operator==(const RealForm& a, const RealForm& b) { return a.c == b.c; }
    std::string str() const;
};

// d on the real invariant complex (no almost-complex structure involved)
RealForm dReal(const NilLieAlgebra& alg, const RealForm& a);

struct RiemannianMetric {
    Mat<Rational> H;        // Gram matrix of the coframe, SPD
    Rational sqrtDetH;      // volume normalization, rational by construction

    static RiemannianMetric identity();
    // H = A^T A for an invertible rational A (sqrt(det H) = |det A|)
    static RiemannianMetric fromCoframeMap(const Mat<Rational>& A);
};

// Hodge star with vol = e^{1234} / sqrtDetH
RealForm realStar(const RiemannianMetric& g, const RealForm& a);

struct BettiReport {
    std::array<int, 5> b{};             // b0..b4
    int bPlus = 0, bMinus = 0;
    std::array<std::vector<RealForm>, 5> harmonicBasis;
    std::vector<RealForm> sdBasis, asdBasis;
    int eulerCharacteristic() const {
        return b[0] - b[1] + b[2] - b[3] + b[4];
    }
};

// Betti numbers alone (exact ranks of the invariant complex)
std::array<int, 5> ceBetti(const NilLieAlgebra& alg);

// basis of ker d  ∩  ker d* on invariant k-forms
std::vector<RealForm> harmonicInvariantForms(const NilLieAlgebra& alg,
                                             const RiemannianMetric& g, int k);

struct SdAsdSplitResult {
    int bPlus = 0, bMinus = 0;
    std::vector<RealForm> sdBasis, asdBasis;
};

// simultaneous eigenspaces of * on the span of a harmonic 2-form basis;
// throws if * does not preserve the span
SdAsdSplitResult sdAsdSplit(const NilLieAlgebra& alg, const std::vector<RealForm>& basis,
                            const RiemannianMetric& g);

// full report: Betti numbers, harmonic bases for the given metric, b+/b-
BettiReport bettiReport(const NilLieAlgebra& alg, const RiemannianMetric& g);

// e-basis form as an InvariantForm over a frame (for cross-module tests/IO)
InvariantForm toInvariantForm(const RealForm& a, const AcsFrame& frame);

} // namespace kt
