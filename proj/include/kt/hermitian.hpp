//==============================================================================
// hermitian.hpp
// Hermitian metrics with constant (exact complex-rational) coefficients in
// the Phi-coframe: fundamental form, exact Hodge star on invariant forms,
// Lee form, Gauduchon defect dd^c(omega), the degree-2 contraction with
// omega normalized by <omega,omega> = 2, integration of invariant 4-forms
// against the e^{1234} normalization, and the LCK/GCK classification.
//==============================================================================
#pragma once

#include <optional>
#include "kt/exterior_d.hpp"
#include "kt/hodge_star.hpp"

namespace kt {

struct ConstMetric {
    CQ h11, h12, h21, h22;

    static ConstMetric identity() { return {cq(1), cq(0), cq(0), cq(1)}; }
    // omega_tilde_a = omega_a + (a/2) Phi^{1 2b} - (a/2) Phi^{2 1b}
    static ConstMetric omegaTilde(const Rational& a) {
        return {cq(1), -cqi() * CQ(a), cqi() * CQ(a), cq(1)};
    }
    bool isHermitianPD() const;
};

// omega = (i/2) sum h_jk Phi^j ^ Phi^kbar
InvariantForm fundamentalForm(const AcsFrame& frame, const ConstMetric& h);

// exact star; throws std::domain_error for non-Hermitian-positive input
InvariantForm hodgeStar(const AcsFrame& frame, const ConstMetric& h, const InvariantForm& a);

// coefficient of e^{1234} (top-degree input required)
CQ integrate(const AcsFrame& frame, const InvariantForm& a);

// <a, omega>_h on 2-forms, with <omega,omega> = 2
CQ lambdaContract(const AcsFrame& frame, const ConstMetric& h, const InvariantForm& a);

struct LeeFormResult {
    InvariantForm theta;
    bool residualZero;        // d(omega) - theta ^ omega vanished exactly
};

// solves d(omega) = theta ^ omega; throws if omega is degenerate
LeeFormResult leeForm(const ExteriorD& D, const AcsFrame& frame, const ConstMetric& h);

// dd^c(omega); zero iff the metric is Gauduchon
InvariantForm gauduchonDefect(const ExteriorD& D, const AcsFrame& frame, const ConstMetric& h);

enum class MetricClass { AlmostKahler, GloballyConformallyKahler, StrictlyLCK, General };
const char* metricClassName(MetricClass c);

// theta expressed on the real coframe e^1..e^4
std::array<CQ, 4> toRealCoframe(const AcsFrame& frame, const InvariantForm& oneForm);

// Classification of an invariant metric. referenceHarmonic1Forms holds the
// e-coframe coefficient vectors of a d-harmonic 1-form basis for the
// reference metric sum e^j (x) e^j; exactness of theta is decided by those
// pairings.
MetricClass classifyInvariantMetric(const ExteriorD& D, const AcsFrame& frame,
                                    const ConstMetric& h,
                                    const std::vector<std::array<Rational, 4>>& referenceHarmonic1Forms);

} // namespace kt
