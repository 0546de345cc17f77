//==============================================================================
// exterior_d.hpp
// The exterior derivative on invariant forms for a fixed (algebra, frame)
// pair, its splitting d = mu + del + dbar + mubar by bidegree shift, the
// structure-equation table, the seven anticommutation identities that encode
// d^2 = 0 on the bigraded complex, and the integrability test mu = mubar = 0.
//==============================================================================
#pragma once

#include <array>
#include <string>
#include <vector>
#include "kt/lie_algebra.hpp"
#include "kt/acs_frame.hpp"
#include "kt/invariant_form.hpp"

namespace kt {

struct DSplit {
    InvariantForm mu;       // (p+2, q-1)
    InvariantForm partial;  // (p+1, q)
    InvariantForm dbar;     // (p, q+1)
    InvariantForm mubar;    // (p-1, q+2)
};

class ExteriorD {
public:
    ExteriorD(const NilLieAlgebra& alg, const AcsFrame& frame);

    const NilLieAlgebra& algebra() const { return *alg_; }
    const AcsFrame& frame() const { return *frame_; }

    // d of the complex coframe 1-form in slot s (0..3)
    const InvariantForm& dCoframe(int s) const { return dPhi_[s]; }

    InvariantForm d(const InvariantForm& a) const;

    // requires a (p,q)-homogeneous input
    DSplit splitD(const InvariantForm& a) const;

    InvariantForm mu(const InvariantForm& a) const;
    InvariantForm partial(const InvariantForm& a) const;
    InvariantForm dbar(const InvariantForm& a) const;
    InvariantForm mubar(const InvariantForm& a) const;

    // d^c = -J^{-1} d J
    InvariantForm dc(const InvariantForm& a) const;

    bool isIntegrable() const;

    struct IdentityReport {
        std::array<bool, 7> holds;
        bool all() const { for (bool b : holds) if (!b) return false; return true; }
        static const std::array<std::string, 7>& names();
    };
    // checks the seven relations forced by d^2 = 0 on every basis form
    IdentityReport verifyD2Identities() const;

    // structure-equation table: row i in {0,1} lists the coefficients of
    // dPhi^{i+1} on the canonical 2-form masks
    struct StructureRow { int coframeSlot; std::vector<std::pair<int, CQ>> terms; };
    std::vector<StructureRow> structureEquations() const;

private:
    const NilLieAlgebra* alg_;
    const AcsFrame* frame_;
    std::array<InvariantForm, 4> dPhi_;

    InvariantForm dBasis(int m) const;   // d of a basis k-form
    mutable std::array<InvariantForm, 16> dBasisCache_;
    mutable std::array<bool, 16> dBasisReady_{};
};

} // namespace kt
