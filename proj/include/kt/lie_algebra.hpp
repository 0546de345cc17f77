//==============================================================================
// lie_algebra.hpp
// Structure constants of a 4-dimensional nilpotent (or solvable) Lie algebra,
// given through the differentials of the invariant coframe:
//     de^k = - sum_{i<j} c^k_{ij} e^i ^ e^j .
// The Kodaira-Thurston algebra ships as a preset (only [e1,e2] = e3, i.e.
// c^3_{12} = 1). validate() checks d о d = 0 on the real invariant complex,
// which is equivalent to the Jacobi identity.
//==============================================================================
#pragma once

#include <array>
#include <string>
#include <optional>
#include "kt/rational.hpp"

namespace kt {

class NilLieAlgebra {
public:
    static constexpr int dim = 4;

    NilLieAlgebra() = default;

    // c^k_{ij} with i < j; k, i, j are 1-based here to match the usual notation
    void setC(int k, int i, int j, const Rational& v);
    Rational getC(int k, int i, int j) const;

    static NilLieAlgebra kodairaThurston();
    static NilLieAlgebra abelian();

    // Returns an empty optional when d^2 = 0 holds on all e^k; otherwise a
    // human-readable witness of the first failure.
    std::optional<std::string> d2Defect() const;
    bool isValid() const { return !d2Defect().has_value(); }

private:
    // storage: c_[k][pairIndex(i,j)], 0-based k, pairs (0,1),(0,2),(0,3),(1,2),(1,3),(2,3)
    std::array<std::array<Rational, 6>, 4> c_{};

    static int pairIndex(int i, int j); // 0-based i<j
    friend class AcsFrame;
    friend class RealComplex;
public:
    // d e^k as coefficients on the 6 real 2-form pairs (0-based pair order above)
    std::array<Rational, 6> dRealCoframe(int k0) const;
};

} // namespace kt
