//==============================================================================
// invariant_form.hpp
// Exterior algebra over the complexified invariant coframe of a 4-dimensional
// Lie algebra. Basis 1-forms occupy fixed slots
//     slot 0 = Phi^1,  slot 1 = Phi^2,  slot 2 = Phi^1bar,  slot 3 = Phi^2bar,
// and a basis k-form is the wedge of its slots in increasing order, encoded as
// a 4-bit mask. An InvariantForm is a dense table of 16 exact complex-rational
// coefficients, one per mask, so mixed-degree sums are representable. The
// bidegree of mask m is (popcount(m & 0011), popcount(m & 1100)).
//==============================================================================
#pragma once

#include <array>
#include <bit>
#include <string>
#include <vector>
#include <stdexcept>
#include "kt/cx.hpp"

namespace kt {

namespace mask {

inline int degree(int m) { return std::popcount((unsigned)m); }
inline int pDeg(int m) { return std::popcount((unsigned)(m & 0b0011)); }
inline int qDeg(int m) { return std::popcount((unsigned)(m & 0b1100)); }

// Sign of reordering (a-slots, b-slots) into increasing order; 0 if they meet.
inline int wedgeSign(int a, int b) {
    if (a & b) return 0;
    int swaps = 0;
    for (int j = 0; j < 4; ++j) {
        if (!(b & (1 << j))) continue;
        // count slots of a strictly above j: each must hop over this b-slot
        swaps += std::popcount((unsigned)(a >> (j + 1)));
    }
    return (swaps & 1) ? -1 : 1;
}

// Conjugation swaps slot i <-> slot i+2; returns the sign of resorting.
inline int conjMask(int m, int& sign) {
    std::vector<int> slots;
    for (int j = 0; j < 4; ++j)
        if (m & (1 << j)) slots.push_back(j < 2 ? j + 2 : j - 2);
    sign = 1;
    for (size_t i = 0; i + 1 < slots.size(); ++i)
        for (size_t j = 0; j + 1 < slots.size() - i; ++j)
            if (slots[j] > slots[j + 1]) { std::swap(slots[j], slots[j + 1]); sign = -sign; }
    int out = 0;
    for (int s : slots) out |= 1 << s;
    return out;
}

std::string name(int m);                 // e.g. "Phi^{1 2b}"
std::vector<int> masksOfBidegree(int p, int q);
std::vector<int> masksOfDegree(int k);

} // namespace mask

struct InvariantForm {
    std::array<CQ, 16> c{};
    const void* frameTag = nullptr;   // set by frame-aware constructors; wedge/add check it

    InvariantForm() = default;

    static InvariantForm basis(int m, const void* tag = nullptr) {
        InvariantForm f;
        f.c[m] = cq(1);
        f.frameTag = tag;
        return f;
    }
    static InvariantForm scalar(const CQ& z) {
        InvariantForm f;
        f.c[0] = z;
        return f;
    }

    bool isZero() const {
        for (const auto& z : c) if (!z.isZero()) return false;
        return true;
    }

    // -1 for 0 or mixed degree
    int homogeneousDegree() const;
    // (p,q) if homogeneous of a single bidegree, else throws
    std::pair<int, int> bidegree() const;
    bool isBidegreeHomogeneous() const;

    InvariantForm part(int p, int q) const;     // bidegree projection
    InvariantForm degreePart(int k) const;

    InvariantForm conjugated() const;

    friend InvariantForm operator+(const InvariantForm& a, const InvariantForm& b);
    friend InvariantForm operator-(const InvariantForm& a, const InvariantForm& b);
    friend InvariantForm operator*(const CQ& s, const InvariantForm& a);
    InvariantForm operator-() const;

    friend bool operator==(const InvariantForm& a, const InvariantForm& b) { return a.c == b.c; }

    std::string str() const;
};

InvariantForm wedge(const InvariantForm& a, const InvariantForm& b);

// J acts on a (p,q)-form as multiplication by i^{q-p}; input must be
// bidegree-homogeneous componentwise (any form qualifies, the factor is
// applied per mask).
InvariantForm jAction(const InvariantForm& a);
CQ iPower(int k);

} // namespace kt
