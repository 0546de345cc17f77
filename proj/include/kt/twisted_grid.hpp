//==============================================================================
// twisted_grid.hpp
// Lattice on the fundamental domain [0,1)^4 of (Heisenberg / integer lattice)
// x S^1. Sites are (i1,i2,i3,i4)/N with x1,x2,x3 sharing one N (the twist is
// exact only then) and x4 allowed its own N4. Motion past the x1 boundary
// applies the deck transformation: a function on the quotient satisfies
// F(x1+1, x2, x3, x4) = F(x1, x2, x3 - x2, x4), so wrapping forward in x1
// shears the x3 index by -i2 (and by +i2 wrapping backward). All other axes
// are plainly periodic. The wrap is validated as a lattice bijection whose
// N-fold composite is the identity at construction.
//==============================================================================
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>
#include <complex>
#include <stdexcept>

namespace kt {

class TwistedGrid {
public:
    explicit TwistedGrid(int n, int n4 = 0);

    int n() const { return n_; }
    int n4() const { return n4_; }
    std::size_t sites() const { return (std::size_t)n_ * n_ * n_ * n4_; }

    // in-range index; i4 fastest
    std::size_t index(int i1, int i2, int i3, int i4) const {
        return (((std::size_t)i1 * n_ + i2) * n_ + i3) * n4_ + i4;
    }

    // arbitrary integer offsets, with the x1 twist
    std::size_t wrap(int i1, int i2, int i3, int i4) const {
        i2 = mod(i2, n_);
        while (i1 >= n_) { i1 -= n_; i3 -= i2; }
        while (i1 < 0) { i1 += n_; i3 += i2; }
        return index(i1, i2, mod(i3, n_), mod(i4, n4_));
    }

    std::array<int, 4> coords(std::size_t idx) const {
        int i4 = (int)(idx % n4_); idx /= n4_;
        int i3 = (int)(idx % n_); idx /= n_;
        int i2 = (int)(idx % n_); idx /= n_;
        return {(int)idx, i2, i3, i4};
    }

    std::array<double, 4> point(std::size_t idx) const {
        auto c = coords(idx);
        return {(double)c[0] / n_, (double)c[1] / n_, (double)c[2] / n_, (double)c[3] / n4_};
    }

    static std::shared_ptr<const TwistedGrid> make(int n, int n4 = 0) {
        return std::make_shared<const TwistedGrid>(n, n4);
    }

    // precomputed neighbor indices for stencil offsets -3..3 (skipping 0);
    // nbr(axis, off) with off in {-3,-2,-1,1,2,3}
    const std::vector<uint32_t>& nbr(int axis, int off) const {
        return nbr_[axis][off < 0 ? off + 3 : off + 2];
    }

private:
    int n_, n4_;
    std::array<std::array<std::vector<uint32_t>, 6>, 4> nbr_;

    static int mod(int a, int m) {
        int r = a % m;
        return r < 0 ? r + m : r;
    }

    void validateTwist() const;
    void buildNeighborTables();
};

using GridData = std::vector<std::complex<double>>;

} // namespace kt
