#include "kt/twisted_grid.hpp"

namespace kt {

TwistedGrid::TwistedGrid(int n, int n4) : n_(n), n4_(n4 > 0 ? n4 : n) {
    if (n < 1) throw std::invalid_argument("TwistedGrid: need n >= 1");
    validateTwist();
    buildNeighborTables();
}

void TwistedGrid::buildNeighborTables() {
    static const int offs[6] = {-3, -2, -1, 1, 2, 3};
    for (int axis = 0; axis < 4; ++axis)
        for (int k = 0; k < 6; ++k) {
            auto& t = nbr_[axis][k];
            t.resize(sites());
            for (std::size_t idx = 0; idx < sites(); ++idx) {
                auto c = coords(idx);
                c[axis] += offs[k];
                t[idx] = (uint32_t)wrap(c[0], c[1], c[2], c[3]);
            }
        }
}

void TwistedGrid::validateTwist() const {
    // single forward x1-wrap as a site permutation: bijective, and its n-fold
    // composite must be the identity (the x3 shear accumulates to n*i2 = 0 mod n)
    std::vector<uint8_t> seen(sites(), 0);
    for (std::size_t idx = 0; idx < sites(); ++idx) {
        auto c = coords(idx);
        std::size_t img = wrap(c[0] + n_, c[1], c[2], c[3]);
        if (seen[img]) throw std::logic_error("TwistedGrid: wrap is not a bijection");
        seen[img] = 1;
    }
    for (std::size_t idx = 0; idx < sites(); ++idx) {
        std::size_t img = idx;
        for (int k = 0; k < n_; ++k) {
            auto ci = coords(img);
            img = wrap(ci[0] + n_, ci[1], ci[2], ci[3]);
        }
        if (img != idx) throw std::logic_error("TwistedGrid: n-fold wrap is not the identity");
    }
}

} // namespace kt
