#include "kt/lie_algebra.hpp"
#include <stdexcept>

namespace kt {

int NilLieAlgebra::pairIndex(int i, int j) {
    static const int idx[4][4] = {
        {-1, 0, 1, 2},
        {-1, -1, 3, 4},
        {-1, -1, -1, 5},
        {-1, -1, -1, -1}};
    if (i < 0 || j > 3 || i >= j) throw std::invalid_argument("NilLieAlgebra: bad pair");
    return idx[i][j];
}

void NilLieAlgebra::setC(int k, int i, int j, const Rational& v) {
    if (k < 1 || k > 4) throw std::invalid_argument("NilLieAlgebra: bad index k");
    if (i >= j) throw std::invalid_argument("NilLieAlgebra: need i < j");
    c_[k - 1][pairIndex(i - 1, j - 1)] = v;
}

Rational NilLieAlgebra::getC(int k, int i, int j) const {
    return c_[k - 1][pairIndex(i - 1, j - 1)];
}

NilLieAlgebra NilLieAlgebra::kodairaThurston() {
    NilLieAlgebra a;
    a.setC(3, 1, 2, Rational(1));   // de^3 = -e^1 ^ e^2
    return a;
}

NilLieAlgebra NilLieAlgebra::abelian() { return NilLieAlgebra{}; }

std::array<Rational, 6> NilLieAlgebra::dRealCoframe(int k0) const {
    std::array<Rational, 6> out{};
    for (int p = 0; p < 6; ++p) out[p] = -c_[k0][p];
    return out;
}

// d^2 e^k lands in 3-forms; expand d(e^i ^ e^j) = de^i ^ e^j - e^i ^ de^j
// and collect on the four 3-form basis elements e^{abc}, a<b<c.
std::optional<std::string> NilLieAlgebra::d2Defect() const {
    static const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (int k = 0; k < 4; ++k) {
        // triple index: mask over 4 bits with 3 set
        std::array<Rational, 16> acc{};
        for (int p = 0; p < 6; ++p) {
            Rational w = -c_[k][p];
            if (w.isZero()) continue;
            int i = pairs[p][0], j = pairs[p][1];
            // de^i ^ e^j
            for (int q = 0; q < 6; ++q) {
                Rational v = -c_[i][q];
                if (v.isZero()) continue;
                int a = pairs[q][0], b = pairs[q][1];
                if (a == j || b == j) continue;
                // sign of sorting (a,b,j)
                int arr[3] = {a, b, j};
                int sgn = 1;
                for (int s = 0; s < 2; ++s)
                    for (int t = 0; t < 2 - s; ++t)
                        if (arr[t] > arr[t + 1]) { std::swap(arr[t], arr[t + 1]); sgn = -sgn; }
                int m = (1 << arr[0]) | (1 << arr[1]) | (1 << arr[2]);
                acc[m] += (sgn > 0 ? w * v : -(w * v));
            }
            // - e^i ^ de^j
            for (int q = 0; q < 6; ++q) {
                Rational v = -c_[j][q];
                if (v.isZero()) continue;
                int a = pairs[q][0], b = pairs[q][1];
                if (a == i || b == i) continue;
                int arr[3] = {i, a, b};
                int sgn = 1;
                for (int s = 0; s < 2; ++s)
                    for (int t = 0; t < 2 - s; ++t)
                        if (arr[t] > arr[t + 1]) { std::swap(arr[t], arr[t + 1]); sgn = -sgn; }
                int m = (1 << arr[0]) | (1 << arr[1]) | (1 << arr[2]);
                acc[m] -= (sgn > 0 ? w * v : -(w * v));
            }
        }
        for (int m = 0; m < 16; ++m) {
            if (!acc[m].isZero()) {
                std::string names;
                for (int b = 0; b < 4; ++b)
                    if (m & (1 << b)) names += std::to_string(b + 1);
                return "d^2 e^" + std::to_string(k + 1) + " has component " +
                       acc[m].str() + " on e^{" + names + "}";
            }
        }
    }
    return std::nullopt;
}

} // namespace kt
