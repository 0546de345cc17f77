#include "kt/invariant_form.hpp"

namespace kt {

namespace mask {

std::string name(int m) {
    if (m == 0) return "1";
    static const char* slotName[4] = {"1", "2", "1b", "2b"};
    std::string s = "Phi^{";
    bool first = true;
    for (int j = 0; j < 4; ++j) {
        if (!(m & (1 << j))) continue;
        if (!first) s += " ";
        s += slotName[j];
        first = false;
    }
    return s + "}";
}

std::vector<int> masksOfBidegree(int p, int q) {
    std::vector<int> out;
    for (int m = 0; m < 16; ++m)
        if (pDeg(m) == p && qDeg(m) == q) out.push_back(m);
    return out;
}

std::vector<int> masksOfDegree(int k) {
    std::vector<int> out;
    for (int m = 0; m < 16; ++m)
        if (degree(m) == k) out.push_back(m);
    return out;
}

} // namespace mask

static const void* mergeTags(const void* a, const void* b) {
    if (a && b && a != b)
        throw std::invalid_argument("InvariantForm: mismatched frames");
    return a ? a : b;
}

int InvariantForm::homogeneousDegree() const {
    int deg = -1;
    for (int m = 0; m < 16; ++m) {
        if (c[m].isZero()) continue;
        int d = mask::degree(m);
        if (deg == -1) deg = d;
        else if (deg != d) return -1;
    }
    return deg;
}

bool InvariantForm::isBidegreeHomogeneous() const {
    int p = -1, q = -1;
    for (int m = 0; m < 16; ++m) {
        if (c[m].isZero()) continue;
        if (p == -1) { p = mask::pDeg(m); q = mask::qDeg(m); }
        else if (p != mask::pDeg(m) || q != mask::qDeg(m)) return false;
    }
    return true;
}

std::pair<int, int> InvariantForm::bidegree() const {
    if (!isBidegreeHomogeneous())
        throw std::invalid_argument("InvariantForm: not bidegree-homogeneous");
    for (int m = 0; m < 16; ++m)
        if (!c[m].isZero()) return {mask::pDeg(m), mask::qDeg(m)};
    return {0, 0};
}

InvariantForm InvariantForm::part(int p, int q) const {
    InvariantForm f;
    f.frameTag = frameTag;
    for (int m = 0; m < 16; ++m)
        if (mask::pDeg(m) == p && mask::qDeg(m) == q) f.c[m] = c[m];
    return f;
}

InvariantForm InvariantForm::degreePart(int k) const {
    InvariantForm f;
    f.frameTag = frameTag;
    for (int m = 0; m < 16; ++m)
        if (mask::degree(m) == k) f.c[m] = c[m];
    return f;
}

InvariantForm InvariantForm::conjugated() const {
    InvariantForm f;
    f.frameTag = frameTag;
    for (int m = 0; m < 16; ++m) {
        if (c[m].isZero()) continue;
        int sign;
        int cm = mask::conjMask(m, sign);
        CQ z = conjOf(c[m]);
        f.c[cm] = f.c[cm] + (sign < 0 ? -z : z);
    }
    return f;
}

InvariantForm operator+(const InvariantForm& a, const InvariantForm& b) {
    InvariantForm f;
    f.frameTag = mergeTags(a.frameTag, b.frameTag);
    for (int m = 0; m < 16; ++m) f.c[m] = a.c[m] + b.c[m];
    return f;
}

InvariantForm operator-(const InvariantForm& a, const InvariantForm& b) {
    InvariantForm f;
    f.frameTag = mergeTags(a.frameTag, b.frameTag);
    for (int m = 0; m < 16; ++m) f.c[m] = a.c[m] - b.c[m];
    return f;
}

InvariantForm operator*(const CQ& s, const InvariantForm& a) {
    InvariantForm f;
    f.frameTag = a.frameTag;
    for (int m = 0; m < 16; ++m) f.c[m] = s * a.c[m];
    return f;
}

InvariantForm InvariantForm::operator-() const {
    InvariantForm f;
    f.frameTag = frameTag;
    for (int m = 0; m < 16; ++m) f.c[m] = -c[m];
    return f;
}

InvariantForm wedge(const InvariantForm& a, const InvariantForm& b) {
    InvariantForm f;
    f.frameTag = mergeTags(a.frameTag, b.frameTag);
    for (int ma = 0; ma < 16; ++ma) {
        if (a.c[ma].isZero()) continue;
        for (int mb = 0; mb < 16; ++mb) {
            if (b.c[mb].isZero()) continue;
            int s = mask::wedgeSign(ma, mb);
            if (s == 0) continue;
            CQ z = a.c[ma] * b.c[mb];
            f.c[ma | mb] = f.c[ma | mb] + (s < 0 ? -z : z);
        }
    }
    return f;
}

CQ iPower(int k) {
    k = ((k % 4) + 4) % 4;
    switch (k) {
        case 0: return cq(1);
        case 1: return cqi();
        case 2: return cq(-1);
        default: return -cqi();
    }
}

InvariantForm jAction(const InvariantForm& a) {
    InvariantForm f;
    f.frameTag = a.frameTag;
    for (int m = 0; m < 16; ++m) {
        if (a.c[m].isZero()) continue;
        f.c[m] = iPower(mask::qDeg(m) - mask::pDeg(m)) * a.c[m];
    }
    return f;
}

std::string InvariantForm::str() const {
    std::string s;
    for (int m = 0; m < 16; ++m) {
        if (c[m].isZero()) continue;
        if (!s.empty()) s += "  +  ";
        s += "(" + cqStr(c[m]) + ") " + mask::name(m);
    }
    return s.empty() ? "0" : s;
}

} // namespace kt
