#include "kt/field_operator.hpp"
#include "kt/parallel.hpp"
#include <random>
#include <set>

namespace kt {

const std::vector<int>& masks11() {
    static const std::vector<int> m = {0b0101, 0b1001, 0b0110, 0b1010};   // A, B, L, M slots
    return m;
}
const std::vector<int>& masks2() {
    static const std::vector<int> m = {0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100};
    return m;
}
const std::vector<int>& masks3() {
    static const std::vector<int> m = {0b0111, 0b1011, 0b1101, 0b1110};
    return m;
}

// exact d of a basis form, rebuilt from the geometry's structure tables
static InvariantForm exactDBasis(const FieldGeometry& geom, int m) {
    InvariantForm out;
    int pos = 0;
    for (int s = 0; s < 4; ++s) {
        if (!(m & (1 << s))) continue;
        InvariantForm term = InvariantForm::scalar(pos % 2 == 0 ? cq(1) : cq(-1));
        for (int t = 0; t < 4; ++t) {
            if (!(m & (1 << t))) continue;
            term = wedge(term, t == s ? geom.dPhiExact[t] : InvariantForm::basis(1 << t));
        }
        out = out + term;
        ++pos;
    }
    return out;
}

DerivBlock buildDerivBlock(const FieldGeometry& geom, const std::vector<int>& inMasks,
                           DShift shift) {
    DerivBlock b;
    std::size_t ni = inMasks.size();
    auto slotWanted = [&](int s, int) {
        if (shift == DShift::FullD) return true;
        return shift == DShift::Partial ? (s < 2) : (s >= 2);
    };
    std::set<int> outs;
    std::vector<InvariantForm> dS(ni);
    for (std::size_t c = 0; c < ni; ++c) {
        int S = inMasks[c];
        int p = mask::pDeg(S), q = mask::qDeg(S);
        for (int s = 0; s < 4; ++s) {
            if (!slotWanted(s, S) || mask::wedgeSign(1 << s, S) == 0) continue;
            outs.insert((1 << s) | S);
        }
        InvariantForm d = exactDBasis(geom, S);
        if (shift != DShift::FullD) {
            int dp = (shift == DShift::Partial) ? 1 : 0;
            int dq = 1 - dp;
            d = d.part(p + dp, q + dq);
        }
        dS[c] = d;
        for (int t = 0; t < 16; ++t)
            if (!d.c[t].isZero()) outs.insert(t);
    }
    b.outMasks.assign(outs.begin(), outs.end());
    std::size_t no = b.outMasks.size();
    auto rowOf = [&](int t) {
        for (std::size_t r = 0; r < no; ++r)
            if (b.outMasks[r] == t) return r;
        throw std::logic_error("buildDerivBlock: missing output mask");
    };
    b.zerothExact.assign(no * ni, CQ{});
    b.firstVExact.assign(no * ni * 4, CQ{});
    for (std::size_t c = 0; c < ni; ++c) {
        int S = inMasks[c];
        for (int s = 0; s < 4; ++s) {
            if (!slotWanted(s, S)) continue;
            int sgn = mask::wedgeSign(1 << s, S);
            if (sgn == 0) continue;
            std::size_t r = rowOf((1 << s) | S);
            b.firstVExact[(r * ni + c) * 4 + s] += CQ(Rational(sgn));
        }
        for (int t = 0; t < 16; ++t)
            if (!dS[c].c[t].isZero()) b.zerothExact[rowOf(t) * ni + c] += dS[c].c[t];
    }
    b.zeroth.resize(no * ni);
    for (std::size_t i = 0; i < no * ni; ++i) b.zeroth[i] = toComplex(b.zerothExact[i]);
    for (int k = 0; k < 4; ++k) {
        b.first[k].assign(no * ni, cd(0.0));
        for (std::size_t r = 0; r < no; ++r)
            for (std::size_t c = 0; c < ni; ++c) {
                CQ acc{};
                for (int s = 0; s < 4; ++s)
                    acc += b.firstVExact[(r * ni + c) * 4 + s] * geom.Vexact[s][k];
                b.first[k][r * ni + c] = toComplex(acc);
            }
    }
    return b;
}

void applyNullPenalty(const TwistedGrid& g, const cd* u, cd* out) {
    std::size_t s = g.sites();
    for (std::size_t i = 0; i < s; ++i) out[i] = cd(0.0);
    // undivided per-axis (D^4 - D^6/2): stencil (-1/2, 4, -23/2, 16, -23/2, 4, -1/2)
    for (int axis = 0; axis < 4; ++axis) {
        const uint32_t* m3 = g.nbr(axis, -3).data();
        const uint32_t* m2 = g.nbr(axis, -2).data();
        const uint32_t* m1 = g.nbr(axis, -1).data();
        const uint32_t* p1 = g.nbr(axis, 1).data();
        const uint32_t* p2 = g.nbr(axis, 2).data();
        const uint32_t* p3 = g.nbr(axis, 3).data();
        parallelFor(s, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i)
                out[i] += 16.0 * u[i] - 11.5 * (u[m1[i]] + u[p1[i]]) + 4.0 * (u[m2[i]] + u[p2[i]]) -
                          0.5 * (u[m3[i]] + u[p3[i]]);
        });
    }
}

namespace {

// axis differences of one flat component; E1..E4 derived from d1..d4
struct FrameDerivs {
    GridData d[4];
    void compute(const TwistedGrid& g, const cd* u) {
        GridData tmp(u, u + g.sites());
        for (int axis = 0; axis < 4; ++axis) d[axis] = axisDiff(g, tmp, axis);
    }
    // E_k combination written into e[k]
    void frame(const TwistedGrid& g, std::array<GridData, 4>& e) const {
        e[0] = d[0];
        e[1] = d[1];
        {
            std::size_t slab = (std::size_t)g.n() * g.n() * g.n4();
            std::size_t idx = 0;
            for (int i1 = 0; i1 < g.n(); ++i1) {
                double x1 = (double)i1 / g.n();
                for (std::size_t j = 0; j < slab; ++j, ++idx) e[1][idx] += x1 * d[2][idx];
            }
        }
        e[2] = d[2];
        e[3] = d[3];
    }
};

// adjoint of E_k is -E_k (antisymmetric stencils; x1 weight commutes with d3)
GridData frameDerivAdjoint(const TwistedGrid& g, const GridData& w, int k) {
    if (k == 2) {
        GridData wx = w;
        std::size_t slab = (std::size_t)g.n() * g.n() * g.n4();
        std::size_t idx = 0;
        for (int i1 = 0; i1 < g.n(); ++i1) {
            double x1 = (double)i1 / g.n();
            for (std::size_t j = 0; j < slab; ++j, ++idx) wx[idx] *= x1;
        }
        GridData out = axisDiff(g, w, 1);
        GridData d3 = axisDiff(g, wx, 2);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = -(out[i] + d3[i]);
        return out;
    }
    int axis = (k == 1) ? 0 : (k == 3 ? 2 : 3);
    GridData out = axisDiff(g, w, axis);
    for (auto& z : out) z = -z;
    return out;
}

} // namespace

std::size_t FieldSystem::nOutComponents() const {
    std::size_t n = nIn();   // penalty rows
    for (const auto& b : blocks_) n += b.rows();
    return n;
}

void FieldSystem::applyStar(const cd* x, cd* sx) const {
    std::size_t s = sites(), ni = nIn();
    parallelFor(s, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const cd* M = star_.at(i);
            for (std::size_t r = 0; r < ni; ++r) {
                cd acc = 0.0;
                for (std::size_t c = 0; c < ni; ++c) acc += M[r * ni + c] * x[c * s + i];
                sx[r * s + i] = acc;
            }
        }
    });
}

void FieldSystem::applyStarAdjoint(const cd* g, cd* x) const {
    std::size_t s = sites(), ni = nIn();
    parallelFor(s, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const cd* M = star_.at(i);
            for (std::size_t c = 0; c < ni; ++c) {
                cd acc = 0.0;
                for (std::size_t r = 0; r < ni; ++r) acc += std::conj(M[r * ni + c]) * g[r * s + i];
                x[c * s + i] += acc;
            }
        }
    });
}

void FieldSystem::apply(const cd* x, cd* y) const {
    const TwistedGrid& g = *grid_;
    std::size_t s = sites(), ni = nIn();
    std::size_t total = nOutComponents() * s;
    for (std::size_t i = 0; i < total; ++i) y[i] = cd(0.0);

    std::vector<cd> sx;
    if (hasStar_) {
        sx.resize(ni * s);
        applyStar(x, sx.data());
    }
    // derivative blocks, grouped by source (plain or starred)
    for (int pass = 0; pass < 2; ++pass) {
        const cd* src = pass == 0 ? x : (hasStar_ ? sx.data() : nullptr);
        if (!src) continue;
        bool needed = false;
        for (const auto& b : blocks_)
            if (b.viaStar == (pass == 1)) needed = true;
        if (!needed) continue;
        for (std::size_t c = 0; c < ni; ++c) {
            FrameDerivs fd;
            fd.compute(g, src + c * s);
            std::array<GridData, 4> e;
            fd.frame(g, e);
            std::size_t rowBase = 0;
            for (const auto& b : blocks_) {
                if (b.viaStar != (pass == 1)) { rowBase += b.rows(); continue; }
                for (std::size_t r = 0; r < b.rows(); ++r) {
                    cd* dst = y + (rowBase + r) * s;
                    cd z = b.zeroth[r * ni + c];
                    if (z != cd(0.0))
                        for (std::size_t i = 0; i < s; ++i) dst[i] += z * src[c * s + i];
                    for (int k = 0; k < 4; ++k) {
                        cd f = b.first[k][r * ni + c];
                        if (f == cd(0.0)) continue;
                        const GridData& ek = e[k];
                        for (std::size_t i = 0; i < s; ++i) dst[i] += f * ek[i];
                    }
                }
                rowBase += b.rows();
            }
        }
    }
    // penalty rows
    std::size_t rowBase = 0;
    for (const auto& b : blocks_) rowBase += b.rows();
    if (kappa_ != 0.0) {
        GridData q(s);
        for (std::size_t c = 0; c < ni; ++c) {
            applyNullPenalty(g, x + c * s, q.data());
            cd* dst = y + (rowBase + c) * s;
            for (std::size_t i = 0; i < s; ++i) dst[i] = kappa_ * q[i];
        }
    }
}

void FieldSystem::applyAdjoint(const cd* y, cd* x) const {
    const TwistedGrid& g = *grid_;
    std::size_t s = sites(), ni = nIn();
    for (std::size_t i = 0; i < ni * s; ++i) x[i] = cd(0.0);

    std::vector<cd> gstar(hasStar_ ? ni * s : 0, cd(0.0));
    for (int pass = 0; pass < 2; ++pass) {
        cd* dstBase = pass == 0 ? x : (hasStar_ ? gstar.data() : nullptr);
        if (!dstBase) continue;
        std::size_t rowBase = 0;
        for (const auto& b : blocks_) {
            if (b.viaStar != (pass == 1)) { rowBase += b.rows(); continue; }
            for (std::size_t c = 0; c < ni; ++c) {
                // zeroth part
                for (std::size_t r = 0; r < b.rows(); ++r) {
                    cd z = std::conj(b.zeroth[r * ni + c]);
                    if (z == cd(0.0)) continue;
                    const cd* src = y + (rowBase + r) * s;
                    cd* dst = dstBase + c * s;
                    for (std::size_t i = 0; i < s; ++i) dst[i] += z * src[i];
                }
                // first-order: w_k = sum_r conj(F_k) y_r, then -E_k(w_k)
                for (int k = 0; k < 4; ++k) {
                    bool any = false;
                    for (std::size_t r = 0; r < b.rows(); ++r)
                        if (b.first[k][r * ni + c] != cd(0.0)) any = true;
                    if (!any) continue;
                    GridData w(s, cd(0.0));
                    for (std::size_t r = 0; r < b.rows(); ++r) {
                        cd f = std::conj(b.first[k][r * ni + c]);
                        if (f == cd(0.0)) continue;
                        const cd* src = y + (rowBase + r) * s;
                        for (std::size_t i = 0; i < s; ++i) w[i] += f * src[i];
                    }
                    GridData adj = frameDerivAdjoint(g, w, k + 1);
                    cd* dst = dstBase + c * s;
                    for (std::size_t i = 0; i < s; ++i) dst[i] += adj[i];
                }
            }
            rowBase += b.rows();
        }
    }
    if (hasStar_) applyStarAdjoint(gstar.data(), x);
    // penalty adjoint
    std::size_t rowBase = 0;
    for (const auto& b : blocks_) rowBase += b.rows();
    if (kappa_ != 0.0) {
        GridData q(s);
        for (std::size_t c = 0; c < ni; ++c) {
            applyNullPenalty(g, y + (rowBase + c) * s, q.data());
            cd* dst = x + c * s;
            for (std::size_t i = 0; i < s; ++i) dst[i] += kappa_ * q[i];
        }
    }
}

void FieldSystem::applyNormal(const cd* x, cd* out, std::vector<cd>& scratch) const {
    scratch.resize(rangeDim());
    apply(x, scratch.data());
    applyAdjoint(scratch.data(), out);
}

FieldForm FieldSystem::unflatten(const cd* x) const {
    FieldForm f(grid_);
    std::size_t s = sites();
    for (std::size_t c = 0; c < nIn(); ++c) {
        GridData& v = f.ensure(inMasks_[c]);
        std::copy(x + c * s, x + (c + 1) * s, v.begin());
    }
    return f;
}

void FieldSystem::flatten(const FieldForm& f, cd* x) const {
    if (f.grid.get() != grid_.get() &&
        (f.grid->n() != grid_->n() || f.grid->n4() != grid_->n4()))
        throw std::invalid_argument("FieldSystem: grid mismatch");
    std::size_t s = sites();
    for (const auto& [m, v] : f.comp) {
        (void)v;
        bool known = false;
        for (int im : inMasks_) known = known || (im == m);
        if (!known) throw std::invalid_argument("FieldSystem: component outside the system bidegree");
    }
    for (std::size_t c = 0; c < nIn(); ++c) {
        const GridData* v = f.find(inMasks_[c]);
        if (v) std::copy(v->begin(), v->end(), x + c * s);
        else std::fill(x + c * s, x + (c + 1) * s, cd(0.0));
    }
}

double FieldSystem::residual(const FieldForm& candidate) const {
    std::vector<cd> x(domainDim()), y(rangeDim());
    flatten(candidate, x.data());
    double nx = 0.0;
    for (const auto& z : x) nx += std::norm(z);
    if (nx == 0.0) throw std::invalid_argument("FieldSystem: zero candidate");
    apply(x.data(), y.data());
    double ny = 0.0;
    for (const auto& z : y) ny += std::norm(z);
    return std::sqrt(ny / nx);
}

double FieldSystem::coefficientDistance(const FieldSystem& other) const {
    if (inMasks_ != other.inMasks_ || blocks_.size() != other.blocks_.size())
        return 1.0;
    double scale = std::abs(kappa_), diff = std::abs(kappa_ - other.kappa_);
    auto fold = [&](const std::vector<cd>& a, const std::vector<cd>& b) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
            diff = std::max(diff, std::abs(a[i] - b[i]));
        }
    };
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
        fold(blocks_[bi].zeroth, other.blocks_[bi].zeroth);
        for (int k = 0; k < 4; ++k) fold(blocks_[bi].first[k], other.blocks_[bi].first[k]);
    }
    // star blocks may mix constant and per-site storage; compare pointwise
    std::size_t nblk = nIn() * nIn();
    std::size_t blocksA = star_.m.size() / nblk, blocksB = other.star_.m.size() / nblk;
    if (star_.m.size() % nblk || other.star_.m.size() % nblk) return 1.0;
    std::size_t total = std::max(blocksA, blocksB);
    if ((blocksA != total && blocksA != 1) || (blocksB != total && blocksB != 1)) return 1.0;
    for (std::size_t s = 0; s < total; ++s) {
        const cd* pa = star_.m.data() + (blocksA == 1 ? 0 : s * nblk);
        const cd* pb = other.star_.m.data() + (blocksB == 1 ? 0 : s * nblk);
        for (std::size_t i = 0; i < nblk; ++i) {
            scale = std::max({scale, std::abs(pa[i]), std::abs(pb[i])});
            diff = std::max(diff, std::abs(pa[i] - pb[i]));
        }
    }
    return scale == 0.0 ? 0.0 : diff / scale;
}

void FieldSystem::checkLinearity(unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::size_t nd = domainDim(), nr = rangeDim();
    std::vector<cd> u(nd), v(nd), w(nd), yu(nr), yv(nr), yw(nr);
    for (std::size_t i = 0; i < nd; ++i) {
        u[i] = {U(rng), U(rng)};
        v[i] = {U(rng), U(rng)};
    }
    cd a(0.7, -0.3), b(-1.1, 0.2);
    for (std::size_t i = 0; i < nd; ++i) w[i] = a * u[i] + b * v[i];
    apply(u.data(), yu.data());
    apply(v.data(), yv.data());
    apply(w.data(), yw.data());
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < nr; ++i) {
        worst = std::max(worst, std::abs(yw[i] - a * yu[i] - b * yv[i]));
        scale = std::max(scale, std::abs(yw[i]));
    }
    linearityDefect_ = scale > 0.0 ? worst / scale : 0.0;
    if (linearityDefect_ > 1e-12)
        throw std::logic_error("FieldSystem: linearity check failed");
}

// restrict a StarBlock to a square map on the given masks; off-span rows must vanish
static StarBlock squareStar(const StarBlock& blk, const std::vector<int>& masks,
                            bool addIdentity) {
    std::size_t ni = masks.size(), noFull = blk.outMasks.size();
    std::vector<std::size_t> rowOf(ni);
    for (std::size_t r = 0; r < ni; ++r) {
        bool found = false;
        for (std::size_t q = 0; q < noFull; ++q)
            if (blk.outMasks[q] == masks[r]) { rowOf[r] = q; found = true; }
        if (!found) throw std::logic_error("squareStar: star image misses a required mask");
    }
    double scale = 0.0, offSpan = 0.0;
    for (const auto& z : blk.m) scale = std::max(scale, std::abs(z));
    StarBlock sq;
    sq.inMasks = masks;
    sq.outMasks = masks;
    sq.constant = blk.constant;
    std::size_t blocks = blk.constant ? 1 : blk.m.size() / (ni * noFull);
    sq.m.assign(blocks * ni * ni, cd(0.0));
    for (std::size_t s = 0; s < blocks; ++s) {
        const cd* src = blk.m.data() + s * noFull * ni;
        cd* dst = sq.m.data() + s * ni * ni;
        std::vector<bool> kept(noFull, false);
        for (std::size_t r = 0; r < ni; ++r) {
            kept[rowOf[r]] = true;
            for (std::size_t c = 0; c < ni; ++c) {
                dst[r * ni + c] = src[rowOf[r] * ni + c];
                if (addIdentity && r == c) dst[r * ni + c] += 1.0;
            }
        }
        for (std::size_t q = 0; q < noFull; ++q) {
            if (kept[q]) continue;
            for (std::size_t c = 0; c < ni; ++c)
                offSpan = std::max(offSpan, std::abs(src[q * ni + c]));
        }
    }
    if (offSpan > 1e-12 * scale)
        throw std::logic_error("squareStar: star does not preserve the component span");
    return sq;
}

FieldSystem FieldSystem::harmonic11(const FieldGeometry& geom, const MetricField& h,
                                    double nullPenalty) {
    FieldSystem sys;
    sys.grid_ = geom.grid;
    sys.geom_ = geom;
    sys.inMasks_ = masks11();
    if (std::min(geom.grid->n(), geom.grid->n4()) < 7)
        throw std::invalid_argument("FieldSystem: need at least 7 points per axis");
    DerivBlock dbar = buildDerivBlock(geom, sys.inMasks_, DShift::Dbar);
    DerivBlock dstar = buildDerivBlock(geom, sys.inMasks_, DShift::Partial);
    dstar.viaStar = true;
    sys.blocks_ = {dbar, dstar};
    sys.star_ = squareStar(makeStarBlock(geom, h, sys.inMasks_), sys.inMasks_, false);
    sys.hasStar_ = true;
    sys.kappa_ = nullPenalty;
    sys.checkLinearity(20240501);
    return sys;
}

FieldSystem FieldSystem::asd2(const FieldGeometry& geom, const MetricField& h,
                              double nullPenalty) {
    FieldSystem sys;
    sys.grid_ = geom.grid;
    sys.geom_ = geom;
    sys.inMasks_ = masks2();
    if (std::min(geom.grid->n(), geom.grid->n4()) < 7)
        throw std::invalid_argument("FieldSystem: need at least 7 points per axis");
    DerivBlock d = buildDerivBlock(geom, sys.inMasks_, DShift::FullD);
    DerivBlock asd;   // pointwise rows: identity applied to (star + 1) gamma
    asd.viaStar = true;
    asd.outMasks = sys.inMasks_;
    std::size_t ni = sys.inMasks_.size();
    asd.zeroth.assign(ni * ni, cd(0.0));
    asd.zerothExact.assign(ni * ni, CQ{});
    asd.firstVExact.assign(ni * ni * 4, CQ{});
    for (int k = 0; k < 4; ++k) asd.first[k].assign(ni * ni, cd(0.0));
    for (std::size_t i = 0; i < ni; ++i) {
        asd.zeroth[i * ni + i] = 1.0;
        asd.zerothExact[i * ni + i] = cq(1);
    }
    sys.blocks_ = {d, asd};
    sys.star_ = squareStar(makeStarBlock(geom, h, sys.inMasks_), sys.inMasks_, true);
    sys.hasStar_ = true;
    sys.kappa_ = nullPenalty;
    sys.checkLinearity(20240502);
    return sys;
}

} // namespace kt
