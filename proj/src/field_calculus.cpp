#include "kt/field_calculus.hpp"
#include "kt/parallel.hpp"
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace kt {

FieldGeometry FieldGeometry::make(std::shared_ptr<const TwistedGrid> grid,
                                  const NilLieAlgebra& alg, const AcsFrame& frame) {
    FieldGeometry g;
    g.grid = std::move(grid);
    ExteriorD D(alg, frame);
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            g.Vexact[i][k] = frame.R()(i, k);
            g.V[i][k] = toComplex(frame.R()(i, k));
            g.Q[i][k] = toComplex(frame.Q()(i, k));
        }
    for (int s = 0; s < 4; ++s) {
        g.dPhiExact[s] = D.dCoframe(s);
        g.dPhiExact[s].frameTag = nullptr;   // geometry outlives the frame object
        for (int m = 0; m < 16; ++m) g.dPhi[s][m] = toComplex(D.dCoframe(s).c[m]);
    }
    g.detQ = toComplex(frame.detQ());
    return g;
}

GridData& FieldForm::ensure(int mask) {
    auto it = comp.find(mask);
    if (it == comp.end())
        it = comp.emplace(mask, GridData(grid->sites(), cd(0.0))).first;
    return it->second;
}

const GridData* FieldForm::find(int mask) const {
    auto it = comp.find(mask);
    return it == comp.end() ? nullptr : &it->second;
}

FieldForm FieldForm::part(int p, int q) const {
    FieldForm out(grid);
    for (const auto& [m, v] : comp)
        if (mask::pDeg(m) == p && mask::qDeg(m) == q) out.comp[m] = v;
    return out;
}

double FieldForm::maxNorm() const {
    double worst = 0.0;
    for (const auto& [m, v] : comp)
        for (const auto& z : v) worst = std::max(worst, std::abs(z));
    return worst;
}

void FieldForm::prune(double eps) {
    for (auto it = comp.begin(); it != comp.end();) {
        double mx = 0.0;
        for (const auto& z : it->second) mx = std::max(mx, std::abs(z));
        if (mx <= eps) it = comp.erase(it);
        else ++it;
    }
}

FieldForm FieldForm::fromInvariant(std::shared_ptr<const TwistedGrid> g, const InvariantForm& a) {
    FieldForm f(g);
    for (int m = 0; m < 16; ++m) {
        if (a.c[m].isZero()) continue;
        f.comp[m] = GridData(g->sites(), toComplex(a.c[m]));
    }
    return f;
}

FieldForm FieldForm::fromExpression(std::shared_ptr<const TwistedGrid> g, int mask,
                                    const Expression& e, const std::map<std::string, cd>& params) {
    FieldForm f(g);
    GridData& v = f.ensure(mask);
    for (std::size_t i = 0; i < g->sites(); ++i) v[i] = e.eval(g->point(i), params);
    return f;
}

FieldForm operator+(const FieldForm& a, const FieldForm& b) {
    FieldForm out = a;
    for (const auto& [m, v] : b.comp) {
        GridData& dst = out.ensure(m);
        for (std::size_t i = 0; i < v.size(); ++i) dst[i] += v[i];
    }
    return out;
}

FieldForm operator-(const FieldForm& a, const FieldForm& b) {
    FieldForm out = a;
    for (const auto& [m, v] : b.comp) {
        GridData& dst = out.ensure(m);
        for (std::size_t i = 0; i < v.size(); ++i) dst[i] -= v[i];
    }
    return out;
}

FieldForm operator*(const cd& s, const FieldForm& a) {
    FieldForm out(a.grid);
    for (const auto& [m, v] : a.comp) {
        GridData w = v;
        for (auto& z : w) z *= s;
        out.comp[m] = std::move(w);
    }
    return out;
}

GridData axisDiff(const TwistedGrid& g, const GridData& u, int axis) {
    if ((axis < 3 ? g.n() : g.n4()) < 5)
        throw std::invalid_argument("axisDiff: grid too small for the stencil");
    GridData out(u.size());
    double scale = (axis < 3 ? g.n() : g.n4()) / 12.0;
    const uint32_t* m2 = g.nbr(axis, -2).data();
    const uint32_t* m1 = g.nbr(axis, -1).data();
    const uint32_t* p1 = g.nbr(axis, 1).data();
    const uint32_t* p2 = g.nbr(axis, 2).data();
    const cd* uu = u.data();
    cd* oo = out.data();
    parallelFor(u.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i)
            oo[i] = scale * (uu[m2[i]] - 8.0 * uu[m1[i]] + 8.0 * uu[p1[i]] - uu[p2[i]]);
    });
    return out;
}

GridData frameDerivative(const TwistedGrid& g, const GridData& u, int k) {
    switch (k) {
        case 1: return axisDiff(g, u, 0);
        case 2: {
            GridData d2 = axisDiff(g, u, 1);
            GridData d3 = axisDiff(g, u, 2);
            std::size_t slab = (std::size_t)g.n() * g.n() * g.n4();
            std::size_t idx = 0;
            for (int i1 = 0; i1 < g.n(); ++i1) {
                double x1 = (double)i1 / g.n();
                for (std::size_t j = 0; j < slab; ++j, ++idx) d2[idx] += x1 * d3[idx];
            }
            return d2;
        }
        case 3: return axisDiff(g, u, 2);
        case 4: return axisDiff(g, u, 3);
        default: throw std::invalid_argument("frameDerivative: k must be 1..4");
    }
}

FieldForm dField(const FieldGeometry& geom, const FieldForm& a) {
    const TwistedGrid& g = *geom.grid;
    FieldForm out(a.grid);
    for (const auto& [m, v] : a.comp) {
        // derivative part: sum_s (V_s f) Phi^s ^ Phi^m  (s runs over all 4 slots)
        std::array<GridData, 4> ed;
        for (int k = 0; k < 4; ++k) ed[k] = frameDerivative(g, v, k + 1);
        for (int s = 0; s < 4; ++s) {
            int sgn = mask::wedgeSign(1 << s, m);
            if (sgn == 0) continue;
            int outMask = (1 << s) | m;
            GridData& dst = out.ensure(outMask);
            for (int k = 0; k < 4; ++k) {
                cd coef = geom.V[s][k] * (double)sgn;
                if (coef == cd(0.0)) continue;
                for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += coef * ed[k][i];
            }
        }
        // invariant part: f * d(Phi^m), via Leibniz over the slots of m
        int pos = 0;
        for (int s = 0; s < 4; ++s) {
            if (!(m & (1 << s))) continue;
            int rest = m & ~(1 << s);
            double leib = (pos % 2 == 0) ? 1.0 : -1.0;
            for (int t = 0; t < 16; ++t) {
                cd dphi = geom.dPhi[s][t];
                if (dphi == cd(0.0)) continue;
                int sgn = mask::wedgeSign(t, rest);
                if (sgn == 0) continue;
                cd coef = leib * (double)sgn * dphi;
                GridData& dst = out.ensure(t | rest);
                for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += coef * v[i];
            }
            ++pos;
        }
    }
    out.prune();
    return out;
}

static FieldForm dShiftPart(const FieldGeometry& geom, const FieldForm& a, int dp, int dq) {
    FieldForm out(a.grid);
    for (int p = 0; p <= 2; ++p)
        for (int q = 0; q <= 2; ++q) {
            FieldForm comp = a.part(p, q);
            if (comp.comp.empty()) continue;
            out = out + dField(geom, comp).part(p + dp, q + dq);
        }
    out.prune();
    return out;
}

FieldForm dbarField(const FieldGeometry& geom, const FieldForm& a) {
    return dShiftPart(geom, a, 0, 1);
}

FieldForm partialField(const FieldGeometry& geom, const FieldForm& a) {
    return dShiftPart(geom, a, 1, 0);
}

FieldForm jActionField(const FieldForm& a) {
    FieldForm out(a.grid);
    for (const auto& [m, v] : a.comp) {
        cd f = toComplex(iPower(mask::qDeg(m) - mask::pDeg(m)));
        GridData w = v;
        for (auto& z : w) z *= f;
        out.comp[m] = std::move(w);
    }
    return out;
}

FieldForm dcField(const FieldGeometry& geom, const FieldForm& a) {
    FieldForm out(a.grid);
    for (int k = 0; k <= 4; ++k) {
        FieldForm comp(a.grid);
        for (const auto& [m, v] : a.comp)
            if (mask::degree(m) == k) comp.comp[m] = v;
        if (comp.comp.empty()) continue;
        FieldForm dJ = dField(geom, jActionField(comp));
        FieldForm JdJ = jActionField(dJ);
        double sgn = ((k + 1) % 2 == 1) ? -1.0 : 1.0;   // J^{-1} = (-1)^{k+1} J
        out = out + (cd(-sgn) * JdJ);
    }
    out.prune();
    return out;
}

FieldForm wedgeField(const FieldForm& a, const FieldForm& b) {
    FieldForm out(a.grid);
    for (const auto& [ma, va] : a.comp)
        for (const auto& [mb, vb] : b.comp) {
            int sgn = mask::wedgeSign(ma, mb);
            if (sgn == 0) continue;
            GridData& dst = out.ensure(ma | mb);
            for (std::size_t i = 0; i < dst.size(); ++i)
                dst[i] += (double)sgn * va[i] * vb[i];
        }
    out.prune();
    return out;
}

StarBlock makeStarBlock(const FieldGeometry& geom, const MetricField& h,
                        const std::vector<int>& inMasks) {
    StarBlock blk;
    blk.inMasks = inMasks;
    blk.constant = h.constant;
    // output masks: all masks the star can reach from the inputs
    {
        const auto& hv = h.at(0);
        Coef16<cd> S = starMatrix<cd>(hv[0], hv[1], hv[2], hv[3]);
        std::array<bool, 16> used{};
        for (int t = 0; t < 16; ++t)
            for (int s : inMasks)
                if (S[t * 16 + s] != cd(0.0)) used[t] = true;
        // the reachable set is degree-determined; include the full complementary
        // degrees so that site-dependent metrics cannot fall outside the block
        std::array<bool, 16> degUsed{};
        for (int t = 0; t < 16; ++t)
            if (used[t]) degUsed[mask::degree(t)] = true;
        for (int t = 0; t < 16; ++t)
            if (degUsed[mask::degree(t)]) blk.outMasks.push_back(t);
    }
    std::size_t ni = blk.inMasks.size(), no = blk.outMasks.size();
    std::size_t blocks = h.constant ? 1 : geom.grid->sites();
    blk.m.assign(blocks * ni * no, cd(0.0));
    for (std::size_t site = 0; site < blocks; ++site) {
        const auto& hv = h.at(site);
        Coef16<cd> S = starMatrix<cd>(hv[0], hv[1], hv[2], hv[3]);
        cd* dst = blk.m.data() + site * ni * no;
        for (std::size_t r = 0; r < no; ++r)
            for (std::size_t c = 0; c < ni; ++c)
                dst[r * ni + c] = S[blk.outMasks[r] * 16 + blk.inMasks[c]];
    }
    return blk;
}

FieldForm starField(const FieldGeometry& geom, const MetricField& h, const FieldForm& a) {
    std::vector<int> inMasks;
    for (const auto& [m, v] : a.comp) { (void)v; inMasks.push_back(m); }
    if (inMasks.empty()) {
        FieldForm out(a.grid);
        return out;
    }
    StarBlock blk = makeStarBlock(geom, h, inMasks);
    FieldForm out(a.grid);
    std::size_t ni = inMasks.size(), no = blk.outMasks.size();
    std::vector<const GridData*> in;
    for (int m : inMasks) in.push_back(a.find(m));
    std::vector<GridData*> dst;
    for (int m : blk.outMasks) dst.push_back(&out.ensure(m));
    for (std::size_t i = 0; i < geom.grid->sites(); ++i) {
        const cd* M = blk.at(i);
        for (std::size_t r = 0; r < no; ++r) {
            cd acc = 0.0;
            for (std::size_t c = 0; c < ni; ++c) acc += M[r * ni + c] * (*in[c])[i];
            (*dst[r])[i] = acc;
        }
    }
    out.prune();
    return out;
}

FieldForm fundamentalFieldForm(const FieldGeometry& geom, const MetricField& h) {
    static const int m11 = 0b0101, m12 = 0b1001, m21 = 0b0110, m22 = 0b1010;
    FieldForm w(geom.grid);
    cd ih(0.0, 0.5);
    GridData& c11 = w.ensure(m11);
    GridData& c12 = w.ensure(m12);
    GridData& c21 = w.ensure(m21);
    GridData& c22 = w.ensure(m22);
    for (std::size_t i = 0; i < geom.grid->sites(); ++i) {
        const auto& hv = h.at(i);
        c11[i] = ih * hv[0];
        c12[i] = ih * hv[1];
        c21[i] = ih * hv[2];
        c22[i] = ih * hv[3];
    }
    w.prune();
    return w;
}

L2Metric makeL2Metric(const FieldGeometry& geom, const MetricField& h,
                      const std::vector<int>& masks) {
    L2Metric g;
    g.grid = geom.grid;
    g.masks = masks;
    g.constant = h.constant;
    std::size_t n = masks.size();
    std::size_t blocks = h.constant ? 1 : geom.grid->sites();
    g.gram.assign(blocks * n * n, cd(0.0));
    g.rho.assign(blocks, 0.0);
    double dq4 = std::abs(geom.detQ) / 4.0;
    for (std::size_t site = 0; site < blocks; ++site) {
        const auto& hv = h.at(site);
        Coef16<cd> G = innerGram<cd>(hv[0], hv[1], hv[2], hv[3]);
        cd* dst = g.gram.data() + site * n * n;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                dst[r * n + c] = G[masks[r] * 16 + masks[c]];
        g.rho[site] = (hv[0] * hv[3] - hv[1] * hv[2]).real() * dq4;
    }
    return g;
}

cd dotL2(const L2Metric& g, const FieldForm& a, const FieldForm& b) {
    std::size_t n = g.masks.size();
    std::vector<const GridData*> av(n, nullptr), bv(n, nullptr);
    for (std::size_t k = 0; k < n; ++k) {
        av[k] = a.find(g.masks[k]);
        bv[k] = b.find(g.masks[k]);
    }
    cd total = 0.0;
    for (std::size_t i = 0; i < g.grid->sites(); ++i) {
        const cd* G = g.gramAt(i);
        cd acc = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            if (!av[r]) continue;
            cd ar = (*av[r])[i];
            if (ar == cd(0.0)) continue;
            for (std::size_t c = 0; c < n; ++c) {
                if (!bv[c]) continue;
                acc += ar * G[r * n + c] * std::conj((*bv[c])[i]);
            }
        }
        total += acc * g.rhoAt(i);
    }
    return total / (double)g.grid->sites();
}

double coefNorm(const FieldForm& a) {
    double acc = 0.0;
    std::size_t sites = a.grid ? a.grid->sites() : 1;
    for (const auto& [m, v] : a.comp)
        for (const auto& z : v) acc += std::norm(z);
    return std::sqrt(acc / (double)sites);
}

cd integrateField(const FieldGeometry& geom, const FieldForm& a) {
    for (const auto& [m, v] : a.comp) {
        (void)v;
        if (m != 15) throw std::invalid_argument("integrateField: input is not a 4-form");
    }
    const GridData* v = a.find(15);
    if (!v) return 0.0;
    cd mean = 0.0;
    for (const auto& z : *v) mean += z;
    mean /= (double)v->size();
    return mean * geom.detQ;
}

FieldLee leeFormField(const FieldGeometry& geom, const MetricField& h) {
    const TwistedGrid& g = *geom.grid;
    FieldForm omega = fundamentalFieldForm(geom, h);
    FieldForm domega = dField(geom, omega);
    static const int threeMasks[4] = {0b0111, 0b1011, 0b1101, 0b1110};
    // wedge matrices of the slot 1-forms with omega, per site
    FieldLee out{FieldForm(geom.grid), 0.0};
    std::array<GridData*, 4> th{};
    for (int s = 0; s < 4; ++s) th[s] = &out.theta.ensure(1 << s);
    std::array<const GridData*, 4> rhs{};
    for (int r = 0; r < 4; ++r) rhs[r] = domega.find(threeMasks[r]);
    for (std::size_t i = 0; i < g.sites(); ++i) {
        cd A[4][5];
        for (int r = 0; r < 4; ++r) A[r][4] = rhs[r] ? (*rhs[r])[i] : cd(0.0);
        for (int s = 0; s < 4; ++s) {
            // column: coefficients of Phi^s ^ omega on the 3-form masks
            for (int r = 0; r < 4; ++r) A[r][s] = 0.0;
            for (const auto& [mw, vw] : omega.comp) {
                int sgn = mask::wedgeSign(1 << s, mw);
                if (sgn == 0) continue;
                int t = (1 << s) | mw;
                for (int r = 0; r < 4; ++r)
                    if (threeMasks[r] == t) A[r][s] += (double)sgn * vw[i];
            }
        }
        // dense 4x4 solve with partial pivoting
        for (int col = 0; col < 4; ++col) {
            int p = col;
            for (int r = col + 1; r < 4; ++r)
                if (std::abs(A[r][col]) > std::abs(A[p][col])) p = r;
            if (std::abs(A[p][col]) < 1e-14)
                throw std::domain_error("leeFormField: degenerate fundamental form");
            if (p != col)
                for (int c = col; c < 5; ++c) std::swap(A[p][c], A[col][c]);
            for (int r = 0; r < 4; ++r) {
                if (r == col) continue;
                cd f = A[r][col] / A[col][col];
                if (f == cd(0.0)) continue;
                for (int c = col; c < 5; ++c) A[r][c] -= f * A[col][c];
            }
        }
        for (int s = 0; s < 4; ++s) (*th[s])[i] = A[s][4] / A[s][s];
    }
    FieldForm resid = domega - wedgeField(out.theta, omega);
    out.residual = resid.maxNorm();
    out.theta.prune(0.0);
    return out;
}

FieldForm gauduchonDefectField(const FieldGeometry& geom, const MetricField& h) {
    FieldForm omega = fundamentalFieldForm(geom, h);
    return dField(geom, dcField(geom, omega));
}

MetricClass classifyFieldMetric(const FieldGeometry& geom, const MetricField& h,
                                const std::vector<std::array<Rational, 4>>& refHarmonic1Forms,
                                double tol) {
    FieldLee lee = leeFormField(geom, h);
    double thetaScale = lee.theta.maxNorm();
    if (thetaScale <= tol) return MetricClass::AlmostKahler;
    if (dField(geom, lee.theta).maxNorm() > tol * (1.0 + thetaScale))
        return MetricClass::General;
    // theta on the real coframe: t_j(x) = sum_m theta_m(x) Q(m,j)
    const TwistedGrid& g = *geom.grid;
    std::array<GridData, 4> te;
    for (auto& v : te) v.assign(g.sites(), cd(0.0));
    for (int m = 0; m < 4; ++m) {
        const GridData* v = lee.theta.find(1 << m);
        if (!v) continue;
        for (int j = 0; j < 4; ++j) {
            cd q = geom.Q[m][j];
            if (q == cd(0.0)) continue;
            for (std::size_t i = 0; i < g.sites(); ++i) te[j][i] += q * (*v)[i];
        }
    }
    for (const auto& eta : refHarmonic1Forms) {
        cd pairing = 0.0;
        double etaNorm = 0.0;
        for (int j = 0; j < 4; ++j) {
            double ej = eta[j].toDouble();
            etaNorm += ej * ej;
            if (ej == 0.0) continue;
            cd mean = 0.0;
            for (std::size_t i = 0; i < g.sites(); ++i) mean += te[j][i];
            pairing += ej * mean / (double)g.sites();
        }
        if (std::abs(pairing) > tol * std::sqrt(etaNorm) * (thetaScale + 1.0))
            return MetricClass::StrictlyLCK;
    }
    return MetricClass::GloballyConformallyKahler;
}

void writeGridBinary(const std::string& path, const FieldForm& a) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("writeGridBinary: cannot open " + path);
    const char magic[8] = {'K', 'T', 'G', 'R', 'I', 'D', '1', '\n'};
    f.write(magic, 8);
    uint32_t dims[4] = {(uint32_t)a.grid->n(), (uint32_t)a.grid->n(), (uint32_t)a.grid->n(),
                        (uint32_t)a.grid->n4()};
    f.write((const char*)dims, sizeof dims);
    uint32_t ncomp = (uint32_t)a.comp.size();
    f.write((const char*)&ncomp, 4);
    for (const auto& [m, v] : a.comp) {
        uint32_t mm = (uint32_t)m;
        f.write((const char*)&mm, 4);
        for (const auto& z : v) {
            double re = z.real(), im = z.imag();
            f.write((const char*)&re, 8);
            f.write((const char*)&im, 8);
        }
    }
}

FieldForm readGridBinary(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("readGridBinary: cannot open " + path);
    char magic[8];
    f.read(magic, 8);
    if (std::memcmp(magic, "KTGRID1\n", 8) != 0)
        throw std::runtime_error("readGridBinary: bad magic");
    uint32_t dims[4], ncomp;
    f.read((char*)dims, sizeof dims);
    f.read((char*)&ncomp, 4);
    auto grid = TwistedGrid::make((int)dims[0], (int)dims[3]);
    FieldForm a(grid);
    for (uint32_t k = 0; k < ncomp; ++k) {
        uint32_t mm;
        f.read((char*)&mm, 4);
        GridData& v = a.ensure((int)mm);
        for (auto& z : v) {
            double re, im;
            f.read((char*)&re, 8);
            f.read((char*)&im, 8);
            z = {re, im};
        }
    }
    if (!f) throw std::runtime_error("readGridBinary: truncated file");
    return a;
}

void writeCsvSlice(const std::string& path, const FieldForm& a, int mask, int i3, int i4) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("writeCsvSlice: cannot open " + path);
    const GridData* v = a.find(mask);
    f << "x1,x2,re,im\n";
    char buf[128];
    for (int i1 = 0; i1 < a.grid->n(); ++i1)
        for (int i2 = 0; i2 < a.grid->n(); ++i2) {
            cd z = v ? (*v)[a.grid->index(i1, i2, i3, i4)] : cd(0.0);
            std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.17g,%.17g\n",
                          (double)i1 / a.grid->n(), (double)i2 / a.grid->n(), z.real(), z.imag());
            f << buf;
        }
}

} // namespace kt
