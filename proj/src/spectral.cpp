#include "kt/spectral.hpp"
#include <chrono>
#include <cmath>

namespace kt {

KernelDecision kernelDimension(const std::vector<double>& v, double gapFactor, double cap) {
    KernelDecision d;
    if (v.empty()) {
        d.diagnostic = "no singular values";
        return d;
    }
    // largest m such that the first m values are kernel-plausible and are
    // separated from value m by the gap factor
    int best = 0;
    for (int m = 1; m < (int)v.size(); ++m)
        if (v[m - 1] <= cap && v[m - 1] * gapFactor <= v[m]) best = m;
    d.dim = best;
    // value `best` is the first one excluded from the kernel; if it is still
    // below the cap the decision is ambiguous
    if (v[best] <= cap) {
        d.determinate = false;
        d.diagnostic = "value " + std::to_string(best) + " (" + std::to_string(v[best]) +
                       ") is below the cap " + std::to_string(cap) + " with no factor-" +
                       std::to_string((int)gapFactor) + " gap";
        return d;
    }
    d.determinate = true;
    d.diagnostic = best > 0
                       ? "gap " + std::to_string(v[best] / v[best - 1]) + " after " +
                             std::to_string(best) + " values"
                       : "no kernel-plausible values";
    return d;
}

namespace {

cd flatDot(const std::vector<cd>& a, const std::vector<cd>& b) {
    cd acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

double flatNorm(const std::vector<cd>& a) {
    double acc = 0.0;
    for (const auto& z : a) acc += std::norm(z);
    return std::sqrt(acc);
}

// seven per-axis sawtooth sign patterns over (x1, x2, x4); x3 sawtooths are
// broken by the twist and need no deflation
std::vector<std::vector<double>> sawtoothPatterns(const TwistedGrid& g) {
    std::vector<std::vector<double>> out;
    for (int bits = 1; bits < 8; ++bits) {
        std::vector<double> p(g.sites());
        for (std::size_t i = 0; i < g.sites(); ++i) {
            auto c = g.coords(i);
            int e = 0;
            if (bits & 1) e += c[0];
            if (bits & 2) e += c[1];
            if (bits & 4) e += c[3];
            p[i] = (e % 2 == 0) ? 1.0 : -1.0;
        }
        out.push_back(std::move(p));
    }
    return out;
}

// span of sawtooth x constant combinations annihilated by the derivative part
// of the system (they sit at the penalty scale and pollute extracted bases)
std::vector<std::vector<cd>> spuriousSpan(const FieldSystem& sys, double capSigma) {
    const TwistedGrid& g = *sys.geometry().grid;
    std::size_t s = g.sites(), ni = sys.nIn(), nd = sys.domainDim();
    auto patterns = sawtoothPatterns(g);
    std::vector<std::vector<cd>> span;
    std::vector<cd> x(nd), y(sys.rangeDim());
    std::size_t penaltyBase = (sys.nOutComponents() - ni) * s;
    for (const auto& p : patterns) {
        // columns: D (pattern x e_c) with penalty rows ignored
        std::vector<std::vector<cd>> cols(ni);
        for (std::size_t c = 0; c < ni; ++c) {
            std::fill(x.begin(), x.end(), cd(0.0));
            for (std::size_t i = 0; i < s; ++i) x[c * s + i] = p[i];
            sys.apply(x.data(), y.data());
            cols[c].assign(y.begin(), y.begin() + penaltyBase);
        }
        std::vector<cd> gram(ni * ni);
        for (std::size_t a = 0; a < ni; ++a)
            for (std::size_t b = 0; b < ni; ++b) gram[a * ni + b] = flatDot(cols[a], cols[b]);
        std::vector<double> ev;
        std::vector<cd> U;
        hermitianEigenSmall(ni, gram, ev, U);
        double thresh = capSigma * capSigma * (double)s;
        for (std::size_t j = 0; j < ni; ++j) {
            if (ev[j] > thresh) continue;
            std::vector<cd> w(nd, cd(0.0));
            for (std::size_t c = 0; c < ni; ++c) {
                cd u = U[c * ni + j];
                if (u == cd(0.0)) continue;
                for (std::size_t i = 0; i < s; ++i) w[c * s + i] += u * p[i];
            }
            double norm = flatNorm(w);
            for (auto& z : w) z /= norm;
            span.push_back(std::move(w));
        }
    }
    // orthonormalize the collected span (patterns are mutually orthogonal,
    // but combinations within one pattern may overlap)
    std::vector<std::vector<cd>> ortho;
    for (auto& w : span) {
        for (const auto& o : ortho) {
            cd h = flatDot(o, w);
            for (std::size_t i = 0; i < w.size(); ++i) w[i] -= h * o[i];
        }
        double norm = flatNorm(w);
        if (norm > 1e-8) {
            for (auto& z : w) z /= norm;
            ortho.push_back(std::move(w));
        }
    }
    return ortho;
}

} // namespace

GridData traceFunction(const FieldGeometry& geom, const MetricField& h, const FieldForm& psi) {
    const TwistedGrid& g = *geom.grid;
    L2Metric l2 = makeL2Metric(geom, h, masks11());
    std::size_t n = l2.masks.size();
    std::vector<const GridData*> pv(n);
    for (std::size_t c = 0; c < n; ++c) pv[c] = psi.find(l2.masks[c]);
    GridData f(g.sites());
    cd ih(0.0, 0.5);
    for (std::size_t i = 0; i < g.sites(); ++i) {
        const auto& hv = h.at(i);
        std::array<cd, 4> om = {ih * hv[0], ih * hv[1], ih * hv[2], ih * hv[3]};
        const cd* G = l2.gramAt(i);
        cd acc = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            if (!pv[r]) continue;
            cd pr = (*pv[r])[i];
            if (pr == cd(0.0)) continue;
            for (std::size_t c = 0; c < n; ++c) acc += pr * G[r * n + c] * std::conj(om[c]);
        }
        f[i] = 0.5 * acc;
    }
    return f;
}

SpectralReport solveSmallest(const FieldSystem& sys, const MetricField& h,
                             const SolverOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    SpectralReport rep;
    rep.seed = opt.seed;

    std::size_t nd = sys.domainDim();
    auto scratch = std::make_shared<std::vector<cd>>();

    // stage 1: Krylov iteration on the separation operator. Its spectrum has
    // the same kernel families as the reported operator but the null-mode
    // family lifted to an O(1) gap, so the subspace converges quickly.
    FieldSystem sysHeavy = sys.withPenalty(opt.separationPenalty);
    HermOp Ah{nd, nullptr};
    const FieldSystem* SH = &sysHeavy;
    Ah.apply = [SH, scratch](const cd* x, cd* y) { SH->applyNormal(x, y, *scratch); };
    double lamMaxHeavy = powerIterationLargest(Ah, opt.seed + 7, 50);

    EigenOptions eopt;
    eopt.k = opt.k;
    eopt.convergeK = std::min(opt.k, opt.convergePairs);
    eopt.block = opt.block;
    eopt.maxBasis = opt.maxBasis;
    eopt.maxMatvecs = opt.maxMatvecs;
    eopt.tol = opt.tol;
    eopt.scale = std::max(lamMaxHeavy, 1e-300);
    eopt.seed = opt.seed;
    EigenResult eig = smallestEigenpairs(Ah, eopt);
    rep.matvecs = eig.matvecs;
    rep.restarts = eig.restarts;

    // scale and cap refer to the reported operator
    HermOp Al{nd, nullptr};
    const FieldSystem* SL = &sys;
    Al.apply = [SL, scratch](const cd* x, cd* y) { SL->applyNormal(x, y, *scratch); };
    double lamMaxLight = powerIterationLargest(Al, opt.seed + 7, 50);
    rep.scale = std::sqrt(std::max(lamMaxLight, 0.0));
    rep.cap = opt.capFactor * rep.scale;

    // polish: the separation stage leaves O(separationPenalty^2) contamination
    // in smooth non-kernel directions; a Chebyshev filter on the reported
    // operator over [polishCut, lambda_max] strips it without disturbing the
    // near-kernel families
    if (opt.polishDegree > 0) {
        double a = opt.polishCut, b = 1.05 * std::max(lamMaxLight, a * 4.0);
        double cc = 0.5 * (b + a), ee = 0.5 * (b - a);
        std::vector<cd> av(nd), prev(nd), cur(nd), next(nd);
        for (auto& v : eig.vectors) {
            // light Rayleigh quotient decides whether v is near-kernel
            Al.apply(v.data(), av.data());
            rep.matvecs++;
            double rho = 0.0, nv = 0.0;
            for (std::size_t i = 0; i < nd; ++i) {
                rho += (std::conj(v[i]) * av[i]).real();
                nv += std::norm(v[i]);
            }
            if (nv == 0.0 || rho / nv > a) continue;
            prev = v;
            for (std::size_t i = 0; i < nd; ++i) cur[i] = (av[i] - cc * v[i]) / ee;
            for (int d = 1; d < opt.polishDegree; ++d) {
                Al.apply(cur.data(), av.data());
                rep.matvecs++;
                for (std::size_t i = 0; i < nd; ++i)
                    next[i] = 2.0 * (av[i] - cc * cur[i]) / ee - prev[i];
                prev.swap(cur);
                cur.swap(next);
            }
            double norm = flatNorm(cur);
            if (norm > 0.0)
                for (std::size_t i = 0; i < nd; ++i) v[i] = cur[i] / norm;
        }
    }

    // stage 2: Rayleigh-Ritz of the reported operator on the union of the
    // converged subspace and the explicit null-mode span
    std::vector<std::vector<cd>> trial = eig.vectors;
    for (auto& w : spuriousSpan(sys, std::max(rep.cap, 1e-12)))
        trial.push_back(std::move(w));
    std::size_t m = trial.size();
    std::vector<std::vector<cd>> Dv(m);
    {
        std::vector<cd> y(sys.rangeDim());
        for (std::size_t j = 0; j < m; ++j) {
            sys.apply(trial[j].data(), y.data());
            Dv[j] = y;
        }
    }
    std::vector<cd> G1(m * m), G2(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            G1[i * m + j] = flatDot(trial[i], trial[j]);
            G2[i * m + j] = flatDot(Dv[i], Dv[j]);
        }
    // pseudo-whitening: keep well-conditioned directions of the trial span
    std::vector<double> g1ev;
    std::vector<cd> g1U;
    {
        std::vector<cd> G1c = G1;
        hermitianEigenSmall(m, G1c, g1ev, g1U);
    }
    double evMax = g1ev.empty() ? 0.0 : g1ev.back();
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < m; ++r)
        if (g1ev[r] > 1e-8 * evMax) keep.push_back(r);
    std::size_t mk = keep.size();
    std::vector<cd> W(m * mk);   // trial -> whitened combination table
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < mk; ++j)
            W[i * mk + j] = g1U[i * m + keep[j]] / std::sqrt(g1ev[keep[j]]);
    std::vector<cd> Mred(mk * mk, cd(0.0));
    for (std::size_t i = 0; i < mk; ++i)
        for (std::size_t j = 0; j < mk; ++j) {
            cd acc = 0.0;
            for (std::size_t r = 0; r < m; ++r)
                for (std::size_t c = 0; c < m; ++c)
                    acc += std::conj(W[r * mk + i]) * G2[r * m + c] * W[c * mk + j];
            Mred[i * mk + j] = acc;
        }
    std::vector<double> sev;
    std::vector<cd> sU;
    hermitianEigenSmall(mk, Mred, sev, sU);

    std::vector<double> sigma(mk);
    for (std::size_t j = 0; j < mk; ++j) sigma[j] = std::sqrt(std::max(sev[j], 0.0));

    // materialize the smallest combinations and re-measure their singular
    // values directly; tiny Ritz values of the dense reduction sit at its
    // eps floor while the direct Rayleigh quotient does not
    std::size_t nsmall = std::min<std::size_t>(mk, opt.k);
    std::vector<std::vector<cd>> smallVecs(nsmall);
    for (std::size_t j = 0; j < nsmall; ++j) {
        std::vector<cd> combo(m, cd(0.0));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t r = 0; r < mk; ++r) combo[i] += W[i * mk + r] * sU[r * mk + j];
        std::vector<cd> v(nd, cd(0.0));
        for (std::size_t i = 0; i < m; ++i) {
            if (combo[i] == cd(0.0)) continue;
            for (std::size_t t = 0; t < nd; ++t) v[t] += combo[i] * trial[i][t];
        }
        smallVecs[j] = std::move(v);
    }
    {
        std::vector<cd> y(sys.rangeDim());
        for (std::size_t j = 0; j < nsmall; ++j) {
            double nx = flatNorm(smallVecs[j]);
            if (nx == 0.0) continue;
            sys.apply(smallVecs[j].data(), y.data());
            sigma[j] = flatNorm(y) / nx;
        }
        std::sort(sigma.begin(), sigma.begin() + nsmall);
    }
    rep.singularValues.assign(sigma.begin(), sigma.begin() + nsmall);

    KernelDecision kd = kernelDimension(rep.singularValues, opt.gapFactor, rep.cap);
    rep.diagnostic = kd.diagnostic;
    if (!eig.converged) {
        rep.status = "maxiter";
        rep.dimension = -1;
        rep.diagnostic = "solver did not converge within the matvec budget; " + kd.diagnostic;
    } else if (!kd.determinate) {
        rep.status = "indeterminate";
        rep.dimension = -1;
    } else {
        rep.status = "ok";
        rep.dimension = kd.dim;
        if (kd.dim >= 1 && kd.dim < (int)rep.singularValues.size())
            rep.gapRatio = rep.singularValues[kd.dim] / std::max(rep.singularValues[kd.dim - 1], 1e-300);
    }

    // kernel basis: smallest-sigma combinations of the trial span
    int dim = std::max(rep.dimension, 0);
    if (dim > 0) {
        L2Metric l2 = makeL2Metric(sys.geometry(), h, sys.inMasks());
        std::vector<FieldForm> basis;
        for (int j = 0; j < dim; ++j) basis.push_back(sys.unflatten(smallVecs[j].data()));
        for (int j = 0; j < dim; ++j) {
            for (int i = 0; i < j; ++i) {
                // dotL2 is linear in its first argument: the projection
                // coefficient of basis[j] along unit basis[i] is <j, i>
                cd hcoef = dotL2(l2, basis[j], basis[i]);
                basis[j] = basis[j] - (hcoef * basis[i]);
            }
            double norm = std::sqrt(std::abs(dotL2(l2, basis[j], basis[j]).real()));
            if (norm > 1e-12) basis[j] = (cd(1.0 / norm)) * basis[j];
        }
        rep.kernelBasis = basis;
        for (const auto& b : rep.kernelBasis) rep.kernelResiduals.push_back(sys.residual(b));
        if (sys.inMasks() == masks11()) {
            for (const auto& b : rep.kernelBasis) {
                GridData f = traceFunction(sys.geometry(), h, b);
                cd mean = 0.0;
                for (const auto& z : f) mean += z;
                mean /= (double)f.size();
                double var = 0.0;
                for (const auto& z : f) var += std::norm(z - mean);
                TraceStats ts;
                ts.meanAbs = std::abs(mean);
                ts.stddev = std::sqrt(var / (double)f.size());
                rep.traceStats.push_back(ts);
            }
        }
    }
    rep.wallMs = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::vector<double> subspaceAngles(const std::vector<FieldForm>& A,
                                   const std::vector<FieldForm>& B, const L2Metric& l2) {
    std::size_t ka = A.size(), kb = B.size();
    if (ka == 0 || kb == 0) throw std::invalid_argument("subspaceAngles: empty basis");
    // L2-orthonormal combinations of each basis
    auto whiten = [&](const std::vector<FieldForm>& X) {
        std::size_t k = X.size();
        std::vector<cd> G(k * k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) G[i * k + j] = dotL2(l2, X[i], X[j]);
        std::vector<double> ev;
        std::vector<cd> U;
        hermitianEigenSmall(k, G, ev, U);
        double evMax = ev.empty() ? 0.0 : ev.back();
        for (double e : ev)
            if (e <= 1e-12 * evMax)
                throw std::domain_error("subspaceAngles: rank-deficient basis");
        std::vector<FieldForm> out;
        for (std::size_t j = 0; j < k; ++j) {
            FieldForm acc(X[0].grid);
            for (std::size_t i = 0; i < k; ++i)
                acc = acc + ((std::conj(U[i * k + j]) / std::sqrt(ev[j])) * X[i]);
            out.push_back(acc);
        }
        return out;
    };
    std::vector<FieldForm> Aw = whiten(A), Bw = whiten(B);
    // sines of the principal angles are the singular values of (I - P_A) B;
    // the sine route keeps full precision for small angles where the cosine
    // Gram saturates at 1
    std::vector<FieldForm> R;
    for (const auto& b : Bw) {
        FieldForm r = b;
        for (const auto& a : Aw) {
            cd c = dotL2(l2, b, a);
            r = r - (c * a);
        }
        R.push_back(r);
    }
    std::vector<cd> S(kb * kb);
    for (std::size_t i = 0; i < kb; ++i)
        for (std::size_t j = 0; j < kb; ++j) S[i * kb + j] = dotL2(l2, R[i], R[j]);
    std::vector<double> ev;
    std::vector<cd> U;
    hermitianEigenSmall(kb, S, ev, U);
    std::size_t kmin = std::min(ka, kb);
    std::vector<double> angles;
    for (std::size_t j = 0; j < kmin; ++j) {
        double s2 = std::clamp(ev[j], 0.0, 1.0);
        angles.push_back(std::asin(std::sqrt(s2)));
    }
    std::sort(angles.begin(), angles.end());
    return angles;
}

SpectralReport asdHarmonicKernel(const FieldGeometry& geom, const MetricField& h,
                                 const SolverOptions& opt) {
    FieldSystem sys = FieldSystem::asd2(geom, h, opt.nullPenalty);
    return solveSmallest(sys, h, opt);
}

} // namespace kt
