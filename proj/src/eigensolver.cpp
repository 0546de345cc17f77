#include "kt/eigensolver.hpp"
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace kt {

void hermitianEigenSmall(std::size_t n, std::vector<cd>& a,
                         std::vector<double>& evals, std::vector<cd>& evecs) {
    evecs.assign(n * n, cd(0.0));
    for (std::size_t i = 0; i < n; ++i) evecs[i * n + i] = 1.0;
    if (n == 0) { evals.clear(); return; }

    double frob = 0.0;
    for (const auto& z : a) frob += std::norm(z);
    frob = std::sqrt(frob);
    const double stop = std::max(1e-300, 1e-15 * frob);

    for (int sweep = 0; sweep < 80; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a[p * n + q]);
        if (std::sqrt(2.0 * off) <= stop) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                cd apq = a[p * n + q];
                double mag = std::abs(apq);
                if (mag <= 1e-18 * frob) continue;
                double app = a[p * n + p].real();
                double aqq = a[q * n + q].real();
                double tau = (app - aqq) / (2.0 * mag);
                // stable small root of t^2 - 2 tau t - 1 = 0
                double t = (tau >= 0.0) ? -1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                        : -1.0 / (tau - std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                cd s = (t * c) * (apq / mag);
                // A <- J^dag A J with J[p][p]=J[q][q]=c, J[p][q]=s, J[q][p]=-conj(s)
                for (std::size_t r = 0; r < n; ++r) {
                    cd arp = a[r * n + p], arq = a[r * n + q];
                    a[r * n + p] = c * arp - std::conj(s) * arq;
                    a[r * n + q] = s * arp + c * arq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    cd apr = a[p * n + r], aqr = a[q * n + r];
                    a[p * n + r] = c * apr - s * aqr;
                    a[q * n + r] = std::conj(s) * apr + c * aqr;
                }
                a[p * n + q] = cd(0.0);
                a[q * n + p] = cd(0.0);
                for (std::size_t r = 0; r < n; ++r) {
                    cd vrp = evecs[r * n + p], vrq = evecs[r * n + q];
                    evecs[r * n + p] = c * vrp - std::conj(s) * vrq;
                    evecs[r * n + q] = s * vrp + c * vrq;
                }
            }
    }
    evals.resize(n);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a[i * n + i].real();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });
    std::vector<cd> sorted(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        evals[j] = diag[order[j]];
        for (std::size_t r = 0; r < n; ++r) sorted[r * n + j] = evecs[r * n + order[j]];
    }
    evecs.swap(sorted);
}

namespace {

cd dot(const std::vector<cd>& a, const std::vector<cd>& b) {
    cd acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

double nrm(const std::vector<cd>& a) {
    double acc = 0.0;
    for (const auto& z : a) acc += std::norm(z);
    return std::sqrt(acc);
}

void axpy(const cd& alpha, const std::vector<cd>& x, std::vector<cd>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

// two-pass classical Gram-Schmidt of w against basis; returns the first-pass
// coefficients (the T-column entries) through coefs
bool orthogonalize(std::vector<cd>& w, const std::vector<std::vector<cd>>& basis,
                   std::vector<cd>* coefs, double dropTol) {
    if (coefs) coefs->assign(basis.size(), cd(0.0));
    for (int pass = 0; pass < 2; ++pass)
        for (std::size_t i = 0; i < basis.size(); ++i) {
            cd h = dot(basis[i], w);
            axpy(-h, basis[i], w);
            if (coefs) (*coefs)[i] += h;
        }
    double norm = nrm(w);
    if (norm <= dropTol) return false;
    for (auto& z : w) z /= norm;
    return true;
}

std::vector<cd> randomVector(std::size_t n, std::mt19937& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<cd> v(n);
    for (auto& z : v) z = {U(rng), U(rng)};
    return v;
}

} // namespace

double powerIterationLargest(const HermOp& A, unsigned seed, int iters) {
    std::mt19937 rng(seed);
    std::vector<cd> v = randomVector(A.dim, rng), w(A.dim);
    double norm = nrm(v);
    for (auto& z : v) z /= norm;
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        A.apply(v.data(), w.data());
        lambda = nrm(w);
        if (lambda == 0.0) return 0.0;
        for (std::size_t i = 0; i < A.dim; ++i) v[i] = w[i] / lambda;
    }
    return lambda;
}

EigenResult smallestEigenpairs(const HermOp& A, const EigenOptions& opt) {
    EigenResult res;
    std::mt19937 rng(opt.seed);
    std::size_t n = A.dim;
    std::size_t maxBasis = std::min<std::size_t>(opt.maxBasis, n);
    int kconv = std::min(opt.convergeK, opt.k);
    std::size_t keep = std::min<std::size_t>(maxBasis - opt.block,
                                             std::max<std::size_t>(2 * opt.k + 4, opt.k + 6));
    const double dropTol = 1e-13;

    std::vector<std::vector<cd>> V, AV;
    std::vector<cd> T(maxBasis * maxBasis, cd(0.0));    // row-major, m x m active

    auto appendVector = [&](std::vector<cd> w) -> bool {
        if (!orthogonalize(w, V, nullptr, dropTol)) return false;
        std::vector<cd> aw(n);
        A.apply(w.data(), aw.data());
        ++res.matvecs;
        std::size_t j = V.size();
        for (std::size_t i = 0; i < j; ++i) {
            cd tij = dot(V[i], aw);
            T[i * maxBasis + j] = tij;
            T[j * maxBasis + i] = std::conj(tij);
        }
        T[j * maxBasis + j] = dot(w, aw).real();
        V.push_back(std::move(w));
        AV.push_back(std::move(aw));
        return true;
    };

    for (int i = 0; i < opt.block; ++i) appendVector(randomVector(n, rng));

    auto rayleighRitz = [&](std::size_t keepCount, std::vector<double>& theta,
                            std::vector<double>& resid) {
        std::size_t m = V.size();
        std::vector<cd> Tm(m * m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) Tm[i * m + j] = T[i * maxBasis + j];
        std::vector<double> ev;
        std::vector<cd> U;
        hermitianEigenSmall(m, Tm, ev, U);
        keepCount = std::min(keepCount, m);
        // rotate basis: V <- V U[:, :keep], AV likewise, T <- diag-ish recomputed
        std::vector<std::vector<cd>> Vn(keepCount, std::vector<cd>(n, cd(0.0)));
        std::vector<std::vector<cd>> AVn(keepCount, std::vector<cd>(n, cd(0.0)));
        for (std::size_t j = 0; j < keepCount; ++j)
            for (std::size_t i = 0; i < m; ++i) {
                cd u = U[i * m + j];
                if (u == cd(0.0)) continue;
                axpy(u, V[i], Vn[j]);
                axpy(u, AV[i], AVn[j]);
            }
        V.swap(Vn);
        AV.swap(AVn);
        // U's columns are exact eigenvectors of the small T, so the rotated
        // projection is diagonal with the kept Ritz values
        std::fill(T.begin(), T.end(), cd(0.0));
        for (std::size_t i = 0; i < keepCount; ++i) T[i * maxBasis + i] = ev[i];
        theta.assign(ev.begin(), ev.begin() + keepCount);
        resid.assign(keepCount, 0.0);
        std::vector<cd> tmp(n);
        for (std::size_t j = 0; j < std::min<std::size_t>(keepCount, opt.k + 2); ++j) {
            for (std::size_t i = 0; i < n; ++i) tmp[i] = AV[j][i] - theta[j] * V[j][i];
            resid[j] = nrm(tmp);
        }
        ++res.restarts;
    };

    std::vector<double> theta, resid;
    // convergence probe without rotating the basis
    auto probeConverged = [&]() {
        std::size_t m = V.size();
        if (m < (std::size_t)kconv) return false;
        std::vector<cd> Tm(m * m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) Tm[i * m + j] = T[i * maxBasis + j];
        std::vector<double> ev;
        std::vector<cd> U;
        hermitianEigenSmall(m, Tm, ev, U);
        double target = opt.tol * std::max(opt.scale, 1e-300);
        std::vector<cd> tmp(n);
        for (int j = 0; j < kconv; ++j) {
            for (std::size_t t = 0; t < n; ++t) tmp[t] = cd(0.0);
            for (std::size_t i = 0; i < m; ++i) {
                cd u = U[i * m + j];
                if (u == cd(0.0)) continue;
                for (std::size_t t = 0; t < n; ++t) tmp[t] += u * (AV[i][t] - ev[j] * V[i][t]);
            }
            if (nrm(tmp) > std::max(target, opt.relTol * std::abs(ev[j]))) return false;
        }
        return true;
    };
    bool converged = false;
    // expansion picks the Krylov continuation A*v for these basis columns;
    // after a restart the smallest Ritz vectors are the right continuation
    std::size_t expandBegin = 0;
    while (res.matvecs < opt.maxMatvecs) {
        std::size_t before = V.size();
        std::size_t expandEnd = std::min(before, expandBegin + (std::size_t)opt.block);
        for (std::size_t j = expandBegin; j < expandEnd && V.size() < maxBasis; ++j)
            if (!appendVector(AV[j])) appendVector(randomVector(n, rng));
        while (V.size() < std::min(maxBasis, before + opt.block))
            if (!appendVector(randomVector(n, rng))) break;
        expandBegin = before;

        if (probeConverged()) { converged = true; break; }
        if (V.size() + opt.block > maxBasis || res.matvecs >= opt.maxMatvecs) {
            rayleighRitz(keep, theta, resid);
            expandBegin = 0;
        }
    }
    if (converged) rayleighRitz(keep, theta, resid);
    if (!converged) {
        rayleighRitz(keep, theta, resid);
        double target = opt.tol * std::max(opt.scale, 1e-300);
        converged = theta.size() >= (std::size_t)kconv;
        for (int j = 0; j < kconv && converged; ++j)
            if (resid[j] > std::max(target, opt.relTol * std::abs(theta[j])))
                converged = false;
    }

    std::size_t give = std::min<std::size_t>(theta.size(), opt.k + 4);
    res.values.assign(theta.begin(), theta.begin() + give);
    res.residuals.assign(give, 0.0);
    std::vector<cd> tmp(n);
    for (std::size_t j = 0; j < give; ++j) {
        res.vectors.push_back(V[j]);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = AV[j][i] - theta[j] * V[j][i];
        res.residuals[j] = nrm(tmp);
    }
    res.converged = converged;
    return res;
}

} // namespace kt
