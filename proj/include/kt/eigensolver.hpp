//==============================================================================
// eigensolver.hpp
// Deterministic eigensolvers used by the spectral module: a cyclic Jacobi
// eigensolver for small dense complex Hermitian matrices, a power iteration
// for the operator norm, and a block Krylov scheme (accumulating
// Rayleigh-Ritz with thick restarts, full reorthogonalization, stored A*V)
// for the smallest eigenvalues of a large Hermitian positive-semidefinite
// operator given matrix-free. All reductions are serial and seeded, so runs
// are reproducible bit-for-bit for a fixed seed.
//==============================================================================
#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace kt {

using cd = std::complex<double>;

struct HermOp {
    std::size_t dim;
    std::function<void(const cd*, cd*)> apply;
};

// eigenvalues ascending; a is row-major n x n and is destroyed
void hermitianEigenSmall(std::size_t n, std::vector<cd>& a,
                         std::vector<double>& evals, std::vector<cd>& evecs);

double powerIterationLargest(const HermOp& A, unsigned seed, int iters = 50);

struct EigenOptions {
    int k = 6;                 // smallest pairs returned and kept through restarts
    int convergeK = 6;         // how many of them must pass the residual test
    int block = 4;             // simultaneous expansion directions
    std::size_t maxBasis = 48;
    long maxMatvecs = 60000;
    double tol = 1e-11;        // absolute residual tolerance relative to `scale`
    double relTol = 0.15;      // alternative per-pair tolerance relative to the Ritz value
    double scale = 1.0;        // operator-norm estimate
    unsigned seed = 1;
};

struct EigenResult {
    std::vector<double> values;              // ascending Ritz values (>= k on success)
    std::vector<std::vector<cd>> vectors;    // matching Ritz vectors
    std::vector<double> residuals;           // ||A v - lambda v|| per returned pair
    long matvecs = 0;
    int restarts = 0;
    bool converged = false;
};

EigenResult smallestEigenpairs(const HermOp& A, const EigenOptions& opt);

} // namespace kt
