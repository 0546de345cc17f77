//==============================================================================
// spectral.hpp
// Smallest singular values and near-kernel bases of the first-order field
// systems, via seeded block Krylov iteration on the normal operator D*D.
// Dimension inference uses a factor gap plus an absolute cap; ambiguous
// spectra are reported as indeterminate rather than silently resolved.
// Extracted bases are refined by a small singular problem in the converged
// subspace, deflated against the explicitly-constructed sawtooth null-mode
// span, and orthonormalized in the metric L2 inner product.
//==============================================================================
#pragma once

#include "kt/eigensolver.hpp"
#include "kt/field_operator.hpp"

namespace kt {

struct SolverOptions {
    int k = 6;                  // reported singular values
    unsigned seed = 42;
    long maxMatvecs = 60000;
    double tol = 1e-11;         // Lanczos residual tolerance relative to |A|
    double gapFactor = 100.0;
    double capFactor = 1e-6;    // kernel cap = capFactor * sigma_max estimate
    double nullPenalty = 5e-5;  // kappa for the sawtooth penalty rows
    // the Krylov iteration runs with this heavier penalty, which separates the
    // null-mode family from the kernel spectrally; reported values are
    // Rayleigh-Ritz values of the nullPenalty operator on the converged
    // subspace joined with the explicit null-mode span
    double separationPenalty = 0.02;
    int block = 4;
    std::size_t maxBasis = 48;
    // pairs the Krylov stage must converge tightly; the remaining reported
    // values come from the subspace union and need no tight Ritz pairs
    int convergePairs = 4;
    // near-kernel trial vectors (Rayleigh quotient below polishCut) are run
    // through a Chebyshev filter suppressing [polishCut, lambda_max] of the
    // reported operator, removing the separation-stage contamination
    double polishCut = 0.5;
    int polishDegree = 60;
};

struct KernelDecision {
    int dim = 0;
    bool determinate = false;
    std::string diagnostic;
};

KernelDecision kernelDimension(const std::vector<double>& sortedValues, double gapFactor,
                               double cap);

struct TraceStats {
    double meanAbs = 0.0;
    double stddev = 0.0;
};

struct SpectralReport {
    std::vector<double> singularValues;    // k smallest, ascending
    int dimension = -1;                    // -1 when indeterminate
    std::string status;                    // ok | indeterminate | maxiter
    std::string diagnostic;
    double gapRatio = 0.0;
    double scale = 0.0;                    // sigma_max estimate of the system
    double cap = 0.0;
    long matvecs = 0;
    int restarts = 0;
    double wallMs = 0.0;
    unsigned seed = 0;
    std::vector<FieldForm> kernelBasis;    // L2-orthonormal near-kernel
    std::vector<double> kernelResiduals;   // ||D v||/||v|| per vector
    std::vector<TraceStats> traceStats;    // (1,1) systems: stats of <psi,omega>_h/2
};

SpectralReport solveSmallest(const FieldSystem& sys, const MetricField& h,
                             const SolverOptions& opt);

// principal angles (ascending, radians) between the L2 spans
std::vector<double> subspaceAngles(const std::vector<FieldForm>& A,
                                   const std::vector<FieldForm>& B, const L2Metric& l2);

// anti-self-dual d-harmonic 2-form kernel for the given metric
SpectralReport asdHarmonicKernel(const FieldGeometry& geom, const MetricField& h,
                                 const SolverOptions& opt);

// pointwise trace f = <psi, omega>_h / 2 of a (1,1) field form
GridData traceFunction(const FieldGeometry& geom, const MetricField& h, const FieldForm& psi);

} // namespace kt
