//==============================================================================
// acceptance_main.cpp
// End-to-end acceptance suite. Each numbered criterion prints one PASS/FAIL
// line with the measured quantities; the process exits nonzero if any fail.
// Spectral runs are shared across criteria and use the fixed default seed.
//==============================================================================
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>

#include "kt/cohomology.hpp"
#include "kt/config.hpp"
#include "kt/spectral.hpp"

using namespace kt;
using clk = std::chrono::steady_clock;

namespace {

int failures = 0;

void line(int crit, bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s  (%s)\n", pass ? "PASS" : "FAIL", crit, what.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

const int M11b = 0b0101, M12b = 0b1001, M21b = 0b0110, M22b = 0b1010;

struct Run {
    std::shared_ptr<const TwistedGrid> grid;
    FieldGeometry geom;
    MetricField h;
    FieldSystem sys;
    SpectralReport rep;
    double wallS = 0.0;
};

Run solvePreset(const std::string& preset, int n) {
    RunConfig cfg = RunConfig::fromPreset(preset);
    cfg.gridN = n;
    cfg.finalize();
    Run r;
    auto t0 = clk::now();
    r.grid = TwistedGrid::make(cfg.gridN, cfg.gridN4);
    AcsFrame fr = cfg.frame();
    r.geom = FieldGeometry::make(r.grid, cfg.algebra, fr);
    r.h = cfg.metricSpec().sample(*r.grid, cfg.paramValue);
    r.sys = FieldSystem::harmonic11(r.geom, r.h, cfg.solver.nullPenalty);
    r.rep = solveSmallest(r.sys, r.h, cfg.solver);
    r.wallS = std::chrono::duration<double>(clk::now() - t0).count();
    return r;
}

FieldForm constantForm(std::shared_ptr<const TwistedGrid> g,
                       std::initializer_list<std::pair<int, cd>> comps) {
    FieldForm f(g);
    for (const auto& [m, v] : comps) f.ensure(m).assign(g->sites(), v);
    return f;
}

} // namespace

// --- criterion 1: exact structure-equation reproduction ---------------------
static void criterion1(const NilLieAlgebra& alg) {
    auto t0 = clk::now();
    AcsFrame fr = AcsFrame::Ja(Rational(1, 2));
    ExteriorD D(alg, fr);
    const InvariantForm& d1 = D.dCoframe(0);
    CQ mi4 = -cqi() * cq(1, 4), pi4 = cqi() * cq(1, 4);
    bool ok = d1.c[0b0011] == mi4 &&      // Phi^{1 2}
              d1.c[0b1001] == mi4 &&      // Phi^{1 2b}
              d1.c[0b0110] == pi4 &&      // Phi^{2 1b}
              d1.c[0b1010] == cq(1, 4) && // Phi^{2 2b}, a/2 at a = 1/2
              d1.c[0b1100] == mi4 &&      // Phi^{1b 2b}
              d1.c[0b0101].isZero() && D.dCoframe(1).isZero();
    for (int m : {0, 1, 2, 4, 8, 7, 11, 13, 14, 15}) ok = ok && d1.c[m].isZero();
    double dt = std::chrono::duration<double>(clk::now() - t0).count();
    line(1, ok && dt < 1.0, "structure equations of (KT, J_{1/2}) reproduced exactly",
         fmt("rational equality on all five coefficients, dPhi^2 = 0, %.3fs", dt));
}

// --- criterion 2: identity suite ---------------------------------------------
static void criterion2(const NilLieAlgebra& alg) {
    auto t0 = clk::now();
    AcsFrame frA = AcsFrame::Ja(Rational(1, 2));
    AcsFrame frE = AcsFrame::example42();
    ExteriorD DA(alg, frA), DE(alg, frE);
    bool ok = DA.verifyD2Identities().all() && DE.verifyD2Identities().all();
    std::mt19937 rng(20240601);
    std::uniform_int_distribution<int> num(-4, 4), den(1, 4);
    for (int trial = 0; trial < 100 && ok; ++trial) {
        InvariantForm a;
        a.frameTag = frA.tag();
        for (int m = 0; m < 16; ++m)
            a.c[m] = CQ(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
        ok = ok && DA.d(DA.d(a)).isZero();
    }
    double dt = std::chrono::duration<double>(clk::now() - t0).count();
    line(2, ok && dt < 5.0, "seven anticommutation identities and d^2 = 0",
         fmt("both frames, 100 random rational forms, %.3fs", dt));
}

// --- criterion 3: topology ----------------------------------------------------
static void criterion3(const NilLieAlgebra& alg) {
    auto t0 = clk::now();
    auto b = ceBetti(alg);
    auto h2 = harmonicInvariantForms(alg, RiemannianMetric::identity(), 2);
    auto split = sdAsdSplit(alg, h2, RiemannianMetric::identity());
    bool ok = b[2] == 4 && split.bMinus == 2;
    std::mt19937 rng(424242);
    std::uniform_int_distribution<int> num(-2, 2), den(1, 2);
    int done = 0;
    while (done < 3 && ok) {
        Mat<Rational> A(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                A(i, j) = Rational(num(rng), den(rng)) + (i == j ? Rational(2) : Rational(0));
        if (A.det().isZero()) continue;
        RiemannianMetric g = RiemannianMetric::fromCoframeMap(A);
        auto hh = harmonicInvariantForms(alg, g, 2);
        auto sp = sdAsdSplit(alg, hh, g);
        ok = ok && sp.bMinus == 2;
        ++done;
    }
    double dt = std::chrono::duration<double>(clk::now() - t0).count();
    line(3, ok && dt < 1.0, "b2 = 4 and b- = 2, b- stable under 3 random invariant metrics",
         fmt("b = (%d,%d,%d,%d,%d), %.3fs", b[0], b[1], b[2], b[3], b[4], dt));
}

// --- criterion 4: classification ----------------------------------------------
static void criterion4(const NilLieAlgebra& alg) {
    std::vector<std::array<Rational, 4>> ref;
    for (const auto& f : harmonicInvariantForms(alg, RiemannianMetric::identity(), 1)) {
        std::array<Rational, 4> v;
        for (int j = 0; j < 4; ++j) v[j] = f.c[1 << j];
        ref.push_back(v);
    }
    AcsFrame fr0 = AcsFrame::Ja(Rational(0));
    AcsFrame frH = AcsFrame::Ja(Rational(1, 2));
    ExteriorD D0(alg, fr0), DH(alg, frH);
    bool ok0 = classifyInvariantMetric(D0, fr0, ConstMetric::identity(), ref) ==
               MetricClass::AlmostKahler;
    bool okT = classifyInvariantMetric(DH, frH, ConstMetric::omegaTilde(Rational(1, 2)), ref) ==
               MetricClass::AlmostKahler;
    bool okA = classifyInvariantMetric(DH, frH, ConstMetric::identity(), ref) ==
               MetricClass::StrictlyLCK;
    RunConfig cfg = RunConfig::fromPreset("omega_tf");
    cfg.gridN = 8;
    cfg.finalize();
    auto grid = TwistedGrid::make(8);
    AcsFrame frE = cfg.frame();
    FieldGeometry geom = FieldGeometry::make(grid, alg, frE);
    MetricField h = cfg.metricSpec().sample(*grid, cfg.paramValue);
    bool okG = classifyFieldMetric(geom, h, ref, 1e-9) == MetricClass::GloballyConformallyKahler;
    line(4, ok0 && okT && okA && okG,
         "omega_0, omega_tilde -> AlmostKahler; omega_{1/2} -> StrictlyLCK; omega_tf -> GCK",
         fmt("%d %d %d %d", ok0, okT, okA, okG));
}

// --- criterion 5: main theorem dimensions --------------------------------------
static void criterion5(const Run& oa, const Run& o0, const Run& ot, const Run& tf) {
    auto check = [](const Run& r, int want) {
        return r.rep.status == "ok" && r.rep.dimension == want && r.rep.gapRatio >= 100.0 &&
               r.wallS <= 300.0;
    };
    bool ok = check(oa, 2) && check(o0, 3) && check(ot, 3) && check(tf, 3);
    line(5, ok, "kernel dimensions 2/3/3/3 for omega_{1/2}, omega_0, omega_tilde, omega_tf at N=8",
         fmt("dims %d/%d/%d/%d, gaps %.3g/%.3g/%.3g/%.3g, walls %.0f/%.0f/%.0f/%.0fs",
             oa.rep.dimension, o0.rep.dimension, ot.rep.dimension, tf.rep.dimension,
             oa.rep.gapRatio, o0.rep.gapRatio, ot.rep.gapRatio, tf.rep.gapRatio, oa.wallS,
             o0.wallS, ot.wallS, tf.wallS));
}

// --- criterion 6: explicit bases ------------------------------------------------
static void criterion6(const Run& oa, const Run& tf8, const Run& tf16) {
    // closed-form constant basis for omega_a at a = 1/2: i P11b + P12b - i P22b and partner
    FieldForm v1 = constantForm(oa.grid, {{M11b, cd(0, 1)}, {M12b, cd(1, 0)}, {M22b, cd(0, -1)}});
    FieldForm v2 = constantForm(oa.grid, {{M11b, cd(0, -1)}, {M21b, cd(1, 0)}, {M22b, cd(0, 1)}});
    double r1 = oa.sys.residual(v1), r2 = oa.sys.residual(v2);
    bool okResid = r1 <= 1e-12 && r2 <= 1e-12;

    L2Metric l2a = makeL2Metric(oa.geom, oa.h, masks11());
    double angA = 0.0;
    bool okAngA = false;
    if (oa.rep.kernelBasis.size() == 2) {
        auto angles = subspaceAngles(oa.rep.kernelBasis, {v1, v2}, l2a);
        angA = angles.empty() ? 1.0 : angles.back();
        okAngA = angA <= 1e-8;
    }

    auto tfSpan = [](const Run& r) {
        Expression Me = Expression::parse("exp(-2*(sin(2*pi*x2)/(2*pi)))", {});
        std::vector<FieldForm> span;
        span.push_back(constantForm(r.grid, {{M11b, cd(1, 0)}}));
        span.push_back(constantForm(r.grid, {{M12b, cd(1, 0)}, {M21b, cd(1, 0)}}));
        span.push_back(FieldForm::fromExpression(r.grid, M22b, Me, {}));
        return span;
    };
    double angTf8 = 1.0, angTf16 = 1.0;
    if (tf8.rep.kernelBasis.size() == 3) {
        L2Metric l2 = makeL2Metric(tf8.geom, tf8.h, masks11());
        angTf8 = subspaceAngles(tf8.rep.kernelBasis, tfSpan(tf8), l2).back();
    }
    if (tf16.rep.kernelBasis.size() == 3) {
        L2Metric l2 = makeL2Metric(tf16.geom, tf16.h, masks11());
        angTf16 = subspaceAngles(tf16.rep.kernelBasis, tfSpan(tf16), l2).back();
    }
    bool okTf = angTf8 <= 1e-3 && angTf8 / angTf16 >= 8.0;
    line(6, okResid && okAngA && okTf, "explicit bases match the extracted kernels",
         fmt("closed-form residuals %.2e/%.2e, omega_a angle %.2e, omega_tf angles %.2e -> %.2e (ratio %.1f)",
             r1, r2, angA, angTf8, angTf16, angTf8 / std::max(angTf16, 1e-300)));
}

// --- criterion 7: conformal invariance ------------------------------------------
static void criterion7(const NilLieAlgebra&, const Run& o0) {
    std::set<std::string> none;
    MetricSpec conf = MetricSpec::fromStrings("exp(2*sin(2*pi*x4))", "0", "0",
                                              "exp(2*sin(2*pi*x4))", none);
    MetricField hc = conf.sample(*o0.grid, {});
    FieldSystem sys2 = FieldSystem::harmonic11(o0.geom, hc, o0.sys.nullPenalty());
    double dist = o0.sys.coefficientDistance(sys2);
    RunConfig cfg = RunConfig::fromPreset("omega_0");
    cfg.gridN = 8;
    cfg.finalize();
    SpectralReport rep2 = solveSmallest(sys2, hc, cfg.solver);
    double ang = 1.0;
    if (rep2.dimension == 3 && o0.rep.dimension == 3) {
        L2Metric l2 = makeL2Metric(o0.geom, o0.h, masks11());
        ang = subspaceAngles(o0.rep.kernelBasis, rep2.kernelBasis, l2).back();
    }
    line(7, dist <= 1e-13 && ang <= 1e-8,
         "operator for exp(2 sin(2 pi x4)) * omega_0 is identical, kernels agree",
         fmt("coefficient distance %.2e, kernel angle %.2e", dist, ang));
}

// --- criterion 8: anti-self-dual inclusion ---------------------------------------
static void criterion8(const NilLieAlgebra& alg) {
    auto runInclusion = [&](const char* name, const AcsFrame& fr) {
        auto grid = TwistedGrid::make(8);
        FieldGeometry geom = FieldGeometry::make(grid, alg, fr);
        MetricField h;
        h.constant = true;
        h.h0 = {1.0, 0.0, 0.0, 1.0};
        RunConfig cfg = RunConfig::fromPreset("omega_0");
        SpectralReport rep = asdHarmonicKernel(geom, h, cfg.solver);
        FieldSystem h11 = FieldSystem::harmonic11(geom, h, cfg.solver.nullPenalty);
        double worst = rep.dimension == 2 ? 0.0 : 1.0;
        for (const auto& g : rep.kernelBasis)
            worst = std::max(worst, h11.residual(g.part(1, 1)));
        std::printf("    asd kernel for %s: dim %d, worst inclusion residual %.3e\n", name,
                    rep.dimension, worst);
        return worst;
    };
    double wRef = runInclusion("g = sum e^j x e^j", AcsFrame::example42());
    double wA = runInclusion("omega_{1/2}", AcsFrame::Ja(Rational(1, 2)));
    line(8, wRef <= 1e-8 && wA <= 1e-8,
         "ASD harmonic kernels include into the dbar-harmonic kernels",
         fmt("worst residuals %.2e and %.2e", wRef, wA));
}

// --- criterion 9: Gauduchon trace checks -----------------------------------------
static void criterion9(const NilLieAlgebra& alg, const Run& oa) {
    AcsFrame fr = AcsFrame::Ja(Rational(1, 2));
    ExteriorD D(alg, fr);
    bool gd = gauduchonDefect(D, fr, ConstMetric::identity()).isZero();
    double worstStd = 0.0, worstMean = 0.0;
    for (const auto& t : oa.rep.traceStats) {
        worstStd = std::max(worstStd, t.stddev);
        worstMean = std::max(worstMean, t.meanAbs);
    }
    bool ok = gd && oa.rep.traceStats.size() == 2 && worstStd <= 1e-8 && worstMean <= 1e-8;
    line(9, ok, "omega_{1/2} is Gauduchon and kernel traces are constant zero",
         fmt("dd^c omega = 0 exact: %d, trace std %.2e, mean %.2e", gd, worstStd, worstMean));
}

// --- criterion 10: convergence order ----------------------------------------------
static void criterion10(const Run& tf8, const Run& tf16) {
    double s8 = tf8.rep.singularValues.size() > 2 ? tf8.rep.singularValues[2] : 0.0;
    double s16 = tf16.rep.singularValues.size() > 2 ? tf16.rep.singularValues[2] : 0.0;
    double order = (s8 > 0 && s16 > 0) ? std::log2(s8 / s16) : 0.0;
    bool ok = order >= 3.2 && order <= 4.8;
    line(10, ok, "non-constant omega_tf kernel singular value decreases at order 4",
         fmt("sigma3: %.4e (N=8) -> %.4e (N=16), measured order %.2f", s8, s16, order));
}

int main() {
    std::printf("acceptance suite\n================\n");
    NilLieAlgebra alg = NilLieAlgebra::kodairaThurston();

    criterion1(alg);
    criterion2(alg);
    criterion3(alg);
    criterion4(alg);

    std::printf("... running spectral solves (N=8 presets + N=16 omega_tf)\n");
    std::fflush(stdout);
    Run oa = solvePreset("omega_a", 8);
    Run o0 = solvePreset("omega_0", 8);
    Run ot = solvePreset("omega_tilde_a", 8);
    Run tf8 = solvePreset("omega_tf", 8);
    Run tf16 = solvePreset("omega_tf", 16);

    criterion5(oa, o0, ot, tf8);
    criterion6(oa, tf8, tf16);
    criterion7(alg, o0);
    criterion8(alg);
    criterion9(alg, oa);
    criterion10(tf8, tf16);

    std::printf("================\n%s (%d failure%s)\n", failures == 0 ? "ALL PASS" : "FAILURES",
                failures, failures == 1 ? "" : "s");
    return failures == 0 ? 0 : 1;
}
