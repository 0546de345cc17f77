//==============================================================================
// field_calculus.hpp
// (p,q)-forms with grid-function coefficients on the twisted lattice: frame
// derivatives (4th-order central differences, twisted wrap in x1), the
// exterior derivative through the dual (1,0)-frame, pointwise Hodge star for
// sampled metrics, L2 inner products against the metric volume density, Lee
// form / Gauduchon defect / classification for non-invariant metrics, and
// the binary / CSV exchange formats.
//==============================================================================
#pragma once

#include <map>
#include <string>
#include "kt/exterior_d.hpp"
#include "kt/metric.hpp"
#include "kt/twisted_grid.hpp"

namespace kt {

using cd = std::complex<double>;

// Frame/structure tables of an (algebra, frame) pair in double precision,
// plus the exact originals where assembly needs them.
struct FieldGeometry {
    std::shared_ptr<const TwistedGrid> grid;
    std::array<std::array<cd, 4>, 4> V{};        // rows V1,V2,V1b,V2b over e_1..e_4
    std::array<std::array<CQ, 4>, 4> Vexact{};
    std::array<std::array<cd, 16>, 4> dPhi{};    // invariant d of each coframe slot
    std::array<InvariantForm, 4> dPhiExact;
    cd detQ{};
    std::array<std::array<cd, 4>, 4> Q{};        // Phi^m = sum_j Q(m,j) e^j

    static FieldGeometry make(std::shared_ptr<const TwistedGrid> grid,
                              const NilLieAlgebra& alg, const AcsFrame& frame);
};

struct FieldForm {
    std::shared_ptr<const TwistedGrid> grid;
    std::map<int, GridData> comp;    // mask -> samples

    explicit FieldForm(std::shared_ptr<const TwistedGrid> g = nullptr) : grid(std::move(g)) {}

    GridData& ensure(int mask);
    const GridData* find(int mask) const;

    FieldForm part(int p, int q) const;
    double maxNorm() const;
    void prune(double eps = 0.0);    // drop identically-small components

    // constant-coefficient form sampled onto the grid
    static FieldForm fromInvariant(std::shared_ptr<const TwistedGrid> g, const InvariantForm& a);
    // single component from an expression
    static FieldForm fromExpression(std::shared_ptr<const TwistedGrid> g, int mask,
                                    const Expression& e,
                                    const std::map<std::string, cd>& params);

    friend FieldForm operator+(const FieldForm& a, const FieldForm& b);
    friend FieldForm operator-(const FieldForm& a, const FieldForm& b);
    friend FieldForm operator*(const cd& s, const FieldForm& a);
};

// 4th-order central difference along one coordinate axis (divided by h)
GridData axisDiff(const TwistedGrid& g, const GridData& u, int axis);
// frame vector fields: e_1 = d1, e_2 = d2 + x1 d3, e_3 = d3, e_4 = d4
GridData frameDerivative(const TwistedGrid& g, const GridData& u, int k /*1..4*/);

FieldForm dField(const FieldGeometry& geom, const FieldForm& a);
FieldForm dbarField(const FieldGeometry& geom, const FieldForm& a);   // (p,q+1) parts
FieldForm partialField(const FieldGeometry& geom, const FieldForm& a);
FieldForm jActionField(const FieldForm& a);
FieldForm dcField(const FieldGeometry& geom, const FieldForm& a);
FieldForm wedgeField(const FieldForm& a, const FieldForm& b);

// per-site star restricted to a fixed list of input masks
struct StarBlock {
    std::vector<int> inMasks, outMasks;
    bool constant = true;
    std::vector<cd> m;    // (site-major when not constant) nout x nin blocks

    const cd* at(std::size_t site) const {
        return m.data() + (constant ? 0 : site * inMasks.size() * outMasks.size());
    }
};
StarBlock makeStarBlock(const FieldGeometry& geom, const MetricField& h,
                        const std::vector<int>& inMasks);

FieldForm starField(const FieldGeometry& geom, const MetricField& h, const FieldForm& a);
FieldForm fundamentalFieldForm(const FieldGeometry& geom, const MetricField& h);

// L2 structure for forms supported on a fixed mask list: pointwise Gram of
// the metric plus the volume density rho = det(h) |detQ| / 4
struct L2Metric {
    std::shared_ptr<const TwistedGrid> grid;
    std::vector<int> masks;
    bool constant = true;
    std::vector<cd> gram;      // n x n blocks, site-major when not constant
    std::vector<double> rho;   // 1 or per-site

    const cd* gramAt(std::size_t site) const {
        return gram.data() + (constant ? 0 : site * masks.size() * masks.size());
    }
    double rhoAt(std::size_t site) const { return constant ? rho[0] : rho[site]; }
};
L2Metric makeL2Metric(const FieldGeometry& geom, const MetricField& h,
                      const std::vector<int>& masks);
cd dotL2(const L2Metric& g, const FieldForm& a, const FieldForm& b);

// plain coefficient l2 norms (site-mean), no metric weights
double coefNorm(const FieldForm& a);

// mean of the e^{1234} coefficient (top-degree input)
cd integrateField(const FieldGeometry& geom, const FieldForm& a);

struct FieldLee {
    FieldForm theta;
    double residual;    // max-norm of d omega - theta ^ omega
};
FieldLee leeFormField(const FieldGeometry& geom, const MetricField& h);
FieldForm gauduchonDefectField(const FieldGeometry& geom, const MetricField& h);

MetricClass classifyFieldMetric(const FieldGeometry& geom, const MetricField& h,
                                const std::vector<std::array<Rational, 4>>& refHarmonic1Forms,
                                double tol = 1e-9);

// binary layout: "KTGRID1\n", u32 n[4] (points per axis), u32 ncomp, then per
// component a u32 mask followed by sites() little-endian (re,im) f64 pairs in
// row-major site order (i4 fastest)
void writeGridBinary(const std::string& path, const FieldForm& a);
FieldForm readGridBinary(const std::string& path);
// 2-d slice at fixed i3, i4: rows "x1,x2,re,im"
void writeCsvSlice(const std::string& path, const FieldForm& a, int mask, int i3, int i4);

} // namespace kt
