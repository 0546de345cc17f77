#include "kt/metric.hpp"

namespace kt {

MetricSpec MetricSpec::fromStrings(const std::string& h11, const std::string& h12,
                                   const std::string& h21, const std::string& h22,
                                   const std::set<std::string>& params) {
    MetricSpec m;
    m.text_ = {h11, h12, h21, h22};
    for (int k = 0; k < 4; ++k) m.e_[k] = Expression::parse(m.text_[k], params);
    return m;
}

MetricSpec MetricSpec::fromConst(const ConstMetric& h) {
    auto entry = [](const CQ& z) {
        std::string s = "(" + z.re.str() + ") + (" + z.im.str() + ")*i";
        return s;
    };
    return fromStrings(entry(h.h11), entry(h.h12), entry(h.h21), entry(h.h22), {});
}

std::optional<ConstMetric> MetricSpec::tryConstant(const std::map<std::string, CQ>& exactParams) const {
    std::array<CQ, 4> v;
    for (int k = 0; k < 4; ++k) {
        auto r = e_[k].tryExactEval(exactParams);
        if (!r) return std::nullopt;
        v[k] = *r;
    }
    return ConstMetric{v[0], v[1], v[2], v[3]};
}

bool MetricSpec::dependsOnCoordinates() const {
    for (const auto& e : e_)
        if (e.dependsOnCoordinates()) return true;
    return false;
}

MetricField MetricSpec::sample(const TwistedGrid& grid,
                               const std::map<std::string, std::complex<double>>& params,
                               double hermTol) const {
    MetricField f;
    f.constant = !dependsOnCoordinates();
    auto evalAt = [&](const std::array<double, 4>& x) {
        std::array<std::complex<double>, 4> h;
        for (int k = 0; k < 4; ++k) h[k] = e_[k].eval(x, params);
        double scale = std::abs(h[0]) + std::abs(h[1]) + std::abs(h[2]) + std::abs(h[3]) + 1.0;
        if (std::abs(h[2] - std::conj(h[1])) > hermTol * scale ||
            std::abs(h[0].imag()) > hermTol * scale || std::abs(h[3].imag()) > hermTol * scale)
            throw std::domain_error("metric entries are not conjugate-symmetric");
        h[0] = h[0].real();
        h[3] = h[3].real();
        h[2] = std::conj(h[1]);
        return h;
    };
    if (f.constant) {
        f.h0 = evalAt({0, 0, 0, 0});
        double det = (f.h0[0] * f.h0[3] - f.h0[1] * f.h0[2]).real();
        if (f.h0[0].real() <= 0.0 || det <= 0.0) throw MetricPdError(0);
        return f;
    }
    f.hs.resize(grid.sites());
    for (std::size_t i = 0; i < grid.sites(); ++i) {
        f.hs[i] = evalAt(grid.point(i));
        double det = (f.hs[i][0] * f.hs[i][3] - f.hs[i][1] * f.hs[i][2]).real();
        if (f.hs[i][0].real() <= 0.0 || det <= 0.0) throw MetricPdError(i);
    }
    return f;
}

double MetricSpec::quotientDefect(const std::map<std::string, std::complex<double>>& params) const {
    double worst = 0.0;
    for (const auto& e : e_)
        worst = std::max(worst, e.quotientPeriodicityDefect(params));
    return worst;
}

} // namespace kt
