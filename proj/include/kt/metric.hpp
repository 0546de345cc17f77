//==============================================================================
// metric.hpp
// Hermitian metric specification in the Phi-coframe: each of the four entries
// of h is either an exact complex rational or a coordinate expression. The
// fundamental form is omega = (i/2) sum h_jk Phi^j ^ Phi^kbar. Sampling onto
// a grid validates conjugate symmetry and positive definiteness at every
// site (reporting the offending site), and warns when an entry fails the
// quotient periodicity check.
//==============================================================================
#pragma once

#include <variant>
#include "kt/expression.hpp"
#include "kt/hermitian.hpp"
#include "kt/twisted_grid.hpp"

namespace kt {

struct MetricField {
    bool constant = true;
    std::array<std::complex<double>, 4> h0{};                 // h11,h12,h21,h22
    std::vector<std::array<std::complex<double>, 4>> hs;      // per site when not constant

    const std::array<std::complex<double>, 4>& at(std::size_t i) const {
        return constant ? h0 : hs[i];
    }
};

struct MetricPdError : std::domain_error {
    std::size_t site;
    explicit MetricPdError(std::size_t s)
        : std::domain_error("metric not positive definite at site " + std::to_string(s)),
          site(s) {}
};

class MetricSpec {
public:
    MetricSpec() = default;

    // entries as expression strings over the given parameter names
    static MetricSpec fromStrings(const std::string& h11, const std::string& h12,
                                  const std::string& h21, const std::string& h22,
                                  const std::set<std::string>& params);
    static MetricSpec fromConst(const ConstMetric& h);

    // exact constant view; empty when any entry needs coordinates/transcendentals
    std::optional<ConstMetric> tryConstant(const std::map<std::string, CQ>& exactParams) const;

    bool dependsOnCoordinates() const;

    // evaluate on the grid; enforces h21 = conj(h12) and real diagonal within
    // hermTol, throws MetricPdError at the first non-PD site
    MetricField sample(const TwistedGrid& grid,
                       const std::map<std::string, std::complex<double>>& params,
                       double hermTol = 1e-9) const;

    // worst quotient-periodicity defect across the four entries
    double quotientDefect(const std::map<std::string, std::complex<double>>& params) const;

    const std::array<std::string, 4>& sourceText() const { return text_; }

private:
    std::array<Expression, 4> e_;     // h11,h12,h21,h22
    std::array<std::string, 4> text_;
};

} // namespace kt
