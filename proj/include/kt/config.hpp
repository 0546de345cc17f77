//==============================================================================
// config.hpp
// Run configuration: INI-style sections with key = value pairs describing the
// manifold (structure constants or preset), the frame, the metric, free
// parameters, and the solver controls. Presets expand to explicit values
// before execution and the expansion is recorded for the report echo.
//==============================================================================
#pragma once

#include <map>
#include <string>
#include <vector>
#include "kt/field_calculus.hpp"
#include "kt/spectral.hpp"

namespace kt {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    // expanded state
    NilLieAlgebra algebra;
    std::string manifoldName = "kodaira-thurston";
    Mat<CQ> frameP;                    // 2x4
    std::string frameName = "Ja";
    std::array<std::string, 4> metricEntries{"1", "0", "0", "1"};
    std::string metricName = "omega_a";

    std::map<std::string, std::string> paramText;   // as written
    std::map<std::string, CQ> paramExact;           // entries that parse exactly
    std::map<std::string, cd> paramValue;

    int gridN = 8;
    int gridN4 = 0;                    // 0: same as gridN
    SolverOptions solver;

    std::vector<std::string> expansionLog;

    // --- assembly helpers -------------------------------------------------
    AcsFrame frame() const { return AcsFrame(frameP); }
    MetricSpec metricSpec() const;
    std::set<std::string> paramNames() const;

    static RunConfig fromPreset(const std::string& name);
    static RunConfig fromIniFile(const std::string& path);
    static RunConfig fromIniText(const std::string& text);

    // applies "key=value" overrides (parameters or solver keys)
    void setParam(const std::string& key, const std::string& value);
    void finalize();                   // re-expands presets, validates bindings
};

} // namespace kt
