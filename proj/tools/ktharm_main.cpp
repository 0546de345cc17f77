//==============================================================================
// ktharm_main.cpp
// Command-line front end: structured-text configs or named presets in, JSON
// reports and CSV tables out.
//
// Exit codes: 0 ok, 2 invalid algebra (d^2 != 0), 3 invalid metric,
// 4 indeterminate spectrum, 1 other errors.
//==============================================================================
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"

#include "kt/config.hpp"
#include "kt/cohomology.hpp"
#include "kt/spectral.hpp"

using namespace kt;
using json = nlohmann::ordered_json;

namespace {

struct CliState {
    std::string configPath, preset;
    std::vector<std::string> params;
    int grid = 0, grid4 = 0, numSv = 0;
    long long seed = -1;
    std::string jsonPath, csvPath;
    std::string verifyBasisPath, compareConformal, exportBasisPrefix;
    std::string sweepParam, sweepValues, gridsList;
};

RunConfig loadConfig(const CliState& cli) {
    RunConfig cfg;
    if (!cli.configPath.empty()) cfg = RunConfig::fromIniFile(cli.configPath);
    else if (!cli.preset.empty()) cfg = RunConfig::fromPreset(cli.preset);
    else cfg = RunConfig::fromPreset("omega_a");
    for (const auto& p : cli.params) {
        auto eq = p.find('=');
        if (eq == std::string::npos) throw ConfigError("--param expects key=value, got " + p);
        cfg.setParam(p.substr(0, eq), p.substr(eq + 1));
    }
    if (cli.grid > 0) cfg.gridN = cli.grid;
    if (cli.grid4 > 0) cfg.gridN4 = cli.grid4;
    if (cli.numSv > 0) cfg.solver.k = cli.numSv;
    if (cli.seed >= 0) cfg.solver.seed = (unsigned)cli.seed;
    cfg.finalize();
    return cfg;
}

json configEcho(const RunConfig& cfg) {
    json j;
    j["manifold"] = cfg.manifoldName;
    j["frame"] = cfg.frameName;
    j["metric"] = cfg.metricName;
    json h = json::array();
    for (const auto& e : cfg.metricEntries) h.push_back(e);
    j["metric_entries"] = h;
    json params;
    for (const auto& [k, v] : cfg.paramText) params[k] = v;
    j["params"] = params;
    j["N"] = cfg.gridN;
    j["N4"] = cfg.gridN4 > 0 ? cfg.gridN4 : cfg.gridN;
    j["k"] = cfg.solver.k;
    j["seed"] = cfg.solver.seed;
    j["gap_factor"] = cfg.solver.gapFactor;
    j["cap_factor"] = cfg.solver.capFactor;
    j["null_penalty"] = cfg.solver.nullPenalty;
    json exp = json::array();
    for (const auto& s : cfg.expansionLog) exp.push_back(s);
    j["expansion"] = exp;
    return j;
}

void writeOutputs(const json& report, const CliState& cli) {
    if (!cli.jsonPath.empty()) {
        std::ofstream f(cli.jsonPath);
        f << report.dump(2) << "\n";
    }
}

json maskTerms(const InvariantForm& f) {
    json terms = json::array();
    for (int m = 0; m < 16; ++m) {
        if (f.c[m].isZero()) continue;
        json t;
        t["basis"] = mask::name(m);
        t["coef"] = cqStr(f.c[m]);
        terms.push_back(t);
    }
    return terms;
}

std::vector<std::array<Rational, 4>> referenceHarmonicOneForms(const NilLieAlgebra& alg) {
    auto h1 = harmonicInvariantForms(alg, RiemannianMetric::identity(), 1);
    std::vector<std::array<Rational, 4>> out;
    for (const auto& f : h1) {
        std::array<Rational, 4> v;
        for (int j = 0; j < 4; ++j) v[j] = f.c[1 << j];
        out.push_back(v);
    }
    return out;
}

int validateAlgebraOrExit(const RunConfig& cfg, json& report) {
    if (auto defect = cfg.algebra.d2Defect()) {
        report["error"] = "invalid algebra: " + *defect;
        std::cerr << "invalid algebra: " << *defect << "\n";
        return 2;
    }
    return 0;
}

// ---------------------------------------------------------------------------

int cmdCheckStructure(const CliState& cli) {
    RunConfig cfg = loadConfig(cli);
    json report;
    report["schema_version"] = 1;
    report["tool"] = "ktharm";
    report["command"] = "check-structure";
    report["config"] = configEcho(cfg);

    int rc = validateAlgebraOrExit(cfg, report);
    if (rc) { writeOutputs(report, cli); return rc; }

    AcsFrame fr = cfg.frame();
    ExteriorD D(cfg.algebra, fr);
    json structure;
    json rows = json::array();
    std::printf("structure equations (%s, %s):\n", cfg.manifoldName.c_str(), cfg.frameName.c_str());
    for (const auto& row : D.structureEquations()) {
        json r;
        r["coframe"] = "Phi^" + std::to_string(row.coframeSlot + 1);
        json terms = json::array();
        std::string line = "  d Phi^" + std::to_string(row.coframeSlot + 1) + " = ";
        if (row.terms.empty()) line += "0";
        for (std::size_t i = 0; i < row.terms.size(); ++i) {
            json t;
            t["basis"] = mask::name(row.terms[i].first);
            t["coef"] = cqStr(row.terms[i].second);
            terms.push_back(t);
            if (i) line += "  +  ";
            line += "(" + cqStr(row.terms[i].second) + ") " + mask::name(row.terms[i].first);
        }
        std::printf("%s\n", line.c_str());
        r["terms"] = terms;
        rows.push_back(r);
    }
    structure["dPhi"] = rows;

    auto idrep = D.verifyD2Identities();
    json ids;
    bool allOk = true;
    for (int i = 0; i < 7; ++i) {
        ids[ExteriorD::IdentityReport::names()[i]] = idrep.holds[i];
        allOk = allOk && idrep.holds[i];
        std::printf("  identity %-45s %s\n", ExteriorD::IdentityReport::names()[i].c_str(),
                    idrep.holds[i] ? "holds" : "FAILS");
    }
    structure["identities"] = ids;
    structure["integrable"] = D.isIntegrable();
    std::printf("  integrable: %s\n", D.isIntegrable() ? "true" : "false");
    report["structure"] = structure;
    writeOutputs(report, cli);
    if (!allOk) return 2;
    return 0;
}

int cmdClassify(const CliState& cli) {
    RunConfig cfg = loadConfig(cli);
    json report;
    report["schema_version"] = 1;
    report["tool"] = "ktharm";
    report["command"] = "classify";
    report["config"] = configEcho(cfg);

    int rc = validateAlgebraOrExit(cfg, report);
    if (rc) { writeOutputs(report, cli); return rc; }

    AcsFrame fr = cfg.frame();
    ExteriorD D(cfg.algebra, fr);
    auto ref = referenceHarmonicOneForms(cfg.algebra);
    MetricSpec spec = cfg.metricSpec();
    json cls;
    try {
        if (auto cm = spec.tryConstant(cfg.paramExact)) {
            if (!cm->isHermitianPD())
                throw MetricPdError(0);
            LeeFormResult lee = leeForm(D, fr, *cm);
            MetricClass mc = classifyInvariantMetric(D, fr, *cm, ref);
            cls["kind"] = "invariant";
            cls["lee_form"] = maskTerms(lee.theta);
            auto te = toRealCoframe(fr, lee.theta);
            json tr = json::array();
            for (int j = 0; j < 4; ++j) tr.push_back(cqStr(te[j]));
            cls["lee_form_real_coframe"] = tr;
            cls["lee_residual_zero"] = lee.residualZero;
            cls["d_theta_zero"] = D.d(lee.theta).isZero();
            cls["gauduchon_defect_zero"] = gauduchonDefect(D, fr, *cm).isZero();
            cls["class"] = metricClassName(mc);
            std::printf("class: %s\n", metricClassName(mc));
        } else {
            auto grid = TwistedGrid::make(cfg.gridN, cfg.gridN4);
            FieldGeometry geom = FieldGeometry::make(grid, cfg.algebra, fr);
            double qdef = spec.quotientDefect(cfg.paramValue);
            MetricField h = spec.sample(*grid, cfg.paramValue);
            FieldLee lee = leeFormField(geom, h);
            MetricClass mc = classifyFieldMetric(geom, h, ref);
            cls["kind"] = "field";
            cls["quotient_defect"] = qdef;
            if (qdef > 1e-9)
                std::fprintf(stderr, "warning: metric entries fail quotient periodicity (%.3g)\n", qdef);
            cls["lee_residual"] = lee.residual;
            cls["d_theta_max"] = dField(geom, lee.theta).maxNorm();
            cls["gauduchon_defect_max"] = gauduchonDefectField(geom, h).maxNorm();
            cls["class"] = metricClassName(mc);
            std::printf("class: %s\n", metricClassName(mc));
        }
    } catch (const MetricPdError& e) {
        report["error"] = e.what();
        std::cerr << e.what() << "\n";
        writeOutputs(report, cli);
        return 3;
    } catch (const std::domain_error& e) {
        report["error"] = e.what();
        std::cerr << e.what() << "\n";
        writeOutputs(report, cli);
        return 3;
    }
    report["classification"] = cls;
    writeOutputs(report, cli);
    return 0;
}

int cmdBetti(const CliState& cli) {
    RunConfig cfg = loadConfig(cli);
    json report;
    report["schema_version"] = 1;
    report["tool"] = "ktharm";
    report["command"] = "betti";
    report["config"] = configEcho(cfg);

    int rc = validateAlgebraOrExit(cfg, report);
    if (rc) { writeOutputs(report, cli); return rc; }

    BettiReport br = bettiReport(cfg.algebra, RiemannianMetric::identity());
    json b;
    b["b"] = {br.b[0], br.b[1], br.b[2], br.b[3], br.b[4]};
    b["b_plus"] = br.bPlus;
    b["b_minus"] = br.bMinus;
    b["euler_characteristic"] = br.eulerCharacteristic();
    for (int k = 0; k <= 4; ++k) {
        json basis = json::array();
        for (const auto& f : br.harmonicBasis[k]) basis.push_back(f.str());
        b["harmonic_basis_deg" + std::to_string(k)] = basis;
    }
    json sd = json::array(), asd = json::array();
    for (const auto& f : br.sdBasis) sd.push_back(f.str());
    for (const auto& f : br.asdBasis) asd.push_back(f.str());
    b["self_dual_basis"] = sd;
    b["anti_self_dual_basis"] = asd;
    report["betti"] = b;
    std::printf("b = (%d, %d, %d, %d, %d),  b+ = %d,  b- = %d\n", br.b[0], br.b[1], br.b[2],
                br.b[3], br.b[4], br.bPlus, br.bMinus);
    writeOutputs(report, cli);
    return 0;
}

json spectralJson(const SpectralReport& rep) {
    json s;
    s["status"] = rep.status;
    s["dimension"] = rep.dimension;
    json sv = json::array();
    for (double v : rep.singularValues) sv.push_back(v);
    s["singular_values"] = sv;
    s["gap_ratio"] = rep.gapRatio;
    s["scale"] = rep.scale;
    s["cap"] = rep.cap;
    s["seed"] = rep.seed;
    s["matvecs"] = rep.matvecs;
    s["restarts"] = rep.restarts;
    s["diagnostic"] = rep.diagnostic;
    json res = json::array();
    for (double v : rep.kernelResiduals) res.push_back(v);
    s["residuals"] = res;
    json tr = json::array();
    for (const auto& t : rep.traceStats) {
        json e;
        e["mean_abs"] = t.meanAbs;
        e["stddev"] = t.stddev;
        tr.push_back(e);
    }
    s["trace_stats"] = tr;
    s["wall_ms"] = rep.wallMs;
    return s;
}

struct SpectralRun {
    std::shared_ptr<const TwistedGrid> grid;
    FieldGeometry geom;
    MetricField h;
    FieldSystem sys;
    SpectralReport rep;
};

SpectralRun runHarmonic11(const RunConfig& cfg) {
    SpectralRun r;
    r.grid = TwistedGrid::make(cfg.gridN, cfg.gridN4);
    AcsFrame fr = cfg.frame();
    r.geom = FieldGeometry::make(r.grid, cfg.algebra, fr);
    MetricSpec spec = cfg.metricSpec();
    double qdef = spec.quotientDefect(cfg.paramValue);
    if (qdef > 1e-9)
        std::fprintf(stderr, "warning: metric entries fail quotient periodicity (%.3g)\n", qdef);
    r.h = spec.sample(*r.grid, cfg.paramValue);
    r.sys = FieldSystem::harmonic11(r.geom, r.h, cfg.solver.nullPenalty);
    r.rep = solveSmallest(r.sys, r.h, cfg.solver);
    return r;
}

void printSpectral(const SpectralReport& rep) {
    std::printf("status %s, dimension %d, gap %.4g, scale %.4g, matvecs %ld\n",
                rep.status.c_str(), rep.dimension, rep.gapRatio, rep.scale, rep.matvecs);
    std::printf("singular values:");
    for (double v : rep.singularValues) std::printf(" %.4e", v);
    std::printf("\n");
    for (std::size_t i = 0; i < rep.kernelResiduals.size(); ++i)
        std::printf("kernel vector %zu: residual %.3e\n", i, rep.kernelResiduals[i]);
}

int cmdHarmonic11(const CliState& cli) {
    RunConfig cfg = loadConfig(cli);
    json report;
    report["schema_version"] = 1;
    report["tool"] = "ktharm";
    report["command"] = "harmonic11";
    report["config"] = configEcho(cfg);

    int rc = validateAlgebraOrExit(cfg, report);
    if (rc) { writeOutputs(report, cli); return rc; }

    try {
        SpectralRun run = runHarmonic11(cfg);
        report["spectral"] = spectralJson(run.rep);
        report["spectral"]["metric"] = cfg.metricName;
        report["spectral"]["N"] = cfg.gridN;
        report["spectral"]["k"] = cfg.solver.k;
        printSpectral(run.rep);

        if (!cli.exportBasisPrefix.empty()) {
            json files = json::array();
            for (std::size_t i = 0; i < run.rep.kernelBasis.size(); ++i) {
                std::string path = cli.exportBasisPrefix + "_" + std::to_string(i) + ".grid";
                writeGridBinary(path, run.rep.kernelBasis[i]);
                files.push_back(path);
            }
            report["basis_files"] = files;
        }

        if (!cli.verifyBasisPath.empty()) {
            std::ifstream f(cli.verifyBasisPath);
            if (!f) throw std::runtime_error("cannot open " + cli.verifyBasisPath);
            json vb = json::parse(f);
            json out = json::array();
            std::vector<FieldForm> candidates;
            std::set<std::string> names = cfg.paramNames();
            const int slots[4] = {0b0101, 0b1001, 0b0110, 0b1010};
            const char* keys[4] = {"A", "B", "L", "M"};
            for (const auto& formSpec : vb.at("forms")) {
                FieldForm cand(run.grid);
                for (int c = 0; c < 4; ++c) {
                    if (!formSpec.contains(keys[c])) continue;
                    Expression e = Expression::parse(formSpec[keys[c]].get<std::string>(), names);
                    FieldForm comp = FieldForm::fromExpression(run.grid, slots[c], e, cfg.paramValue);
                    cand = cand + comp;
                }
                json entry;
                entry["residual"] = run.sys.residual(cand);
                out.push_back(entry);
                candidates.push_back(cand);
            }
            if (!run.rep.kernelBasis.empty() && !candidates.empty()) {
                L2Metric l2 = makeL2Metric(run.geom, run.h, masks11());
                auto angles = subspaceAngles(run.rep.kernelBasis, candidates, l2);
                json ja = json::array();
                for (double a : angles) ja.push_back(a);
                report["verify_basis_angles"] = ja;
                std::printf("principal angles to the candidate span:");
                for (double a : angles) std::printf(" %.3e", a);
                std::printf("\n");
            }
            report["verify_basis"] = out;
            for (std::size_t i = 0; i < candidates.size(); ++i)
                std::printf("candidate %zu residual: %.3e\n", i,
                            out[i]["residual"].get<double>());
        }

        if (!cli.compareConformal.empty()) {
            RunConfig cfg2 = cfg;
            for (int e = 0; e < 4; ++e)
                cfg2.metricEntries[e] = "(" + cli.compareConformal + ")*(" + cfg.metricEntries[e] + ")";
            cfg2.metricName = cfg.metricName + "_conformal";
            cfg2.finalize();
            SpectralRun run2 = runHarmonic11(cfg2);
            double dist = run.sys.coefficientDistance(run2.sys);
            json cc;
            cc["factor"] = cli.compareConformal;
            cc["operator_coefficient_distance"] = dist;
            cc["spectral"] = spectralJson(run2.rep);
            if (!run.rep.kernelBasis.empty() && !run2.rep.kernelBasis.empty()) {
                L2Metric l2 = makeL2Metric(run.geom, run.h, masks11());
                auto angles = subspaceAngles(run.rep.kernelBasis, run2.rep.kernelBasis, l2);
                json ja = json::array();
                for (double a : angles) ja.push_back(a);
                cc["kernel_angles"] = ja;
            }
            report["compare_conformal"] = cc;
            std::printf("conformal comparison: coefficient distance %.3e\n", dist);
        }

        writeOutputs(report, cli);
        return run.rep.status == "ok" ? 0 : 4;
    } catch (const MetricPdError& e) {
        report["error"] = e.what();
        std::cerr << e.what() << "\n";
        writeOutputs(report, cli);
        return 3;
    }
}

int cmdAsd(const CliState& cli) {
    RunConfig cfg = loadConfig(cli);
    json report;
    report["schema_version"] = 1;
    report["tool"] = "ktharm";
    report["command"] = "asd";
    report["config"] = configEcho(cfg);
    int rc = validateAlgebraOrExit(cfg, report);
    if (rc) { writeOutputs(report, cli); return rc; }
    try {
        auto grid = TwistedGrid::make(cfg.gridN, cfg.gridN4);
        AcsFrame fr = cfg.frame();
        FieldGeometry geom = FieldGeometry::make(grid, cfg.algebra, fr);
        MetricField h = cfg.metricSpec().sample(*grid, cfg.paramValue);
        SpectralReport rep = asdHarmonicKernel(geom, h, cfg.solver);
        report["spectral"] = spectralJson(rep);
        // Prop-style inclusion: the (1,1) part of every ASD kernel vector is
        // dbar-harmonic for the same metric
        FieldSystem h11 = FieldSystem::harmonic11(geom, h, cfg.solver.nullPenalty);
        json incl = json::array();
        for (const auto& g : rep.kernelBasis)
            incl.push_back(h11.residual(g.part(1, 1)));
        report["harmonic11_residuals"] = incl;
        printSpectral(rep);
        writeOutputs(report, cli);
        return rep.status == "ok" ? 0 : 4;
    } catch (const MetricPdError& e) {
        report["error"] = e.what();
        std::cerr << e.what() << "\n";
        writeOutputs(report, cli);
        return 3;
    }
}

void csvHeader(std::ofstream& f, int k) {
    f << "schema_version,command,param,value,N,N4,kreq,seed,status,dimension,gap_ratio";
    for (int i = 1; i <= k; ++i) f << ",sv" << i;
    f << ",wall_ms\n";
}

void csvRow(std::ofstream& f, const std::string& cmd, const std::string& param,
            const std::string& value, const RunConfig& cfg, const SpectralReport& rep) {
    char buf[64];
    f << 1 << "," << cmd << "," << param << "," << value << "," << cfg.gridN << ","
      << (cfg.gridN4 > 0 ? cfg.gridN4 : cfg.gridN) << "," << cfg.solver.k << ","
      << cfg.solver.seed << "," << rep.status << "," << rep.dimension << ",";
    std::snprintf(buf, sizeof buf, "%.6g", rep.gapRatio);
    f << buf;
    for (int i = 0; i < cfg.solver.k; ++i) {
        double v = i < (int)rep.singularValues.size() ? rep.singularValues[i] : 0.0;
        std::snprintf(buf, sizeof buf, ",%.12e", v);
        f << buf;
    }
    std::snprintf(buf, sizeof buf, ",%.0f", rep.wallMs);
    f << buf << "\n";
}

int cmdSweep(const CliState& cli) {
    if (cli.sweepParam.empty() || cli.sweepValues.empty())
        throw ConfigError("sweep needs --sweep-param and --sweep-values");
    RunConfig base = loadConfig(cli);
    std::ofstream csv;
    if (!cli.csvPath.empty()) {
        csv.open(cli.csvPath);
        csvHeader(csv, base.solver.k);
    }
    json rows = json::array();
    std::stringstream ss(cli.sweepValues);
    std::string val;
    int failures = 0;
    while (std::getline(ss, val, ',')) {
        RunConfig cfg = base;
        cfg.setParam(cli.sweepParam, val);
        try {
            cfg.finalize();
            SpectralRun run = runHarmonic11(cfg);
            std::printf("%s = %-8s -> dim %d (%s)\n", cli.sweepParam.c_str(), val.c_str(),
                        run.rep.dimension, run.rep.status.c_str());
            if (csv.is_open()) csvRow(csv, "sweep", cli.sweepParam, val, cfg, run.rep);
            json r;
            r["value"] = val;
            r["spectral"] = spectralJson(run.rep);
            rows.push_back(r);
        } catch (const std::exception& e) {
            ++failures;
            std::fprintf(stderr, "sweep value %s failed: %s\n", val.c_str(), e.what());
            json r;
            r["value"] = val;
            r["error"] = e.what();
            rows.push_back(r);
        }
    }
    json report;
    report["schema_version"] = 1;
    report["tool"] = "ktharm";
    report["command"] = "sweep";
    report["config"] = configEcho(base);
    report["param"] = cli.sweepParam;
    report["rows"] = rows;
    writeOutputs(report, cli);
    return failures == 0 ? 0 : 1;
}

int cmdConvergence(const CliState& cli) {
    if (cli.gridsList.empty()) throw ConfigError("convergence needs --grids");
    RunConfig base = loadConfig(cli);
    std::ofstream csv;
    if (!cli.csvPath.empty()) {
        csv.open(cli.csvPath);
        csvHeader(csv, base.solver.k);
    }
    json rows = json::array();
    std::stringstream ss(cli.gridsList);
    std::string val;
    int failures = 0;
    while (std::getline(ss, val, ',')) {
        RunConfig cfg = base;
        try {
            cfg.gridN = std::stoi(val);
            cfg.gridN4 = 0;
            cfg.finalize();
            SpectralRun run = runHarmonic11(cfg);
            std::printf("N = %-4d -> dim %d (%s), sv:", cfg.gridN, run.rep.dimension,
                        run.rep.status.c_str());
            for (double v : run.rep.singularValues) std::printf(" %.3e", v);
            std::printf("\n");
            if (csv.is_open()) csvRow(csv, "convergence", "N", val, cfg, run.rep);
            json r;
            r["N"] = cfg.gridN;
            r["spectral"] = spectralJson(run.rep);
            rows.push_back(r);
        } catch (const std::exception& e) {
            ++failures;
            std::fprintf(stderr, "grid %s failed: %s\n", val.c_str(), e.what());
            json r;
            r["N"] = val;
            r["error"] = e.what();
            rows.push_back(r);
        }
    }
    json report;
    report["schema_version"] = 1;
    report["tool"] = "ktharm";
    report["command"] = "convergence";
    report["config"] = configEcho(base);
    report["rows"] = rows;
    writeOutputs(report, cli);
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"almost-Hermitian invariants and dbar-harmonic (1,1)-forms on 4-d nilmanifolds"};
    app.require_subcommand(1);

    CliState cli;
    app.add_option("--config", cli.configPath, "INI config file");
    app.add_option("--preset", cli.preset, "named preset (omega_a, omega_0, omega_tilde_a, omega_tf, reference)");
    app.add_option("--param", cli.params, "parameter override key=value (repeatable)");
    app.add_option("--grid", cli.grid, "points per axis N");
    app.add_option("--grid4", cli.grid4, "points along x4 (defaults to N)");
    app.add_option("--num-sv", cli.numSv, "number of singular values");
    app.add_option("--seed", cli.seed, "solver seed");
    app.add_option("--json", cli.jsonPath, "write the JSON report here");
    app.add_option("--csv", cli.csvPath, "write the CSV table here (sweep/convergence)");

    auto* cs = app.add_subcommand("check-structure", "structure equations and d^2 identities");
    auto* cc = app.add_subcommand("classify", "Lee form and LCK/GCK classification");
    auto* cb = app.add_subcommand("betti", "Betti numbers and harmonic bases");
    auto* ch = app.add_subcommand("harmonic11", "dbar-harmonic (1,1) kernel dimension and basis");
    ch->add_option("--verify-basis", cli.verifyBasisPath, "JSON file of candidate forms (A,B,L,M expressions)");
    ch->add_option("--compare-conformal", cli.compareConformal, "rerun with a conformally rescaled metric");
    ch->add_option("--export-basis", cli.exportBasisPrefix, "write kernel basis grids with this prefix");
    auto* ca = app.add_subcommand("asd", "anti-self-dual d-harmonic 2-form kernel");
    auto* cw = app.add_subcommand("sweep", "rerun harmonic11 over parameter values");
    cw->add_option("--sweep-param", cli.sweepParam, "parameter to sweep");
    cw->add_option("--sweep-values", cli.sweepValues, "comma-separated values");
    auto* cv = app.add_subcommand("convergence", "rerun harmonic11 over grid sizes");
    cv->add_option("--grids", cli.gridsList, "comma-separated grid sizes");

    for (auto* sub : app.get_subcommands({})) (void)sub;
    for (auto* sub : {cs, cc, cb, ch, ca, cw, cv}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cs->parsed()) return cmdCheckStructure(cli);
        if (cc->parsed()) return cmdClassify(cli);
        if (cb->parsed()) return cmdBetti(cli);
        if (ch->parsed()) return cmdHarmonic11(cli);
        if (ca->parsed()) return cmdAsd(cli);
        if (cw->parsed()) return cmdSweep(cli);
        if (cv->parsed()) return cmdConvergence(cli);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
