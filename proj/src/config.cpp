#include "kt/config.hpp"
#include <fstream>
#include <sstream>

namespace kt {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

// "1/2", "-3", "0.25", "i", "1+2i" style exact complex rationals
CQ parseExactValue(const std::string& text) {
    Expression e = Expression::parse(text, {});
    auto v = e.tryExactEval({});
    if (!v) throw ConfigError("value '" + text + "' is not an exact constant");
    return *v;
}

using Sections = std::map<std::string, std::vector<std::pair<std::string, std::string>>>;

Sections parseIni(const std::string& text) {
    Sections out;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("line " + std::to_string(lineNo) + ": malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            out[section];
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineNo) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = unquote(trim(t.substr(eq + 1)));
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineNo) + ": key outside any section");
        out[section].push_back({key, value});
    }
    return out;
}

} // namespace

std::set<std::string> RunConfig::paramNames() const {
    std::set<std::string> names;
    for (const auto& [k, v] : paramText) {
        (void)v;
        names.insert(k);
    }
    return names;
}

MetricSpec RunConfig::metricSpec() const {
    return MetricSpec::fromStrings(metricEntries[0], metricEntries[1], metricEntries[2],
                                   metricEntries[3], paramNames());
}

static Mat<CQ> frameRows(const CQ& p00, const CQ& p01, const CQ& p02, const CQ& p03,
                         const CQ& p10, const CQ& p11, const CQ& p12, const CQ& p13) {
    Mat<CQ> P(2, 4);
    P(0, 0) = p00; P(0, 1) = p01; P(0, 2) = p02; P(0, 3) = p03;
    P(1, 0) = p10; P(1, 1) = p11; P(1, 2) = p12; P(1, 3) = p13;
    return P;
}

RunConfig RunConfig::fromPreset(const std::string& name) {
    RunConfig c;
    c.algebra = NilLieAlgebra::kodairaThurston();
    c.manifoldName = "kodaira-thurston";
    if (name == "omega_a") {
        c.paramText["a"] = "1/2";
        c.frameName = "Ja";
        c.metricName = "omega_a";
        c.metricEntries = {"1", "0", "0", "1"};
    } else if (name == "omega_0") {
        c.paramText["a"] = "0";
        c.frameName = "Ja";
        c.metricName = "omega_0";
        c.metricEntries = {"1", "0", "0", "1"};
    } else if (name == "omega_tilde_a") {
        c.paramText["a"] = "1/2";
        c.frameName = "Ja";
        c.metricName = "omega_tilde_a";
        c.metricEntries = {"1", "-i*a", "i*a", "1"};
    } else if (name == "omega_tf") {
        c.paramText["t"] = "1";
        c.frameName = "example42";
        c.metricName = "omega_tf";
        c.metricEntries = {"exp(2*t*(sin(2*pi*x2)/(2*pi)))", "0", "0", "1"};
    } else if (name == "reference") {
        c.frameName = "example42";
        c.metricName = "reference";
        c.metricEntries = {"1", "0", "0", "1"};
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    c.finalize();
    return c;
}

RunConfig RunConfig::fromIniFile(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return fromIniText(ss.str());
}

RunConfig RunConfig::fromIniText(const std::string& text) {
    Sections ini = parseIni(text);
    RunConfig c;

    // [params] first: bindings may be referenced by the other sections
    if (ini.count("params"))
        for (const auto& [k, v] : ini["params"]) c.paramText[k] = v;

    if (ini.count("manifold")) {
        bool preset = false;
        for (const auto& [k, v] : ini["manifold"]) {
            if (k == "preset") {
                preset = true;
                if (v == "kodaira-thurston") c.algebra = NilLieAlgebra::kodairaThurston();
                else if (v == "torus4" || v == "abelian") c.algebra = NilLieAlgebra::abelian();
                else throw ConfigError("unknown manifold preset '" + v + "'");
                c.manifoldName = v;
            } else if (k.size() == 5 && k[0] == 'c' && k[2] == '_') {
                int kk = k[1] - '0', i = k[3] - '0', j = k[4] - '0';
                CQ val = parseExactValue(v);
                if (!val.im.isZero()) throw ConfigError("structure constant must be real: " + k);
                c.algebra.setC(kk, i, j, val.re);
                c.manifoldName = "custom";
            } else {
                throw ConfigError("unknown manifold key '" + k + "'");
            }
        }
        (void)preset;
    } else {
        c.algebra = NilLieAlgebra::kodairaThurston();
    }

    std::map<std::string, std::string> frameEntries;
    if (ini.count("frame"))
        for (const auto& [k, v] : ini["frame"]) {
            if (k == "preset") c.frameName = v;
            else if (k == "a" || k == "t") c.paramText[k] = v;   // convenience binding
            else if (k.size() == 4 && k[0] == 'P' && k[2] == '_') frameEntries[k] = v;
            else throw ConfigError("unknown frame key '" + k + "'");
        }
    if (!frameEntries.empty()) c.frameName = "custom";
    if (c.frameName == "custom") {
        auto get = [&](const char* key) {
            auto it = frameEntries.find(key);
            if (it == frameEntries.end()) throw ConfigError(std::string("missing frame entry ") + key);
            return parseExactValue(it->second);
        };
        c.frameP = frameRows(get("P1_1"), get("P1_2"), get("P1_3"), get("P1_4"),
                             get("P2_1"), get("P2_2"), get("P2_3"), get("P2_4"));
    }

    if (ini.count("metric"))
        for (const auto& [k, v] : ini["metric"]) {
            if (k == "preset") {
                c.metricName = v;
                if (v == "omega_a" || v == "omega_0" || v == "reference" || v == "identity")
                    c.metricEntries = {"1", "0", "0", "1"};
                else if (v == "omega_tilde_a") c.metricEntries = {"1", "-i*a", "i*a", "1"};
                else if (v == "omega_tf")
                    c.metricEntries = {"exp(2*t*(sin(2*pi*x2)/(2*pi)))", "0", "0", "1"};
                else throw ConfigError("unknown metric preset '" + v + "'");
            } else if (k == "h11") { c.metricEntries[0] = v; c.metricName = "custom"; }
            else if (k == "h12") { c.metricEntries[1] = v; c.metricName = "custom"; }
            else if (k == "h21") { c.metricEntries[2] = v; c.metricName = "custom"; }
            else if (k == "h22") { c.metricEntries[3] = v; c.metricName = "custom"; }
            else throw ConfigError("unknown metric key '" + k + "'");
        }

    if (ini.count("solver"))
        for (const auto& [k, v] : ini["solver"]) c.setParam(k, v);

    c.finalize();
    return c;
}

void RunConfig::setParam(const std::string& key, const std::string& value) {
    if (key == "N") gridN = std::stoi(value);
    else if (key == "N4") gridN4 = std::stoi(value);
    else if (key == "k" || key == "num_sv") solver.k = std::stoi(value);
    else if (key == "seed") solver.seed = (unsigned)std::stoul(value);
    else if (key == "gap_factor") solver.gapFactor = std::stod(value);
    else if (key == "cap_factor") solver.capFactor = std::stod(value);
    else if (key == "null_penalty") solver.nullPenalty = std::stod(value);
    else if (key == "separation_penalty") solver.separationPenalty = std::stod(value);
    else if (key == "max_matvecs") solver.maxMatvecs = std::stol(value);
    else if (key == "tolerance") solver.tol = std::stod(value);
    else if (key == "block") solver.block = std::stoi(value);
    else if (key == "max_basis") solver.maxBasis = (std::size_t)std::stoul(value);
    else if (key == "polish_degree") solver.polishDegree = std::stoi(value);
    else if (key == "polish_cut") solver.polishCut = std::stod(value);
    else paramText[key] = value;   // free parameter
}

void RunConfig::finalize() {
    expansionLog.clear();
    // default parameter bindings required by the presets
    if (frameName == "Ja" && !paramText.count("a")) paramText["a"] = "1/2";
    if (metricName == "omega_tf" && !paramText.count("t")) paramText["t"] = "1";

    paramExact.clear();
    paramValue.clear();
    for (const auto& [k, v] : paramText) {
        Expression e = Expression::parse(v, {});
        auto exact = e.tryExactEval({});
        if (exact) {
            paramExact[k] = *exact;
            paramValue[k] = toComplex(*exact);
        } else {
            paramValue[k] = e.eval({0, 0, 0, 0}, {});
        }
        expansionLog.push_back("param " + k + " = " + v);
    }

    if (frameName == "Ja" || frameName == "omega_a") {
        auto it = paramExact.find("a");
        if (it == paramExact.end() || !it->second.im.isZero())
            throw ConfigError("frame Ja needs an exact real parameter a");
        frameP = frameRows(cq(1), cq(0), cqi(), CQ(it->second.re),
                           cq(0), cq(1), cq(0), cqi());
        expansionLog.push_back("frame Ja expanded with a = " + it->second.re.str());
    } else if (frameName == "example42" || frameName == "standard") {
        frameP = frameRows(cq(1), cq(0), cqi(), cq(0), cq(0), cq(1), cq(0), cqi());
        expansionLog.push_back("frame " + frameName + " expanded");
    } else if (frameName == "custom") {
        expansionLog.push_back("frame custom");
    } else {
        throw ConfigError("unknown frame preset '" + frameName + "'");
    }
    expansionLog.push_back("metric " + metricName + ": h11=" + metricEntries[0] +
                           " h12=" + metricEntries[1] + " h21=" + metricEntries[2] +
                           " h22=" + metricEntries[3]);
    // validate that the metric entries parse
    (void)metricSpec();
}

} // namespace kt
