#include "reflow/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "reflow/error.hpp"

namespace reflow {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

double to_double(const std::string& v, const std::string& key) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("bad numeric value for '" + key + "': " + v);
    return x;
}

long to_long(const std::string& v, const std::string& key) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("bad integer value for '" + key + "': " + v);
    return x;
}

bool to_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("bad boolean value for '" + key + "': " + v);
}

} // namespace

GridChart RunConfig::chart() const {
    GridChart g;
    g.counts = counts;
    g.spacing.assign(counts.size(), spacing);
    g.origin = origin;
    if (g.origin.size() != g.counts.size())
        g.origin.assign(counts.size(), 0.0);
    g.validate();
    return g;
}

SymmetricPairSpec RunConfig::pair_spec() const {
    return family == Family::SpaceForm ? build_space_form_pair(n, k, hyperbolic)
                                       : build_lagrangian_pair(n, hyperbolic);
}

double RunConfig::tolerance(const std::string& check, double fallback) const {
    const auto it = tol.find(check);
    return it == tol.end() ? fallback : it->second;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin_name) {
    RunConfig cfg;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin_name + ":" + std::to_string(lineno) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin_name + ":" + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string qual = section.empty() ? key : section + "." + key;

        if (qual == "pair.family") {
            if (val == "space_form")
                cfg.family = Family::SpaceForm;
            else if (val == "lagrangian")
                cfg.family = Family::LagrangianProjective;
            else
                throw ConfigError("unknown family: " + val);
        } else if (qual == "pair.n") {
            cfg.n = static_cast<int>(to_long(val, qual));
        } else if (qual == "pair.k") {
            cfg.k = static_cast<int>(to_long(val, qual));
        } else if (qual == "pair.hyperbolic") {
            cfg.hyperbolic = to_bool(val, qual);
        } else if (qual == "grid.counts") {
            cfg.counts.clear();
            for (const auto& t : split_ws(val))
                cfg.counts.push_back(static_cast<int>(to_long(t, qual)));
            if (cfg.counts.empty()) throw ConfigError("grid.counts is empty");
        } else if (qual == "grid.spacing") {
            cfg.spacing = to_double(val, qual);
        } else if (qual == "grid.origin") {
            cfg.origin.clear();
            for (const auto& t : split_ws(val))
                cfg.origin.push_back(to_double(t, qual));
        } else if (qual == "fixture.kind") {
            cfg.fixture = val;
        } else if (qual == "fixture.path") {
            cfg.path = val;
        } else if (qual == "fixture.seed") {
            cfg.seed = static_cast<unsigned>(to_long(val, qual));
        } else if (qual == "fixture.column") {
            cfg.column = static_cast<int>(to_long(val, qual));
        } else if (qual == "fixture.defect") {
            cfg.defect = val;
        } else if (qual == "fixture.defect_size") {
            cfg.defect_size = to_double(val, qual);
        } else if (qual == "integrate.substeps") {
            cfg.substeps = static_cast<int>(to_long(val, qual));
        } else if (qual == "integrate.retraction") {
            cfg.retraction = to_bool(val, qual);
        } else if (qual == "integrate.mc_gate") {
            cfg.mc_gate = to_double(val, qual);
        } else if (section == "tolerances") {
            cfg.tol[key] = to_double(val, qual);
        } else {
            throw ConfigError(origin_name + ":" + std::to_string(lineno) +
                              ": unknown key '" + qual + "'");
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config: " + path);
    std::stringstream buffer;
    buffer << is.rdbuf();
    return parse_config_text(buffer.str(), path);
}

void apply_tolerance_override(RunConfig& cfg, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("tolerance override must look like NAME=VALUE: " + spec);
    cfg.tol[trim(spec.substr(0, eq))] =
        to_double(trim(spec.substr(eq + 1)), "tolerance override");
}

double default_tolerance(const std::string& check, const RunConfig& cfg) {
    const bool exact_fixture =
        cfg.fixture == "vacuum";  // constant data: no discretisation error
    if (check == "membership") return 1e-8;
    if (check == "degree") return 1e-10;
    // discretised flatness floor: boundary stencils are second order, and the
    // hyperbolic profiles have much larger third derivatives on these charts
    if (check == "mc") return exact_fixture ? 1e-12 : (cfg.hyperbolic ? 1e-3 : 1e-4);
    if (check == "mc_at") return 1e-3;
    // frame-level budgets scale with |F|^2; hyperbolic frames grow
    // exponentially across the chart, so their floor is far higher
    if (check == "exp_compare") return cfg.hyperbolic ? 1e-5 : 1e-9;
    if (check == "path_independence") return cfg.hyperbolic ? 1e-4 : 1e-8;
    if (check == "drift") return cfg.hyperbolic ? 1e-4 : 1e-8;
    if (check == "metric_scaling") return 1e-10;
    if (check == "sectional") return 1e-3;
    if (check == "ii_lambda1") return 1e-10;
    if (check == "ii_compare") return 1e-4;
    if (check == "normal_flatness") return 1e-6;
    if (check == "lagrangian") return 1e-8;
    if (check == "curved_flat") return 1e-10;
    if (check == "flat_metric") return 1e-4;
    if (check == "round_curvature") return 0.05;
    if (check == "regularity") return 1e-2;
    if (check == "projection") return 1e-8;
    if (check == "containment") return 1e-5;
    if (check == "conjugation") return 1e-8;
    if (check == "fixed_part") return cfg.hyperbolic ? 1e-4 : 1e-8;
    throw ConfigError("unknown check name: " + check);
}

} // namespace reflow
