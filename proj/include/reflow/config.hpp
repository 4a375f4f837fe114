#pragma once

#include <map>
#include <string>
#include <vector>

#include "reflow/grid.hpp"
#include "reflow/pair.hpp"

namespace reflow {

// Sectioned key = value configuration for the command-line driver.
struct RunConfig {
    // [pair]
    Family family = Family::SpaceForm;
    int n = 2;
    int k = 1;
    bool hyperbolic = false;

    // [grid]
    std::vector<int> counts{65, 65};
    double spacing = 0.05;
    std::vector<double> origin{0.0, 0.0};

    // [fixture]
    std::string fixture = "vacuum";  // vacuum | compact_kink | hyperbolic_kink |
                                     // gauged_kink | polar | shear_flat |
                                     // round_control | file
    std::string path;                // for fixture = file
    unsigned seed = 1;
    int column = 0;
    std::string defect = "none";     // none | mc | normal
    double defect_size = 0.05;

    // [integrate]
    int substeps = 16;
    bool retraction = false;
    double mc_gate = 1e-3;

    // [tolerances] overrides, plus --tol NAME=VAL
    std::map<std::string, double> tol;

    GridChart chart() const;
    SymmetricPairSpec pair_spec() const;
    double tolerance(const std::string& check, double fallback) const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin_name);

// --tol NAME=VAL
void apply_tolerance_override(RunConfig& cfg, const std::string& spec);

// Budgets for the verification battery, keyed by check name; fixture-dependent
// where the honest floor differs (exact constructions against sampled ones).
double default_tolerance(const std::string& check, const RunConfig& cfg);

} // namespace reflow
