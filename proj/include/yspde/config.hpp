#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "yspde/solver.hpp"

namespace yspde {

struct GridConfig {
    int base_intervals = 1;
    int level = 8;
};

struct DriverConfig {
    std::string kind = "fbm";  // fbm | bm | deterministic:<formula>
    double hurst = 0.75;
    std::vector<double> params;  // deterministic driver parameters
    int cholesky_cap = 4096;
    bool circulant = false;
};

struct SolverConfig {
    double window_len = 0.0;  // 0 = T/8
    double picard_tol = 1e-10;
    int max_iter = 50;
    int max_halvings = 4;
    int refine = 4;  // integration grid = working grid refined this much
};

struct SewingConfig {
    double tol = 1e-8;
    int refine_levels = 4;
};

struct OutputConfig {
    std::string dir = "out";
    std::vector<double> gamma_list{0.0};
    std::vector<int> modes{0};
    int window = 0;  // pairwise estimator window; 0 = exhaustive
};

struct RunSection {
    std::uint64_t seed = 12345;
    int threads = 1;
    int members = 1;
};

struct ExperimentConfig {
    std::string id = "continuity";
    std::vector<double> rho_list{1e-1, 1e-2, 1e-3};
    std::vector<double> theta_list{0.2};
    std::vector<double> t_list{0.01, 0.05, 0.25, 0.5, 1.0};
    int trials = 20;
    int members = 8;
    double beta = 0.45;
    double theta = 0.3;
    double m = 8.0;
    int level_lo = 6;
    int level_hi = 12;
    std::string oracle = "young_ode";  // young_ode | eta_deta | etd_linear
    double required_slope = 0.4;
};

struct RunConfig {
    ProblemSpec problem;
    GridConfig grid;
    DriverConfig driver;
    SolverConfig solver;
    SewingConfig sewing;
    OutputConfig output;
    RunSection run;
    ExperimentConfig experiment;

    Grid working_grid() const {
        return Grid(problem.T, grid.base_intervals, grid.level);
    }
    Grid integration_grid() const { return working_grid().refined(solver.refine); }

    /// Re-validates every constraint; error messages quote the violated
    /// inequality.
    void validate() const;

    /// Canonical text form; parse(emit()) reproduces the config exactly.
    std::string emit() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace yspde
