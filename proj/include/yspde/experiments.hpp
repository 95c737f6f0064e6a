#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "yspde/solver.hpp"

namespace yspde {

struct Metric {
    std::string name;
    double value = 0.0;
    long sample_count = 0;
    std::string definition;  // estimator definition carried with every number
};

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ExperimentReport {
    std::string id;
    std::string inputs_digest;  // config echo + seed
    std::vector<Metric> metrics;
    std::vector<Check> checks;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    double metric(const std::string& name) const;
    std::string summary_text() const;  // one PASS/FAIL line per check
    std::string metrics_csv() const;   // name,value,sample_count,definition
};

/// Thresholds and sampling controls; defaults match the shipped config.
struct ContinuityOptions {
    std::vector<double> rho_list{1e-1, 1e-2, 1e-3};
    int trials = 20;
    double ratio_lo = 1.0 / 3.0;
    double ratio_hi = 3.0;
    double bump_scale = 1.0;
    double pert_scale = 1.0;  // amplitude of the fixed initial-datum direction
    SolveOptions solve;
};

/// Solution-map continuity: solve with (eta, xi) and with
/// (eta + rho*bump, xi + rho*field), report
/// R(rho) = ||u - u_bar|| / (|delta eta - delta eta_bar|_alpha + ||xi - xi_bar||_{m,gamma})
/// at each rho and rho/2, and check the ratio stability R(rho/2)/R(rho).
ExperimentReport continuity_experiment(const ProblemSpec& spec, const Grid& grid,
                                       double hurst, std::uint64_t seed,
                                       const ContinuityOptions& opt);

struct RegularityOptions {
    std::vector<double> theta_list{0.2};
    std::vector<double> t_list{0.01, 0.05, 0.25, 0.5, 1.0};
    int members = 8;
    SolveOptions solve;
};

/// Spatial regularity: t^theta ||u_t||_{m,gamma+theta} against the data
/// norms, sup over the t list; theta must stay below
/// (1-lambda) ^ (1/2-mu) ^ (alpha-nu).
ExperimentReport regularity_probe(const ProblemSpec& spec, const Grid& grid, double hurst,
                                  std::uint64_t seed, const RegularityOptions& opt);

/// Kolmogorov upgrade on a sampled ensemble: compares the pathwise-sup
/// order ||delta Y||_{m,theta,gamma} with the L^m order
/// ||delta Y||_{beta,m,gamma}; preconditions 1/beta < m and
/// theta in (0, beta - 1/m).
ExperimentReport kolmogorov_check(const DriverEnsemble& ensemble, double beta, double theta,
                                  double m);
ExperimentReport kolmogorov_check(const FieldEnsemble& ensemble, double beta, double theta,
                                  double gamma, double m, double norm_mass = 1.0);

struct RatePoint {
    double dt = 0.0;
    double error = 0.0;
};

struct RateFit {
    double slope = 0.0;
    double residual = 0.0;  // rms residual of the log-log least squares fit
    bool exact = false;     // all errors at the rounding floor
};

/// Least-squares slope of log(error) against log(dt).
RateFit fit_rate(const std::vector<RatePoint>& points, double floor_tol = 1e-13);

/// Convergence study over a level range; the callback returns the error
/// at one level.  Needs >= 3 levels.
ExperimentReport convergence_study(const std::string& id, int level_lo, int level_hi,
                                   const std::function<double(int)>& error_at_level,
                                   double required_slope);

}  // namespace yspde
