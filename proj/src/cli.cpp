#include "yspde/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "yspde/csv.hpp"
#include "yspde/drivers.hpp"
#include "yspde/experiments.hpp"
#include "yspde/par.hpp"
#include "yspde/rng.hpp"
#include "yspde/sewing.hpp"

namespace yspde {

namespace {

namespace fs = std::filesystem;

std::string out_file(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.output.dir);
    return (fs::path(cfg.output.dir) / name).string();
}

DriverPath generate_driver(const RunConfig& cfg, const Grid& grid, int dims,
                           std::uint64_t stream) {
    RngStream rng(cfg.run.seed, stream);
    const auto& d = cfg.driver;
    if (d.kind == "fbm") {
        FbmOptions opt;
        opt.cholesky_cap = d.cholesky_cap;
        opt.circulant = d.circulant;
        return sample_fbm(d.hurst, grid, rng, dims, opt);
    }
    if (d.kind == "bm") return sample_bm(grid, rng, dims);
    if (d.kind.rfind("deterministic:", 0) == 0) {
        std::string formula = d.kind.substr(std::string("deterministic:").size());
        DriverPath p = deterministic_driver(formula, d.params, grid);
        if (dims != 1) throw ConfigError("deterministic drivers are one-dimensional");
        return p;
    }
    throw ConfigError("driver kind must be fbm, bm or deterministic:<formula>");
}

std::vector<std::pair<std::string, std::string>> driver_metadata(const RunConfig& cfg,
                                                                 const DriverPath& p) {
    // recorded, never asserted: finite on any grid
    PairSupOptions win;
    win.window = cfg.output.window;
    double measured = holder_seminorm(p, std::max(p.alpha_nominal - 0.05, 0.05), win);
    return {
        {"kind", p.kind},
        {"hurst", fmt17(cfg.driver.hurst)},
        {"alpha_nominal", fmt17(p.alpha_nominal)},
        {"holder_at_nominal_minus_0.05", fmt17(measured)},
        {"pair_window", std::to_string(cfg.output.window)},
        {"seed", std::to_string(cfg.run.seed)},
        {"algorithm_id", RngStream::algorithm_id},
        {"grid_T", fmt17(p.grid.horizon)},
        {"grid_intervals", std::to_string(p.grid.intervals())},
        {"circulant", cfg.driver.circulant ? "true" : "false"},
        {"cholesky_cap", std::to_string(cfg.driver.cholesky_cap)},
    };
}

int cmd_gen_driver(const RunConfig& cfg) {
    Grid grid = cfg.working_grid();
    DriverPath p = generate_driver(cfg, grid, cfg.problem.e, 0);
    write_driver_csv(out_file(cfg, "driver.csv"), p);
    write_metadata(out_file(cfg, "driver.meta.json"), driver_metadata(cfg, p));
    std::cout << "wrote " << out_file(cfg, "driver.csv") << "\n";
    return 0;
}

// Scalar path columns as k=0 mode amplitudes: block j of the integrand is
// the spatially constant field with amplitude column j.
FieldPath field_path_from_columns(const DriverPath& src, int cutoff, int dim) {
    SpectralField shape(dim, src.dims, cutoff);
    FieldPath y(src.grid, shape);
    int k0[3] = {0, 0, 0};
    int m0 = shape.mode_index(k0);
    for (int node = 0; node < src.grid.nodes(); ++node)
        for (int j = 0; j < src.dims; ++j)
            y.values[node].at(j, m0) = Complex(src.at(node, j), 0.0);
    return y;
}

int cmd_integrate(const RunConfig& cfg, const CliOverrides& ov) {
    Grid working = cfg.working_grid();
    Grid finest = working.refined(cfg.sewing.refine_levels);
    DriverPath eta = ov.eta_csv ? read_driver_csv(*ov.eta_csv)
                                : generate_driver(cfg, finest, cfg.problem.e, 0);
    if (eta.grid.nodes() != finest.nodes() ||
        std::abs(eta.grid.horizon - finest.horizon) > 1e-12 * finest.horizon)
        throw ConfigError("grid-mismatch: eta must be sampled on the finest level (" +
                          std::to_string(finest.intervals()) + " intervals over T=" +
                          fmt17(finest.horizon) + ")");
    eta.grid = finest;  // adopt the dyadic description
    DriverPath y_cols;
    if (ov.y_csv) {
        y_cols = read_driver_csv(*ov.y_csv);
        if (y_cols.grid.nodes() != finest.nodes() ||
            std::abs(y_cols.grid.horizon - finest.horizon) > 1e-12 * finest.horizon)
            throw ConfigError("grid-mismatch: Y and eta grids differ");
        y_cols.grid = finest;
        if (y_cols.dims != eta.dims)
            throw ConfigError("Y columns must match the driver dimension");
    } else {
        y_cols = eta;  // the chain-rule configuration Y = eta
    }
    SemigroupHandle sg(cfg.problem.n, cfg.problem.K, cfg.problem.mass_shift);
    FieldPath y = field_path_from_columns(y_cols, cfg.problem.K, cfg.problem.n);
    SewingResult res =
        young_convolution(y, eta, sg, working, cfg.sewing.refine_levels, cfg.sewing.tol,
                          cfg.problem.gamma, cfg.problem.alpha, cfg.problem.beta);
    GermEvaluator germ = young_germ(y, eta, sg, cfg.problem.alpha, cfg.problem.beta);
    GermProbe probe = germ_defect_probe(germ, sg, finest, cfg.problem.gamma, 64,
                                        cfg.run.seed);
    write_trajectory_csv(out_file(cfg, "z.csv"), res.z, sg, cfg.output.modes,
                         cfg.output.gamma_list);
    write_defect_csv(out_file(cfg, "defect_report.csv"), res.levels);
    write_metadata(out_file(cfg, "integrate.meta.json"),
                   {{"converged", res.converged ? "true" : "false"},
                    {"levels_used", std::to_string(res.levels_used)},
                    {"refine_levels", std::to_string(cfg.sewing.refine_levels)},
                    {"tol", fmt17(cfg.sewing.tol)},
                    {"pair_window", std::to_string(cfg.output.window)},
                    {"germ_probe_constant", fmt17(probe.constant_coarse)},
                    {"germ_probe_fine", fmt17(probe.constant_fine)},
                    {"guarantee", probe.best_effort ? "best-effort" : "sewing-bound"},
                    {"seed", std::to_string(cfg.run.seed)}});
    std::cout << "wrote " << out_file(cfg, "z.csv") << " (converged="
              << (res.converged ? "true" : "false") << ")\n";
    return 0;
}

int cmd_solve(const RunConfig& cfg) {
    Grid working = cfg.working_grid();
    Grid integration = cfg.integration_grid();
    DriverPath eta = generate_driver(cfg, integration, cfg.problem.e, 0);
    RngStream rng_w(cfg.run.seed, 1);
    DriverPath w = sample_bm(integration, rng_w, cfg.problem.d);
    ProblemRealization prob(cfg.problem, cfg.run.seed);
    SolveOptions opt;
    opt.window_len = cfg.solver.window_len;
    opt.picard_tol = cfg.solver.picard_tol;
    opt.max_iter = cfg.solver.max_iter;
    opt.max_halvings = cfg.solver.max_halvings;
    Trajectory traj = solve_mild(prob, eta, w, integration, opt);
    FieldPath at_working = traj.u.restricted(working);
    write_trajectory_csv(out_file(cfg, "trajectory.csv"), at_working, prob.semigroup(),
                         cfg.output.modes, cfg.output.gamma_list);
    double max_ratio = 0.0;
    std::size_t iters = 0;
    for (const auto& wst : traj.windows) {
        max_ratio = std::max(max_ratio, wst.max_ratio);
        iters += wst.residuals.size();
    }
    write_metadata(out_file(cfg, "solve.meta.json"),
                   {{"seed", std::to_string(cfg.run.seed)},
                    {"algorithm_id", RngStream::algorithm_id},
                    {"working_intervals", std::to_string(working.intervals())},
                    {"integration_intervals", std::to_string(integration.intervals())},
                    {"solver_refine", std::to_string(cfg.solver.refine)},
                    {"windows", std::to_string(traj.windows.size())},
                    {"halvings", std::to_string(traj.halvings)},
                    {"final_window_len", fmt17(traj.final_window_len)},
                    {"max_contraction_ratio", fmt17(max_ratio)},
                    {"picard_iterations", std::to_string(iters)},
                    {"circulant", cfg.driver.circulant ? "true" : "false"}});
    std::cout << "wrote " << out_file(cfg, "trajectory.csv") << " (windows="
              << traj.windows.size() << ", halvings=" << traj.halvings << ")\n";
    return 0;
}

// Single-mode linear Young problem used by the rate studies.
ProblemSpec single_mode_spec(double kappa) {
    ProblemSpec s;
    s.T = 1.0;
    s.n = 1;
    s.l = s.e = s.d = 1;
    s.K = 0;
    s.alpha = 0.75;
    s.beta = 0.3;
    s.gamma = 0.0;
    s.lambda = 0.0;
    s.mu = 0.0;
    s.nu = 0.0;
    s.m = 2.0;
    s.mass_shift = kappa;
    s.xi = {"constant", {1.0}};
    s.G0 = {"constant", {1.0}};
    return s;
}

double young_ode_error_at_level(const RunConfig& cfg, const DriverPath& eta_master,
                                const Grid& master, int level) {
    Grid integration(master.horizon, master.base_intervals,
                     level + cfg.solver.refine);
    DriverPath eta = eta_master.restricted(integration);
    RngStream rng_w(cfg.run.seed, 9);
    DriverPath w = sample_bm(integration, rng_w, 1);
    ProblemSpec spec = single_mode_spec(1.0);
    ProblemRealization prob(spec, cfg.run.seed);
    SolveOptions opt;
    opt.picard_tol = 1e-12;
    Trajectory traj = solve_mild(prob, eta, w, integration, opt);
    double got = traj.u.values.back().at(0, 0).real();
    double want = std::exp(-1.0 + (eta.values[static_cast<std::size_t>(eta.grid.nodes() - 1)] -
                                   eta.values[0]));
    return std::abs(got - want) / std::abs(want);
}

double eta_deta_error_at_level(const RunConfig& cfg, const DriverPath& eta_master,
                               int level) {
    Grid finest(eta_master.grid.horizon, eta_master.grid.base_intervals,
                level + cfg.sewing.refine_levels);
    DriverPath eta = eta_master.restricted(finest);
    SemigroupHandle sg = scalar_semigroup(0.0);
    FieldPath y = field_path_from_columns(eta, 0, 1);
    FieldPath z = young_recursion(y, eta, sg);
    double got = z.values.back().at(0, 0).real();
    double eta1 = eta.at(eta.grid.nodes() - 1, 0);
    double eta0 = eta.at(0, 0);
    double want = 0.5 * (eta1 * eta1 - eta0 * eta0);
    return std::abs(got - want) / std::abs(want);
}

double etd_constant_error_at_level(int level) {
    // constant forcing on one mode: F_{k+1} = e^{-q dt} F_k + dt phi1(q dt)
    Grid grid(1.0, 1, level);
    SemigroupHandle sg = scalar_semigroup(2.0);
    auto fw = etd_weights(sg, grid.dt());
    auto prop = sg.propagator(grid.dt());
    double f = 0.0;
    for (int k = 0; k < grid.intervals(); ++k) f = prop[0] * f + fw[0];
    double want = (1.0 - std::exp(-2.0)) / 2.0;
    return std::abs(f - want) / want;
}

int cmd_experiment(const RunConfig& cfg) {
    const auto& ex = cfg.experiment;
    ExperimentReport rep;
    if (ex.id == "continuity") {
        ContinuityOptions opt;
        opt.rho_list = ex.rho_list;
        opt.trials = ex.trials;
        opt.solve.window_len = cfg.solver.window_len;
        opt.solve.picard_tol = cfg.solver.picard_tol;
        opt.solve.max_iter = cfg.solver.max_iter;
        opt.solve.max_halvings = cfg.solver.max_halvings;
        rep = continuity_experiment(cfg.problem, cfg.integration_grid(), cfg.driver.hurst,
                                    cfg.run.seed, opt);
    } else if (ex.id == "regularity") {
        RegularityOptions opt;
        opt.theta_list = ex.theta_list;
        opt.t_list = ex.t_list;
        opt.members = ex.members;
        opt.solve.window_len = cfg.solver.window_len;
        opt.solve.picard_tol = cfg.solver.picard_tol;
        opt.solve.max_iter = cfg.solver.max_iter;
        opt.solve.max_halvings = cfg.solver.max_halvings;
        rep = regularity_probe(cfg.problem, cfg.integration_grid(), cfg.driver.hurst,
                               cfg.run.seed, opt);
    } else if (ex.id == "kolmogorov") {
        Grid grid = cfg.working_grid();
        DriverEnsemble ens(ex.members);
        parallel_for(ens.size(), cfg.run.threads, [&](std::size_t i) {
            RngStream rng(cfg.run.seed, 4000 + i);
            ens[i] = sample_bm(grid, rng, cfg.problem.e);
        });
        rep = kolmogorov_check(ens, ex.beta, ex.theta, ex.m);
    } else if (ex.id == "rates") {
        if (ex.oracle == "young_ode") {
            Grid master(1.0, 1, ex.level_hi + cfg.solver.refine);
            RngStream rng(cfg.run.seed, 8);
            FbmOptions fopt;
            fopt.circulant = true;
            DriverPath eta_master = sample_fbm(cfg.driver.hurst, master, rng, 1, fopt);
            rep = convergence_study("young_ode", ex.level_lo, ex.level_hi,
                                    [&](int lev) {
                                        return young_ode_error_at_level(cfg, eta_master,
                                                                        master, lev);
                                    },
                                    ex.required_slope);
        } else if (ex.oracle == "eta_deta") {
            Grid master(1.0, 1, ex.level_hi + cfg.sewing.refine_levels);
            RngStream rng(cfg.run.seed, 8);
            FbmOptions fopt;
            fopt.circulant = true;
            DriverPath eta_master = sample_fbm(cfg.driver.hurst, master, rng, 1, fopt);
            rep = convergence_study("eta_deta", ex.level_lo, ex.level_hi,
                                    [&](int lev) {
                                        return eta_deta_error_at_level(cfg, eta_master, lev);
                                    },
                                    ex.required_slope);
        } else if (ex.oracle == "etd_linear") {
            rep = convergence_study("etd_linear", ex.level_lo, ex.level_hi,
                                    [&](int lev) { return etd_constant_error_at_level(lev); },
                                    ex.required_slope);
        } else {
            throw ConfigError("unknown rates oracle '" + ex.oracle +
                              "' (expected young_ode, eta_deta or etd_linear)");
        }
    } else {
        throw ConfigError("unknown experiment id '" + ex.id +
                          "' (expected continuity, regularity, kolmogorov or rates)");
    }
    std::string base = ex.id == "rates" ? "rates_" + ex.oracle : ex.id;
    write_text(out_file(cfg, base + "_metrics.csv"), rep.metrics_csv());
    write_text(out_file(cfg, base + "_summary.txt"), rep.summary_text());
    std::cout << rep.summary_text();
    return rep.passed() ? 0 : 3;
}

}  // namespace

bool run_check_suite(const RunConfig& cfg, std::ostream& os) {
    bool all = true;
    auto report = [&](const std::string& name, bool pass, const std::string& detail) {
        os << (pass ? "PASS " : "FAIL ") << name;
        if (!detail.empty()) os << " (" << detail << ")";
        os << "\n";
        all = all && pass;
    };
    std::uint64_t seed = cfg.run.seed;
    SemigroupHandle sg(1, 8, 1.0);  // m0 = 1: generator and norm weights coincide
    CoefficientDescriptor rnd{"smooth_random", {1.0, 0.8}};
    SpectralField u = realize_field(rnd, 1, 1, 8, seed);

    // semigroup suite
    {
        SpectralField s0 = sg.apply(0.0, u);
        double err = sg.sobolev_norm(s0 - u, 0.0);
        report("semigroup identity S_0 = I", err == 0.0, "residual " + fmt17(err));

        SpectralField ab = sg.apply(0.3, sg.apply(0.2, u));
        SpectralField apb = sg.apply(0.5, u);
        double rel = sg.sobolev_norm(ab - apb, 0.0) / sg.sobolev_norm(apb, 0.0);
        report("semigroup law S_s S_t = S_{s+t}", rel < 1e-14, "rel " + fmt17(rel));

        SpectralField back = sg.frac_power(-0.7, sg.frac_power(0.7, u));
        double inv = sg.sobolev_norm(back - u, 0.0) / sg.sobolev_norm(u, 0.0);
        report("fractional power inverse pair", inv < 1e-12, "rel " + fmt17(inv));

        double theta = 0.5;
        std::vector<double> ts;
        for (int i = 0; i < 240; ++i) ts.push_back(1.0 * std::pow(10.0, -4.0 + 4.0 * i / 239.0));
        double probe = sg.smoothing_constant_probe(0.0, theta, ts);
        double want = SemigroupHandle::one_mode_constant(theta);
        bool ok = std::abs(probe - want) / want < 0.05;
        report("smoothing probe matches one-mode constant", ok,
               "probe " + fmt17(probe) + " vs " + fmt17(want));

        // contraction at gamma1 = gamma2
        double c = sg.smoothing_constant_probe(0.25, 0.25, {0.1, 0.5, 1.0});
        report("semigroup contraction at equal exponents", c <= 1.0 + 1e-14,
               "max multiplier " + fmt17(c));
    }

    // ensembles for the norm checks (fBm drivers + mild field paths)
    Grid grid(1.0, 1, 7);
    int members = 8;
    FbmSampler fbm(0.75, grid, {});
    DriverEnsemble detas(members);
    parallel_for(detas.size(), cfg.run.threads, [&](std::size_t i) {
        RngStream rng(seed, 100 + i);
        detas[i] = fbm.sample(rng, 1);
    });
    FieldEnsemble fields(members);
    parallel_for(fields.size(), cfg.run.threads, [&](std::size_t i) {
        RngStream rng(seed, 200 + i);
        DriverPath eta = fbm.sample(rng, 1);
        SpectralField shape(1, 1, 8);
        FieldPath y(grid, shape);
        for (int kk = 0; kk < grid.nodes(); ++kk) {
            CoefficientDescriptor d{"smooth_random", {1.0, 0.8}};
            SpectralField base = realize_field(d, 1, 1, 8, seed + i);
            y.values[kk] = std::exp(eta.at(kk, 0)) * base;
        }
        fields[i] = std::move(y);
    });

    {
        double a = mixed_norm_holder_of_Lm(detas, 0.4, 2.0);
        double b = mixed_norm_Lm_of_holder(detas, 0.4, 2.0);
        report("norm order ||.||_{m,beta} >= ||.||_{beta,m} (drivers)", a >= b * (1 - 1e-12),
               fmt17(a) + " >= " + fmt17(b));
        double af = mixed_norm_holder_of_Lm(fields, 0.4, 0.0, 4.0, sg.norm_mass());
        double bf = mixed_norm_Lm_of_holder(fields, 0.4, 0.0, 4.0, sg.norm_mass());
        report("norm order ||.||_{m,beta} >= ||.||_{beta,m} (fields)", af >= bf * (1 - 1e-12),
               fmt17(af) + " >= " + fmt17(bf));
    }

    {
        // mild/plain increment-norm equivalence, stable under refinement
        auto equivalence_factor = [&](const FieldEnsemble& ens) {
            double beta = 0.4, gamma = 0.25, m = 4.0;
            PairSupOptions mild{0, IncrementKind::Mild, &sg};
            double hat = mixed_norm_Lm_of_holder(ens, beta, gamma - beta, m, sg.norm_mass(),
                                                 mild) +
                         mixed_sup_Lm(ens, gamma, m, sg.norm_mass());
            double plain = ebeta_lm_norm(ens, beta, gamma, m, sg.norm_mass());
            return hat / plain;
        };
        double f_coarse = equivalence_factor(fields);
        FieldEnsemble coarse;
        Grid sub(1.0, 1, 6);
        for (const auto& y : fields) coarse.push_back(y.restricted(sub));
        double f_sub = equivalence_factor(coarse);
        double growth = f_coarse / f_sub;
        bool ok = growth < 2.0 && growth > 0.5;
        report("increment-norm equivalence factor stable under refinement", ok,
               "factor " + fmt17(f_coarse) + " vs " + fmt17(f_sub));
    }

    {
        // delta telescoping: zero in exact arithmetic; in doubles the
        // residual is bounded by the two subtraction roundings
        const DriverPath& p = detas[0];
        double worst = 0.0;
        for (int s = 0; s < 100; s += 7) {
            int r = s + 3, t = s + 11;
            if (t >= p.grid.nodes()) break;
            auto st = increment(p, s, t);
            auto sr = increment(p, s, r);
            auto rt = increment(p, r, t);
            for (int c = 0; c < p.dims; ++c) {
                double mag = std::abs(st[c]) + std::abs(sr[c]) + std::abs(rt[c]);
                worst = std::max(worst, std::abs(st[c] - sr[c] - rt[c]) /
                                            std::max(mag, 1e-300));
            }
        }
        report("delta telescoping at rounding scale", worst <= 4.0 * 2.220446049250313e-16,
               "residual " + fmt17(worst));
    }

    {
        // mild cocycle: delta3 of a mild coboundary vanishes
        const FieldPath& y = fields[0];
        TwoParamArray a;
        a.grid = y.grid;
        a.eval = [&](int i, int j) { return mild_increment(y, sg, i, j); };
        double worst = 0.0;
        double scale = sup_norm(y, 0.0, sg.norm_mass());
        for (int s = 0; s + 16 < y.grid.nodes(); s += 13) {
            SpectralField def = delta3_defect(a, sg, s, s + 7, s + 16);
            worst = std::max(worst, sg.sobolev_norm(def, 0.0) / scale);
        }
        report("mild cocycle delta3(delta-hat Y) = 0", worst < 1e-12, "rel " + fmt17(worst));
    }

    {
        // recursion additivity and bilinearity of the Young convolution
        const FieldPath& y = fields[0];
        const DriverPath& eta = detas[0];
        FieldPath z = young_recursion(y, eta, sg);
        RngStream rng(seed, 300);
        double worst = 0.0;
        double scale = std::max(1.0, sup_norm(z, 0.0, sg.norm_mass()));
        for (int trial = 0; trial < 200; ++trial) {
            int nodes = grid.nodes();
            int s = static_cast<int>(rng.uniform() * (nodes - 3));
            int r = s + 1 + static_cast<int>(rng.uniform() * (nodes - s - 2));
            int t = r + static_cast<int>(rng.uniform() * (nodes - r - 1)) + 0;
            if (t >= nodes) t = nodes - 1;
            SpectralField zst = mild_increment(z, sg, s, t);
            SpectralField zsr = mild_increment(z, sg, s, r);
            SpectralField zrt = mild_increment(z, sg, r, t);
            SpectralField defect =
                zst - sg.apply(grid.node(t) - grid.node(r), zsr) - zrt;
            worst = std::max(worst, sg.sobolev_norm(defect, 0.0) / scale);
        }
        report("mild additivity of the recursion Z", worst < 1e-12, "rel " + fmt17(worst));

        const FieldPath& y2 = fields[1];
        double c1 = 0.7, c2 = -1.3;
        FieldPath ylin = y;
        for (int kk = 0; kk < grid.nodes(); ++kk)
            ylin.values[kk] = c1 * y.values[kk] + c2 * y2.values[kk];
        FieldPath zlin = young_recursion(ylin, eta, sg);
        FieldPath z2 = young_recursion(y2, eta, sg);
        double bi = 0.0;
        for (int kk = 0; kk < grid.nodes(); ++kk) {
            SpectralField want = c1 * z.values[kk] + c2 * z2.values[kk];
            bi = std::max(bi, sg.sobolev_norm(zlin.values[kk] - want, 0.0));
        }
        double bscale = std::max(1.0, sup_norm(zlin, 0.0, sg.norm_mass()));
        report("Young convolution linear in Y", bi / bscale < 1e-12, "rel " + fmt17(bi / bscale));
    }

    {
        // compatibility: both residual orders from the same sewing data
        FieldEnsemble ys;
        DriverEnsemble etas2;
        Grid work(1.0, 1, 5);
        Grid fine = work.refined(3);
        FbmSampler fbm_f(0.75, fine, {});
        for (int i = 0; i < 4; ++i) {
            RngStream rng(seed, 400 + i);
            DriverPath eta = fbm_f.sample(rng, 1);
            FieldPath y(fine, SpectralField(1, 1, 8));
            CoefficientDescriptor d{"smooth_random", {1.0, 0.8}};
            SpectralField base = realize_field(d, 1, 1, 8, seed + 50 + i);
            for (int kk = 0; kk < fine.nodes(); ++kk)
                y.values[kk] = std::exp(eta.at(kk, 0)) * base;
            ys.push_back(std::move(y));
            etas2.push_back(std::move(eta));
        }
        CompatibilityReport comp =
            compatibility_check(ys, etas2, sg, work, 3, 1e-8, 0.0, 0.75, 0.4, 4.0);
        bool ok = std::isfinite(comp.discrepancy());
        report("compatibility residuals finite (lm/pathwise)", ok,
               "lm " + fmt17(comp.lm_residual) + ", pathwise " + fmt17(comp.pathwise_residual));
        report("compatibility order: pathwise >= lm", comp.pathwise_residual >=
                   comp.lm_residual * (1 - 1e-12), "");
    }

    {
        // smoothing estimate at truncation: t^theta |S_t e_k|_theta <= C(theta)|e_k|_0
        double theta = 0.4;
        double sup_ratio = 0.0;
        const auto& q = sg.multipliers();
        const auto& k2 = sg.klen2();
        for (std::size_t mm = 0; mm < q.size(); ++mm)
            if (q[mm] > 0.0)
                sup_ratio = std::max(sup_ratio, (sg.norm_mass() + k2[mm]) / q[mm]);
        double cap = std::max(SemigroupHandle::one_mode_constant(theta) *
                                  std::pow(sup_ratio, theta),
                              1.0);
        double worst = 0.0;
        for (int i = 1; i <= 64; ++i) {
            double t = i / 64.0;
            for (std::size_t mm = 0; mm < q.size(); ++mm) {
                double v = std::pow(t, theta) * std::exp(-t * q[mm]) *
                           std::pow(sg.norm_mass() + k2[mm], theta);
                worst = std::max(worst, v);
            }
        }
        report("smoothing bound with one-mode constant", worst <= cap * (1 + 1e-12),
               "measured " + fmt17(worst) + " cap " + fmt17(cap));

        // semigroup difference estimate: |S_t u - u|_0 <= C t^theta |u|_theta on random fields
        double worst2 = 0.0;
        for (int i = 1; i <= 32; ++i) {
            double t = i / 32.0;
            SpectralField d = sg.apply(t, u) - u;
            double lhs = sg.sobolev_norm(d, 0.0);
            double rhs = std::pow(t, theta) * sg.sobolev_norm(u, theta);
            worst2 = std::max(worst2, lhs / rhs);
        }
        // 1 - e^{-x} <= x^theta for x >= 0, theta in (0,1], when x <= 1; the
        // truncation keeps the measured constant O(1)
        report("semigroup difference bound (random fields)", worst2 < 4.0,
               "measured constant " + fmt17(worst2));
    }

    return all;
}

namespace {

int cmd_check(const RunConfig& cfg) {
    bool ok = run_check_suite(cfg, std::cout);
    std::cout << (ok ? "check: all invariants PASS\n" : "check: FAILURES above\n");
    return ok ? 0 : 3;
}

}  // namespace

int dispatch(const std::string& subcommand, RunConfig cfg, const CliOverrides& ov) {
    try {
        if (ov.seed) cfg.run.seed = *ov.seed;
        if (ov.out_dir) cfg.output.dir = *ov.out_dir;
        if (ov.grid_level) cfg.grid.level = *ov.grid_level;
        if (ov.threads) cfg.run.threads = *ov.threads;
        cfg.validate();
        if (subcommand == "gen-driver") return cmd_gen_driver(cfg);
        if (subcommand == "integrate") return cmd_integrate(cfg, ov);
        if (subcommand == "solve") return cmd_solve(cfg);
        if (subcommand == "experiment") return cmd_experiment(cfg);
        if (subcommand == "check") return cmd_check(cfg);
        throw ConfigError("unknown subcommand '" + subcommand +
                          "' (expected gen-driver, integrate, solve, experiment or check)");
    } catch (const Error& e) {
        const char* cat = e.category() == ErrorCategory::Config     ? "config"
                          : e.category() == ErrorCategory::Numerical ? "numerical"
                                                                     : "io";
        std::cerr << "error[" << cat << "]: " << e.what() << "\n";
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error[io]: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace yspde
