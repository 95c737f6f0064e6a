#include "yspde/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "yspde/rng.hpp"

namespace yspde {

double ExperimentReport::metric(const std::string& name) const {
    for (const auto& m : metrics)
        if (m.name == name) return m.value;
    throw ConfigError("no metric named '" + name + "' in report " + id);
}

std::string ExperimentReport::summary_text() const {
    std::ostringstream os;
    os << "experiment " << id << " (" << inputs_digest << ")\n";
    for (const auto& m : metrics) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", m.value);
        os << "  " << m.name << " = " << buf << "  [n=" << m.sample_count << ", "
           << m.definition << "]\n";
    }
    for (const auto& c : checks)
        os << "  " << (c.pass ? "PASS " : "FAIL ") << c.name
           << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
    return os.str();
}

std::string ExperimentReport::metrics_csv() const {
    std::ostringstream os;
    os << "name,value,sample_count,definition\n";
    for (const auto& m : metrics) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", m.value);
        os << m.name << "," << buf << "," << m.sample_count << "," << m.definition << "\n";
    }
    return os.str();
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// C^inf perturbation with bump(0) = 0, added to every driver component so
// |delta eta - delta eta_bar|_alpha stays well conditioned on the grid.
DriverPath bump_path(const Grid& grid, int dims, double scale) {
    DriverPath p(grid, dims);
    p.kind = "bump";
    for (int k = 0; k < grid.nodes(); ++k) {
        double s = std::sin(3.14159265358979323846 * grid.node(k) / grid.horizon);
        for (int d = 0; d < dims; ++d) p.at(k, d) = scale * s * s;
    }
    return p;
}

struct DataNorms {
    double xi_norm = 0.0;
    double f0 = 0.0;
    double h0 = 0.0;
    double g = 0.0;
    double total() const { return xi_norm + f0 + h0 + g; }
};

DataNorms data_norms(const ProblemRealization& prob) {
    const ProblemSpec& s = prob.spec();
    const SemigroupHandle& sg = prob.semigroup();
    DataNorms d;
    d.xi_norm = sg.sobolev_norm(prob.initial(), s.gamma);
    SpectralField zero = prob.state_shape();
    if (prob.has_f()) d.f0 = sg.sobolev_norm(prob.nonlinearity(0.0, zero), s.gamma - s.lambda);
    if (prob.has_h())
        d.h0 = sg.sobolev_norm(prob.noise_coefficient(0.0, zero), s.gamma - s.mu);
    d.g = sg.sobolev_norm(prob.g_value(), s.gamma - s.nu);
    return d;
}

}  // namespace

ExperimentReport continuity_experiment(const ProblemSpec& spec, const Grid& grid,
                                       double hurst, std::uint64_t seed,
                                       const ContinuityOptions& opt) {
    spec.validate();
    for (double rho : opt.rho_list)
        if (rho <= 0.0) throw ConfigError("perturbation scale rho must be positive");
    if (opt.trials < 1) throw ConfigError("continuity experiment needs >= 1 trial");

    ExperimentReport rep;
    rep.id = "continuity";
    rep.inputs_digest = "seed=" + std::to_string(seed) + " trials=" +
                        std::to_string(opt.trials) + " N=" + std::to_string(grid.intervals());

    ProblemRealization base(spec, seed);
    SpectralField xi0 = base.initial();
    CoefficientDescriptor pert_desc{"single_mode", {opt.pert_scale, std::min(1, spec.K) * 1.0}};
    SpectralField pert = realize_field(pert_desc, spec.n, spec.l, spec.K, seed);
    DriverPath bump = bump_path(grid, spec.e, opt.bump_scale);
    double bump_alpha = holder_seminorm(bump, spec.alpha);
    double pert_norm = base.semigroup().sobolev_norm(pert, spec.gamma);

    FbmOptions fopt;
    fopt.circulant = true;
    FbmSampler fbm(hurst, grid, fopt);

    // trial drivers are shared by every rho
    std::vector<DriverPath> etas, ws;
    std::vector<FieldPath> base_solutions;
    for (int i = 0; i < opt.trials; ++i) {
        RngStream r_eta(seed, 1000 + 2 * i);
        RngStream r_w(seed, 1001 + 2 * i);
        etas.push_back(fbm.sample(r_eta, spec.e));
        ws.push_back(sample_bm(grid, r_w, spec.d));
        base.set_initial(xi0);
        base_solutions.push_back(solve_mild(base, etas.back(), ws.back(), grid, opt.solve).u);
    }

    std::vector<double> rho_values;
    for (double rho : opt.rho_list) {
        rho_values.push_back(rho);
        rho_values.push_back(rho / 2.0);
    }
    std::vector<double> r_of_rho;
    for (double rho : rho_values) {
        FieldEnsemble diffs;
        for (int i = 0; i < opt.trials; ++i) {
            DriverPath eta_bar = etas[i];
            for (int k = 0; k < grid.nodes(); ++k)
                for (int c = 0; c < spec.e; ++c) eta_bar.at(k, c) += rho * bump.at(k, c);
            base.set_initial(xi0 + rho * pert);
            FieldPath u_bar = solve_mild(base, eta_bar, ws[i], grid, opt.solve).u;
            FieldPath diff = u_bar;
            for (int k = 0; k < grid.nodes(); ++k) diff.values[k] -= base_solutions[i].values[k];
            diffs.push_back(std::move(diff));
        }
        double num = ebeta_lm_norm(diffs, spec.beta, spec.gamma, spec.m,
                                   base.semigroup().norm_mass());
        double den = rho * bump_alpha + rho * pert_norm;
        double r = (den == 0.0) ? 0.0 : num / den;
        rep.metrics.push_back({"R(rho=" + fmt(rho) + ")", r, opt.trials,
                               "||u-ubar||_{E^b L_m}-est / (|d(eta-etabar)|_a + ||xi-xibar||_{m,g})"});
        r_of_rho.push_back(r);
    }
    base.set_initial(xi0);

    double rmax = *std::max_element(r_of_rho.begin(), r_of_rho.end());
    rep.metrics.push_back({"R_max", rmax, opt.trials, "max over the rho list"});
    for (std::size_t i = 0; i < opt.rho_list.size(); ++i) {
        double r_full = r_of_rho[2 * i];
        double r_half = r_of_rho[2 * i + 1];
        double ratio = (r_full == 0.0) ? 1.0 : r_half / r_full;
        Check c;
        c.name = "R(rho/2)/R(rho) in [" + fmt(opt.ratio_lo) + ", " + fmt(opt.ratio_hi) +
                 "] at rho=" + fmt(opt.rho_list[i]);
        c.pass = ratio >= opt.ratio_lo && ratio <= opt.ratio_hi;
        c.detail = "ratio " + fmt(ratio);
        rep.checks.push_back(c);
    }
    Check bounded;
    bounded.name = "R bounded over the rho list";
    bounded.pass = std::isfinite(rmax);
    bounded.detail = "R_max " + fmt(rmax);
    rep.checks.push_back(bounded);
    return rep;
}

ExperimentReport regularity_probe(const ProblemSpec& spec, const Grid& grid, double hurst,
                                  std::uint64_t seed, const RegularityOptions& opt) {
    spec.validate();
    double theta_cap =
        std::min({1.0 - spec.lambda, 0.5 - spec.mu, spec.alpha - spec.nu});
    for (double theta : opt.theta_list)
        if (!(theta >= 0.0 && theta < theta_cap))
            throw ConfigError("theta must lie below (1-lambda) ^ (1/2-mu) ^ (alpha-nu) = " +
                              fmt(theta_cap));
    for (double t : opt.t_list)
        if (!(t > 0.0 && t <= grid.horizon))
            throw ConfigError("regularity probe times must lie in (0, T]");

    ExperimentReport rep;
    rep.id = "regularity";
    rep.inputs_digest = "seed=" + std::to_string(seed) + " members=" +
                        std::to_string(opt.members) + " N=" + std::to_string(grid.intervals());

    ProblemRealization prob(spec, seed);
    FbmOptions fopt;
    fopt.circulant = true;
    FbmSampler fbm(hurst, grid, fopt);
    FieldEnsemble solutions;
    for (int i = 0; i < opt.members; ++i) {
        RngStream r_eta(seed, 2000 + 2 * i);
        RngStream r_w(seed, 2001 + 2 * i);
        DriverPath eta = fbm.sample(r_eta, spec.e);
        DriverPath w = sample_bm(grid, r_w, spec.d);
        solutions.push_back(solve_mild(prob, eta, w, grid, opt.solve).u);
    }
    DataNorms dn = data_norms(prob);
    double den = dn.total();
    rep.metrics.push_back({"data_norm", den, 1,
                           "||xi||_{m,g} + ||f(.,0)|| + ||h(.,0)|| + ||g||_{g-nu}"});

    const SemigroupHandle& sg = prob.semigroup();
    for (double theta : opt.theta_list) {
        double worst = 0.0;
        for (double t : opt.t_list) {
            int node = static_cast<int>(std::llround(t / grid.dt()));
            node = std::max(1, std::min(node, grid.intervals()));
            double acc = 0.0;
            for (const auto& u : solutions)
                acc += std::pow(sg.sobolev_norm(u.values[node], spec.gamma + theta), spec.m);
            double lm = std::pow(acc / solutions.size(), 1.0 / spec.m);
            double scaled = std::pow(grid.node(node), theta) * lm;
            worst = std::max(worst, scaled);
            rep.metrics.push_back({"t^theta*norm(t=" + fmt(grid.node(node)) +
                                       ",theta=" + fmt(theta),
                                   scaled, opt.members, "t^theta ||u_t||_{m,gamma+theta}"});
        }
        double c = (den == 0.0) ? 0.0 : worst / den;
        rep.metrics.push_back({"C(theta=" + fmt(theta) + ")", c, opt.members,
                               "sup_t t^theta ||u_t||_{m,gamma+theta} / data_norm"});
        Check chk;
        chk.name = "t^theta ||u_t||_{m,gamma+theta} bounded at theta=" + fmt(theta);
        chk.pass = std::isfinite(c);
        chk.detail = "measured constant " + fmt(c);
        rep.checks.push_back(chk);
    }
    return rep;
}

namespace {

void kolmogorov_preconditions(double beta, double theta, double m) {
    if (!(1.0 / beta < m && std::isfinite(m)))
        throw ConfigError("Kolmogorov upgrade needs 1/beta < m < inf");
    if (!(theta > 0.0 && theta < beta - 1.0 / m))
        throw ConfigError("Kolmogorov upgrade needs theta in (0, beta - 1/m)");
}

ExperimentReport kolmogorov_report(double pathwise_order, double lm_order, double beta,
                                   double theta, double m, long n) {
    ExperimentReport rep;
    rep.id = "kolmogorov";
    rep.inputs_digest = "beta=" + fmt(beta) + " theta=" + fmt(theta) + " m=" + fmt(m);
    double ratio = (lm_order == 0.0) ? 0.0 : pathwise_order / lm_order;
    rep.metrics.push_back({"norm_m_theta", pathwise_order, n, "||dY||_{m,theta,gamma}"});
    rep.metrics.push_back({"norm_beta_m", lm_order, n, "||dY||_{beta,m,gamma}"});
    rep.metrics.push_back({"ratio", ratio, n, "pathwise-sup order / L^m order"});
    Check c;
    c.name = "Kolmogorov ratio finite";
    c.pass = std::isfinite(ratio);
    c.detail = "ratio " + fmt(ratio);
    rep.checks.push_back(c);
    return rep;
}

}  // namespace

ExperimentReport kolmogorov_check(const DriverEnsemble& ensemble, double beta, double theta,
                                  double m) {
    kolmogorov_preconditions(beta, theta, m);
    double pathwise = mixed_norm_holder_of_Lm(ensemble, theta, m);
    double lm = mixed_norm_Lm_of_holder(ensemble, beta, m);
    return kolmogorov_report(pathwise, lm, beta, theta, m,
                             static_cast<long>(ensemble.size()));
}

ExperimentReport kolmogorov_check(const FieldEnsemble& ensemble, double beta, double theta,
                                  double gamma, double m, double norm_mass) {
    kolmogorov_preconditions(beta, theta, m);
    double pathwise = mixed_norm_holder_of_Lm(ensemble, theta, gamma, m, norm_mass);
    double lm = mixed_norm_Lm_of_holder(ensemble, beta, gamma, m, norm_mass);
    return kolmogorov_report(pathwise, lm, beta, theta, m,
                             static_cast<long>(ensemble.size()));
}

RateFit fit_rate(const std::vector<RatePoint>& points, double floor_tol) {
    if (points.size() < 3) throw ConfigError("rate fit needs at least 3 levels");
    RateFit fit;
    fit.exact = true;
    for (const auto& p : points)
        if (p.error > floor_tol) fit.exact = false;
    if (fit.exact) return fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& p : points) {
        if (p.error <= 0.0) continue;
        double x = std::log(p.dt), y = std::log(p.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 3) throw ConfigError("rate fit needs at least 3 nonzero errors");
    double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    double a = (sy - fit.slope * sx) / n;
    double rss = 0.0;
    for (const auto& p : points) {
        if (p.error <= 0.0) continue;
        double r = std::log(p.error) - (a + fit.slope * std::log(p.dt));
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / n);
    return fit;
}

ExperimentReport convergence_study(const std::string& id, int level_lo, int level_hi,
                                   const std::function<double(int)>& error_at_level,
                                   double required_slope) {
    if (level_hi - level_lo + 1 < 3) throw ConfigError("convergence study needs >= 3 levels");
    ExperimentReport rep;
    rep.id = "rates:" + id;
    rep.inputs_digest = "levels " + std::to_string(level_lo) + ".." + std::to_string(level_hi);
    std::vector<RatePoint> pts;
    for (int lev = level_lo; lev <= level_hi; ++lev) {
        RatePoint p;
        p.dt = 1.0 / static_cast<double>(1 << lev);
        p.error = error_at_level(lev);
        pts.push_back(p);
        rep.metrics.push_back({"error_level_" + std::to_string(lev), p.error, 1,
                               "error against the oracle at level " + std::to_string(lev)});
    }
    RateFit fit = fit_rate(pts);
    rep.metrics.push_back({"slope", fit.slope, static_cast<long>(pts.size()),
                           "least-squares slope of log error vs log dt"});
    rep.metrics.push_back({"fit_residual", fit.residual, static_cast<long>(pts.size()),
                           "rms residual of the log-log fit"});
    Check c;
    if (fit.exact) {
        c.name = "errors at rounding floor";
        c.pass = true;
        c.detail = "slope undefined, reported as exact";
    } else {
        c.name = "slope >= " + fmt(required_slope);
        c.pass = fit.slope >= required_slope;
        c.detail = "slope " + fmt(fit.slope);
    }
    rep.checks.push_back(c);
    return rep;
}

}  // namespace yspde
