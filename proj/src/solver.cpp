#include "yspde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "yspde/rng.hpp"

namespace yspde {

namespace {

void fail(const std::string& what) { throw ConfigError(what); }

double param(const CoefficientDescriptor& d, std::size_t i, double fallback) {
    return i < d.params.size() ? d.params[i] : fallback;
}

}  // namespace

void ProblemSpec::validate() const {
    if (T <= 0.0) fail("T must be positive");
    if (n < 1 || n > 3) fail("torus dimension n must lie in {1, 2, 3}");
    if (l < 1 || e < 1 || d < 1) fail("dimensions l, e, d must be >= 1");
    if (K < 0) fail("spectral cutoff K must be >= 0");
    if (!(alpha > 0.5 && alpha < 1.0)) fail("alpha must lie in (1/2, 1)");
    if (!(beta > 1.0 - alpha && beta < 0.5)) fail("beta must lie in (1-alpha, 1/2)");
    if (!(lambda >= 0.0 && lambda < 1.0)) fail("lambda must lie in [0, 1)");
    if (!(mu >= 0.0 && mu < 0.5)) fail("mu must lie in [0, 1/2)");
    if (!(nu >= 0.0 && nu < alpha)) fail("nu must lie in [0, alpha)");
    if (!(m >= 2.0)) fail("m must lie in [2, inf)");
    if (mass_shift < 0.0) fail("mass shift m0 must be >= 0");
    if (continuous_mode) {
        double cap = std::min(1.0 - lambda, 0.5 - std::max(beta, nu));
        if (!(1.0 / m < cap)) {
            std::ostringstream msg;
            msg << "continuous-solution mode needs 1/m < (1-lambda) ^ [1/2-(beta v nu)]; "
                << "got 1/m = " << 1.0 / m << " with bound " << cap;
            fail(msg.str());
        }
    }
}

SpectralField realize_field(const CoefficientDescriptor& d, int dim, int components,
                            int cutoff, std::uint64_t seed) {
    SpectralField f(dim, components, cutoff);
    if (d.id == "none" || d.id == "zero") return f;
    if (d.id == "constant") {
        double c = param(d, 0, 1.0);
        int k0[3] = {0, 0, 0};
        int m0 = f.mode_index(k0);
        for (int c_i = 0; c_i < components; ++c_i) f.at(c_i, m0) = Complex(c, 0.0);
        return f;
    }
    if (d.id == "single_mode") {
        // amp * cos(k x_1) per component
        double amp = param(d, 0, 1.0);
        int kk = static_cast<int>(param(d, 1, 1.0));
        if (kk < -cutoff || kk > cutoff) fail("single_mode wavenumber outside truncation");
        int kp[3] = {kk, 0, 0}, kn[3] = {-kk, 0, 0};
        for (int c_i = 0; c_i < components; ++c_i) {
            f.at(c_i, f.mode_index(kp)) += Complex(0.5 * amp, 0.0);
            f.at(c_i, f.mode_index(kn)) += Complex(0.5 * amp, 0.0);
        }
        return f;
    }
    if (d.id == "smooth_random" || d.id == "rough_random") {
        // random phases; amplitude amp/(1+|k|^2)^decay (smooth) or
        // amp*|k|^(-p) tail (rough)
        double amp = param(d, 0, 1.0);
        double decay = param(d, 1, d.id == "smooth_random" ? 1.0 : 1.05);
        RngStream rng(seed, 0x5eedf1e1dULL);
        int mc = f.mode_count();
        for (int c_i = 0; c_i < components; ++c_i)
            for (int mm = 0; mm < mc; ++mm) {
                double k2 = f.klen2(mm);
                double mag;
                if (d.id == "smooth_random")
                    mag = amp / std::pow(1.0 + k2, decay);
                else
                    mag = (k2 == 0.0) ? amp : amp * std::pow(k2, -0.5 * decay);
                f.at(c_i, mm) = Complex(mag * rng.gaussian(), mag * rng.gaussian());
            }
        f.symmetrize();
        return f;
    }
    fail("unknown field descriptor '" + d.id + "'");
    return f;
}

namespace {

// Scalar multiplier field on the transform grid from a descriptor.
std::vector<double> realize_multiplier(const CoefficientDescriptor& d,
                                       const TransformPlan& plan) {
    if (d.id == "none") return {};
    std::vector<double> out(plan.phys_count(), 0.0);
    if (d.id == "constant") {
        double c = param(d, 0, 1.0);
        for (auto& v : out) v = c;
        return out;
    }
    if (d.id == "cosine" || d.id == "sine") {
        double c0 = param(d, 0, 0.0);
        double c1 = param(d, 1, 1.0);
        double freq = param(d, 2, 1.0);
        int mpts = plan.phys_per_axis();
        for (int p = 0; p < plan.phys_count(); ++p) {
            double x0 = plan.coord(p % mpts);
            out[p] = c0 + c1 * (d.id == "cosine" ? std::cos(freq * x0) : std::sin(freq * x0));
        }
        return out;
    }
    fail("unknown multiplier descriptor '" + d.id + "'");
    return out;
}

}  // namespace

ProblemRealization::ProblemRealization(const ProblemSpec& spec, std::uint64_t seed)
    : spec_(spec), sg_(spec.n, spec.K, spec.mass_shift),
      plan_(spec.n, spec.K, std::max(TransformPlan::dealiased_size(spec.K), 4)),
      xi_(realize_field(spec.xi, spec.n, spec.l, spec.K, splitmix64(seed ^ 0x11ULL))),
      g_field_(spec.n, spec.l * spec.e, spec.K) {
    spec.validate();
    g1_phys_ = realize_multiplier(spec.G1, plan_);
    g0_phys_ = realize_multiplier(spec.G0, plan_);
    if (spec.g.id != "none") {
        g_field_ = realize_field(spec.g, spec.n, spec.l * spec.e, spec.K,
                                 splitmix64(seed ^ 0x22ULL));
        has_g_ = true;
    }
    if (spec.h.id == "field") {
        CoefficientDescriptor hf{"smooth_random", spec.h.params};
        h_field_ = realize_field(hf, spec.n, spec.l * spec.d, spec.K,
                                 splitmix64(seed ^ 0x33ULL));
    }
}

SpectralField ProblemRealization::drift(const SpectralField& u) const {
    int l = spec_.l, e = spec_.e;
    SpectralField out(spec_.n, l * e, spec_.K);
    if (!g1_phys_.empty() || !g0_phys_.empty()) {
        int pc = plan_.phys_count();
        std::vector<double> contrib(static_cast<std::size_t>(l) * pc, 0.0);
        if (!g0_phys_.empty()) {
            std::vector<double> u_phys = plan_.synthesize(u);
            for (int c = 0; c < l; ++c)
                for (int p = 0; p < pc; ++p)
                    contrib[static_cast<std::size_t>(c) * pc + p] +=
                        g0_phys_[p] * u_phys[static_cast<std::size_t>(c) * pc + p];
        }
        if (!g1_phys_.empty()) {
            SpectralField gsum(spec_.n, l, spec_.K);
            for (int a = 0; a < spec_.n; ++a) gsum += gradient_axis(u, a);
            std::vector<double> grad_phys = plan_.synthesize(gsum);
            for (int c = 0; c < l; ++c)
                for (int p = 0; p < pc; ++p)
                    contrib[static_cast<std::size_t>(c) * pc + p] +=
                        g1_phys_[p] * grad_phys[static_cast<std::size_t>(c) * pc + p];
        }
        // same drift column for every driver component
        std::vector<double> stacked(static_cast<std::size_t>(l) * e * pc);
        for (int j = 0; j < e; ++j)
            std::copy(contrib.begin(), contrib.end(),
                      stacked.begin() + static_cast<std::size_t>(j) * l * pc);
        out = plan_.analyze(stacked, l * e);
    }
    if (has_g_) out += g_field_;
    return out;
}

SpectralField ProblemRealization::nonlinearity(double t, const SpectralField& u) const {
    const auto& d = spec_.f;
    if (d.id == "none") return SpectralField(spec_.n, spec_.l, spec_.K);
    int pc = plan_.phys_count();
    int l = spec_.l;
    std::vector<double> u_phys = plan_.synthesize(u);
    std::vector<double> out(u_phys.size(), 0.0);
    if (d.id == "constant") {
        double c = param(d, 0, 1.0);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = c;
    } else if (d.id == "linear") {
        double a = param(d, 0, -1.0);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * u_phys[i];
    } else if (d.id == "tanh") {
        double a = param(d, 0, 1.0);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * std::tanh(u_phys[i]);
    } else if (d.id == "tanh_grad") {
        double a = param(d, 0, 1.0);
        double b = param(d, 1, 0.5);
        SpectralField gsum(spec_.n, l, spec_.K);
        for (int ax = 0; ax < spec_.n; ++ax) gsum += gradient_axis(u, ax);
        std::vector<double> grad_phys = plan_.synthesize(gsum);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = a * std::tanh(u_phys[i]) + b * grad_phys[i];
    } else {
        fail("unknown nonlinearity '" + d.id + "'");
    }
    for (double v : out)
        if (!std::isfinite(v))
            throw NumericalError("nonlinearity produced a non-finite value at t = " +
                                 std::to_string(t));
    (void)pc;
    return plan_.analyze(out, l);
}

SpectralField ProblemRealization::noise_coefficient(double /*t*/, const SpectralField& u) const {
    const auto& desc = spec_.h;
    int l = spec_.l, d = spec_.d;
    SpectralField out(spec_.n, l * d, spec_.K);
    if (desc.id == "none") return out;
    if (desc.id == "constant") {
        double sigma = param(desc, 0, 1.0);
        int k0[3] = {0, 0, 0};
        int m0 = out.mode_index(k0);
        for (int c = 0; c < l * d; ++c) out.at(c, m0) = Complex(sigma, 0.0);
        return out;
    }
    if (desc.id == "linear") {
        double sigma = param(desc, 0, 1.0);
        int mc = u.mode_count();
        for (int j = 0; j < d; ++j)
            for (int c = 0; c < l; ++c)
                for (int mm = 0; mm < mc; ++mm) out.at(j * l + c, mm) = sigma * u.at(c, mm);
        return out;
    }
    if (desc.id == "field") return h_field_;
    fail("unknown noise coefficient '" + desc.id + "'");
    return out;
}

std::vector<double> etd_weights(const SemigroupHandle& sg, double dt) {
    std::vector<double> w(sg.mode_count());
    const auto& q = sg.multipliers();
    for (std::size_t i = 0; i < w.size(); ++i) {
        double x = q[i] * dt;
        double phi1 = (x < 1e-8) ? 1.0 - 0.5 * x : (1.0 - std::exp(-x)) / x;
        w[i] = dt * phi1;
    }
    return w;
}

std::vector<double> ito_weights(const SemigroupHandle& sg, double dt) {
    std::vector<double> w(sg.mode_count());
    const auto& q = sg.multipliers();
    for (std::size_t i = 0; i < w.size(); ++i) {
        double x = q[i] * dt;
        double r = (x < 1e-8) ? 1.0 - x : (1.0 - std::exp(-2.0 * x)) / (2.0 * x);
        w[i] = std::sqrt(r);
    }
    return w;
}

namespace {

void scale_modes(SpectralField& f, const std::vector<double>& w) {
    int mc = f.mode_count();
    for (int c = 0; c < f.components(); ++c)
        for (int m = 0; m < mc; ++m) f.at(c, m) *= w[m];
}

// One left-to-right Picard sweep over nodes [a, b]: germs evaluated on the
// previous iterate `u`, the new iterate propagated exactly per mode.
void picard_sweep(const ProblemRealization& prob, const FieldPath& u, const DriverPath& eta,
                  const DriverPath& w, int a, int b, const SpectralField& start,
                  FieldPath& out) {
    const SemigroupHandle& sg = prob.semigroup();
    const Grid& grid = u.grid;
    double dt = grid.dt();
    auto prop = sg.propagator(dt);
    auto fw = prob.has_f() ? etd_weights(sg, dt) : std::vector<double>();
    auto hw = prob.has_h() ? ito_weights(sg, dt) : std::vector<double>();
    int e = prob.spec().e, d = prob.spec().d;
    out.values[a] = start;
    std::vector<double> deta(e), dw(d);
    for (int k = a; k < b; ++k) {
        SpectralField next = out.values[k];
        sg.apply_inplace(prop, next);
        if (prob.has_drift()) {
            for (int c = 0; c < e; ++c) deta[c] = eta.at(k + 1, c) - eta.at(k, c);
            SpectralField zinc = prob.drift(u.values[k]).contract(deta.data(), e);
            sg.apply_inplace(prop, zinc);
            next += zinc;
        }
        if (prob.has_f()) {
            SpectralField finc = prob.nonlinearity(grid.node(k), u.values[k]);
            scale_modes(finc, fw);
            next += finc;
        }
        if (prob.has_h()) {
            for (int c = 0; c < d; ++c) dw[c] = w.at(k + 1, c) - w.at(k, c);
            SpectralField hinc =
                prob.noise_coefficient(grid.node(k), u.values[k]).contract(dw.data(), d);
            scale_modes(hinc, hw);
            next += hinc;
        }
        out.values[k + 1] = std::move(next);
    }
}

}  // namespace

FieldPath deterministic_convolution(const ProblemRealization& prob, const FieldPath& u,
                                    const Grid& grid) {
    const SemigroupHandle& sg = prob.semigroup();
    double dt = grid.dt();
    auto prop = sg.propagator(dt);
    auto fw = etd_weights(sg, dt);
    FieldPath out(grid, prob.state_shape());
    for (int k = 0; k + 1 < grid.nodes(); ++k) {
        SpectralField next = out.values[k];
        sg.apply_inplace(prop, next);
        SpectralField finc = prob.nonlinearity(grid.node(k), u.values[k]);
        scale_modes(finc, fw);
        next += finc;
        out.values[k + 1] = std::move(next);
    }
    return out;
}

FieldPath stochastic_convolution(const ProblemRealization& prob, const FieldPath& u,
                                 const DriverPath& w, const Grid& grid) {
    if (w.dims != prob.spec().d)
        throw ConfigError("Brownian driver dimension does not match h output");
    const SemigroupHandle& sg = prob.semigroup();
    double dt = grid.dt();
    auto prop = sg.propagator(dt);
    auto hw = ito_weights(sg, dt);
    int d = prob.spec().d;
    FieldPath out(grid, prob.state_shape());
    std::vector<double> dw(d);
    for (int k = 0; k + 1 < grid.nodes(); ++k) {
        SpectralField next = out.values[k];
        sg.apply_inplace(prop, next);
        for (int c = 0; c < d; ++c) dw[c] = w.at(k + 1, c) - w.at(k, c);
        SpectralField hinc =
            prob.noise_coefficient(grid.node(k), u.values[k]).contract(dw.data(), d);
        scale_modes(hinc, hw);
        next += hinc;
        out.values[k + 1] = std::move(next);
    }
    return out;
}

FieldPath picard_map(const ProblemRealization& prob, const FieldPath& u, const DriverPath& eta,
                     const DriverPath& w, const Grid& grid) {
    FieldPath out(grid, prob.state_shape());
    picard_sweep(prob, u, eta, w, 0, grid.intervals(), prob.initial(), out);
    return out;
}

Trajectory solve_mild(const ProblemRealization& prob, const DriverPath& eta,
                      const DriverPath& w, const Grid& grid, const SolveOptions& opt) {
    if (!(eta.grid == grid) || !(w.grid == grid))
        throw ConfigError("grid-mismatch: drivers must be sampled on the solve grid");
    double gamma = prob.spec().gamma;
    const SemigroupHandle& sg = prob.semigroup();
    double wl = opt.window_len > 0.0 ? opt.window_len : grid.horizon / 8.0;
    if (wl > grid.horizon * (1.0 + 1e-12))
        throw ConfigError("window_len must not exceed the horizon T");
    double dt = grid.dt();
    int steps = static_cast<int>(std::llround(wl / dt));
    if (steps < 1 || std::abs(steps * dt - wl) > 1e-9 * grid.horizon)
        throw ConfigError("window boundaries must be grid nodes (window_len a multiple of dt)");

    Trajectory traj;
    traj.u = FieldPath(grid, prob.state_shape());
    traj.u.values[0] = prob.initial();
    int start = 0;
    int n = grid.intervals();
    int halvings = 0;
    while (start < n) {
        int end = std::min(start + steps, n);
        SpectralField window_start = traj.u.values[start];
        // constant-in-time initial guess (or zero, for the uniqueness probe)
        SpectralField guess = window_start;
        if (opt.zero_initial_guess)
            for (auto& v : guess.data()) v = Complex(0.0, 0.0);
        FieldPath cur = traj.u;
        for (int k = start; k <= end; ++k) cur.values[k] = guess;
        WindowStats stats;
        stats.start_node = start;
        stats.end_node = end;
        stats.window_len = steps * dt;
        bool accepted = false;
        FieldPath next = cur;
        for (int it = 0; it < opt.max_iter; ++it) {
            picard_sweep(prob, cur, eta, w, start, end, window_start, next);
            double res = 0.0;
            for (int k = start; k <= end; ++k)
                res = std::max(res, sg.sobolev_norm(next.values[k] - cur.values[k], gamma));
            stats.residuals.push_back(res);
            std::swap(cur.values, next.values);
            if (res < opt.picard_tol) {
                accepted = true;
                break;
            }
            std::size_t nr = stats.residuals.size();
            if (nr >= 2 && stats.residuals[nr - 1] >= stats.residuals[nr - 2]) break;
        }
        // contraction ratios after the first iteration
        stats.max_ratio = 0.0;
        for (std::size_t i = 2; i < stats.residuals.size(); ++i)
            if (stats.residuals[i - 1] > 0.0)
                stats.max_ratio =
                    std::max(stats.max_ratio, stats.residuals[i] / stats.residuals[i - 1]);
        if (accepted && stats.max_ratio <= opt.contraction_cap) {
            for (int k = start; k <= end; ++k) traj.u.values[k] = cur.values[k];
            traj.windows.push_back(std::move(stats));
            start = end;
            continue;
        }
        if (halvings >= opt.max_halvings || steps == 1) {
            std::ostringstream msg;
            msg << "window-divergence: Picard iteration failed to contract on ["
                << grid.node(start) << ", " << grid.node(end) << "] after " << halvings
                << " halvings; use a smaller window_len";
            throw NumericalError(msg.str());
        }
        steps /= 2;
        ++halvings;
    }
    traj.halvings = halvings;
    traj.final_window_len = steps * dt;
    return traj;
}

std::vector<double> oracle_young_linear(double kappa, double xi, const DriverPath& eta) {
    std::vector<double> out(eta.grid.nodes());
    for (int k = 0; k < eta.grid.nodes(); ++k)
        out[k] = xi * std::exp(-kappa * eta.grid.node(k) + (eta.at(k, 0) - eta.at(0, 0)));
    return out;
}

std::vector<double> oracle_deterministic_linear(double kappa, double rate, double xi,
                                                const Grid& grid) {
    std::vector<double> out(grid.nodes());
    for (int k = 0; k < grid.nodes(); ++k) out[k] = xi * std::exp(-(kappa + rate) * grid.node(k));
    return out;
}

OuCurves oracle_ou(double q, double sigma, double xi, const Grid& grid) {
    OuCurves c;
    c.mean.resize(grid.nodes());
    c.variance.resize(grid.nodes());
    for (int k = 0; k < grid.nodes(); ++k) {
        double t = grid.node(k);
        c.mean[k] = xi * std::exp(-q * t);
        c.variance[k] = (q == 0.0) ? sigma * sigma * t
                                   : sigma * sigma * (1.0 - std::exp(-2.0 * q * t)) / (2.0 * q);
    }
    return c;
}

}  // namespace yspde
