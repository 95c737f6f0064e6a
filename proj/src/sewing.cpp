#include "yspde/sewing.hpp"

#include "yspde/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace yspde {

FieldPath twisted_recursion(const GermEvaluator& germ, const Grid& finest,
                            const SemigroupHandle& sg, int stride,
                            const SpectralField& shape) {
    if (stride < 1 || finest.intervals() % stride != 0)
        throw ConfigError("recursion stride must divide the finest interval count");
    int steps = finest.intervals() / stride;
    auto prop = sg.propagator(stride * finest.dt());
    FieldPath out;
    // keep the dyadic description when the stride allows it
    int drop = 0;
    while ((1 << drop) < stride) ++drop;
    if ((1 << drop) == stride && finest.level >= drop)
        out.grid = Grid(finest.horizon, finest.base_intervals, finest.level - drop);
    else
        out.grid = Grid(finest.horizon, steps, 0);
    out.values.reserve(steps + 1);
    SpectralField z = shape;
    for (auto& v : z.data()) v = Complex(0.0, 0.0);
    out.values.push_back(z);
    for (int i = 0; i < steps; ++i) {
        sg.apply_inplace(prop, z);
        z += germ.eval(i * stride, (i + 1) * stride);
        out.values.push_back(z);
    }
    return out;
}

SewingResult mild_sewing(const GermEvaluator& germ, const Grid& working,
                         const SemigroupHandle& sg, int refine_levels, double tol,
                         double gamma, const SpectralField& shape) {
    if (refine_levels < 0) throw ConfigError("refine_levels must be >= 0");
    Grid finest = working.refined(refine_levels);
    SewingResult res;
    std::vector<SpectralField> prev;  // previous level at working nodes
    int wn = working.nodes();
    int rising = 0;
    for (int lev = 0; lev <= refine_levels; ++lev) {
        int stride = 1 << (refine_levels - lev);
        FieldPath zl = twisted_recursion(germ, finest, sg, stride, shape);
        int per_working = working.stride_to(finest) / stride;
        std::vector<SpectralField> at_working;
        at_working.reserve(wn);
        for (int j = 0; j < wn; ++j) at_working.push_back(zl.values[j * per_working]);
        if (lev == refine_levels) {
            res.z_finest = std::move(zl);
        }
        if (lev > 0) {
            double diff = 0.0;
            for (int j = 0; j < wn; ++j)
                diff = std::max(diff, sg.sobolev_norm(at_working[j] - prev[j], gamma));
            DefectLevel dl;
            dl.level = lev;
            dl.max_defect = diff;
            dl.ratio_to_prev =
                (res.levels.empty() || res.levels.back().max_defect == 0.0)
                    ? 0.0
                    : diff / res.levels.back().max_defect;
            if (!res.levels.empty() && res.levels.back().max_defect > 0.0 &&
                dl.ratio_to_prev >= 1.05 && diff > tol) {
                ++rising;
                if (rising >= 2) {
                    res.levels.push_back(dl);
                    std::ostringstream msg;
                    msg << "sewing level differences are not decaying (last ratio "
                        << dl.ratio_to_prev << " at level " << lev << ")";
                    throw SewingDivergence(msg.str(), res.levels);
                }
            } else {
                rising = 0;
            }
            res.levels.push_back(dl);
            res.levels_used = lev;
            if (diff < tol) {
                res.converged = true;
                res.z = FieldPath();
                res.z.grid = working;
                res.z.values = std::move(at_working);
                if (lev < refine_levels) {
                    // still provide the finest recursion, it is cheap and
                    // exactly additive
                    res.z_finest = twisted_recursion(germ, finest, sg, 1, shape);
                }
                return res;
            }
        }
        prev = std::move(at_working);
        if (lev == refine_levels) {
            res.z = FieldPath();
            res.z.grid = working;
            res.z.values = std::move(prev);
            prev.clear();
        }
    }
    res.levels_used = refine_levels;
    res.converged = false;
    return res;
}

GermEvaluator young_germ(const FieldPath& y, const DriverPath& eta,
                         const SemigroupHandle& sg, double alpha, double beta) {
    if (!(y.grid == eta.grid)) throw ConfigError("grid-mismatch: Y and eta grids differ");
    int e = eta.dims;
    if (y.values.front().components() % e != 0)
        throw ConfigError("Y component count is not a multiple of the driver dimension");
    sg.require_match(y.values.front());
    GermEvaluator germ;
    germ.alpha = alpha;
    germ.epsilon = alpha + beta - 1.0;
    const FieldPath* yp = &y;
    const DriverPath* ep = &eta;
    const SemigroupHandle* sgp = &sg;
    double dt = y.grid.dt();
    germ.eval = [yp, ep, sgp, e, dt](int i, int j) {
        std::vector<double> w(e);
        for (int c = 0; c < e; ++c) w[c] = ep->at(j, c) - ep->at(i, c);
        SpectralField a = yp->values[i].contract(w.data(), e);
        return sgp->apply((j - i) * dt, a);
    };
    return germ;
}

SewingResult young_convolution(const FieldPath& y, const DriverPath& eta,
                               const SemigroupHandle& sg, const Grid& working,
                               int refine_levels, double tol, double gamma,
                               double alpha, double beta) {
    Grid finest = working.refined(refine_levels);
    if (!(y.grid == finest))
        throw ConfigError("grid-mismatch: Y must be pre-sampled on the finest refinement level");
    GermEvaluator germ = young_germ(y, eta, sg, alpha, beta);
    int l = y.values.front().components() / eta.dims;
    SpectralField shape(y.values.front().dim(), l, y.values.front().cutoff());
    return mild_sewing(germ, working, sg, refine_levels, tol, gamma, shape);
}

FieldPath young_recursion(const FieldPath& y, const DriverPath& eta,
                          const SemigroupHandle& sg) {
    GermEvaluator germ = young_germ(y, eta, sg, 0.5, 0.0);
    int l = y.values.front().components() / eta.dims;
    SpectralField shape(y.values.front().dim(), l, y.values.front().cutoff());
    return twisted_recursion(germ, y.grid, sg, 1, shape);
}

GermProbe germ_defect_probe(const GermEvaluator& germ, const SemigroupHandle& sg,
                            const Grid& finest, double gamma, int trials,
                            std::uint64_t seed) {
    int n = finest.intervals();
    double dt = finest.dt();
    double eps = germ.epsilon;
    auto w2 = sg.norm_weights(2.0 * gamma);
    const auto& q = sg.multipliers();
    // |Lambda|_gamma with the semigroup inverted mode by mode; overflow of
    // e^{(t-r) q} marks the factorization as unbounded at this truncation
    auto lambda_norm = [&](int s, int r, int t) {
        SpectralField d = germ.eval(s, t) - sg.apply((t - r) * dt, germ.eval(s, r)) -
                          germ.eval(r, t);
        double acc = 0.0;
        for (int m = 0; m < static_cast<int>(q.size()); ++m) {
            double expo = (t - r) * dt * q[m];
            if (expo > 300.0) {
                double mag = 0.0;
                for (int c = 0; c < d.components(); ++c) mag += std::norm(d.at(c, m));
                if (mag > 0.0) return std::numeric_limits<double>::infinity();
                continue;
            }
            double amp = std::exp(expo);
            for (int c = 0; c < d.components(); ++c)
                acc += w2[m] * std::norm(amp * d.at(c, m));
        }
        return std::sqrt(acc);
    };
    // triples drawn from one gap band; a germ with a genuine sewing bound
    // has a band-independent constant
    auto measure = [&](int lo_gap, int hi_gap) {
        RngStream rng(seed, 97);
        double best = 0.0;
        for (int trial = 0; trial < trials; ++trial) {
            int gap = lo_gap + static_cast<int>(rng.uniform() * std::max(1, hi_gap - lo_gap));
            int s = static_cast<int>(rng.uniform() * (n - gap));
            int t = s + gap;
            int r = s + 1 + static_cast<int>(rng.uniform() * (gap - 1));
            double lam = lambda_norm(s, r, t);
            double scale = ((t - s) * dt) * std::pow((t - r) * dt, eps);
            best = std::max(best, lam / scale);
        }
        return best;
    };
    GermProbe probe;
    probe.constant_coarse = measure(std::max(2, n / 2), n);
    probe.constant_fine = measure(std::max(2, n / 8), std::max(3, n / 4));
    probe.best_effort = !std::isfinite(probe.constant_fine) ||
                        probe.constant_fine > 4.0 * std::max(probe.constant_coarse, 1e-300);
    return probe;
}

namespace {

template <typename PairFn>
void remainder_pairs(const Grid& g, int window, PairFn&& fn) {
    int nodes = g.nodes();
    for (int i = 0; i + 1 < nodes; ++i) {
        int jmax = (window > 0) ? std::min(nodes - 1, i + window) : nodes - 1;
        for (int j = i + 1; j <= jmax; ++j) fn(i, j);
    }
}

}  // namespace

double remainder_prefactor(const FieldPath& z, const GermEvaluator& germ,
                           const SemigroupHandle& sg, double gamma, double theta,
                           double eps, int window) {
    std::vector<const FieldPath*> zs{&z};
    std::vector<const GermEvaluator*> gs{&germ};
    return remainder_prefactor_lm(zs, gs, sg, gamma, theta, eps, 2.0, window);
}

double remainder_prefactor_lm(const std::vector<const FieldPath*>& zs,
                              const std::vector<const GermEvaluator*>& germs,
                              const SemigroupHandle& sg, double gamma, double theta,
                              double eps, double m, int window) {
    if (zs.empty() || zs.size() != germs.size())
        throw ConfigError("remainder probe needs matching z / germ ensembles");
    const Grid& g = zs.front()->grid;
    double dt = g.dt();
    std::vector<std::vector<double>> props(g.intervals() + 1);
    double best = 0.0;
    remainder_pairs(g, window, [&](int i, int j) {
        auto& prop = props[j - i];
        if (prop.empty()) prop = sg.propagator((j - i) * dt);
        double acc = 0.0;
        for (std::size_t mem = 0; mem < zs.size(); ++mem) {
            SpectralField zs_prop = zs[mem]->values[i];
            sg.apply_inplace(prop, zs_prop);
            SpectralField r = zs[mem]->values[j] - zs_prop - germs[mem]->eval(i, j);
            acc += std::pow(sg.sobolev_norm(r, gamma + theta), m);
        }
        double lmval = std::pow(acc / zs.size(), 1.0 / m);
        double gap = (j - i) * dt;
        best = std::max(best, lmval / std::pow(gap, 1.0 + eps - theta));
    });
    return best;
}

ConvolutionBoundReport convolution_bound_probe(const FieldEnsemble& zs,
                                               const FieldEnsemble& ys,
                                               const DriverEnsemble& etas,
                                               const SemigroupHandle& sg, double alpha,
                                               double beta, double gamma, double theta,
                                               double m, int window) {
    if (zs.empty() || zs.size() != ys.size() || zs.size() != etas.size())
        throw ConfigError("probe needs matching Z / Y / eta ensembles");
    if (!(beta > 1.0 - alpha && beta < alpha))
        throw ConfigError("beta must lie in (1-alpha, alpha)");
    if (!(theta >= 0.0 && theta < alpha)) throw ConfigError("theta must lie in [0, alpha)");
    PairSupOptions mild{window, IncrementKind::Mild, &sg};
    PairSupOptions plain{window, IncrementKind::Plain, nullptr};
    ConvolutionBoundReport rep;

    double num_lm = mixed_norm_Lm_of_holder(zs, alpha - theta, gamma + theta, m,
                                            sg.norm_mass(), mild);
    double y_lm = ebeta_lm_norm(ys, beta, gamma, m, sg.norm_mass(), plain);
    double deta_max = 0.0;
    for (const auto& eta : etas) deta_max = std::max(deta_max, holder_seminorm(eta, alpha));
    double den_lm = y_lm * deta_max;
    rep.ratio_lm = (den_lm == 0.0) ? 0.0 : num_lm / den_lm;

    for (std::size_t i = 0; i < zs.size(); ++i) {
        double num = holder_seminorm(zs[i], alpha - theta, gamma + theta, sg.norm_mass(), mild);
        FieldEnsemble one{ys[i]};
        double den = ebeta_lm_norm(one, beta, gamma, m, sg.norm_mass(), plain) *
                     holder_seminorm(etas[i], alpha);
        double r = (den == 0.0) ? 0.0 : num / den;
        rep.ratio_pathwise = std::max(rep.ratio_pathwise, r);
    }
    return rep;
}

CompatibilityReport compatibility_check(const FieldEnsemble& ys, const DriverEnsemble& etas,
                                        const SemigroupHandle& sg, const Grid& working,
                                        int refine_levels, double tol, double gamma,
                                        double alpha, double beta, double m) {
    if (ys.empty() || ys.size() != etas.size())
        throw ConfigError("compatibility check needs matching Y / eta ensembles");
    CompatibilityReport rep;
    double acc = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        SewingResult r =
            young_convolution(ys[i], etas[i], sg, working, refine_levels, tol, gamma, alpha, beta);
        double last = r.levels.empty() ? 0.0 : r.levels.back().max_defect;
        acc += std::pow(last, m);
        rep.pathwise_residual = std::max(rep.pathwise_residual, last);
    }
    rep.lm_residual = std::pow(acc / ys.size(), 1.0 / m);
    return rep;
}

}  // namespace yspde
