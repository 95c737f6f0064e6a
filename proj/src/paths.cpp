#include "yspde/paths.hpp"

#include <algorithm>
#include <cmath>

namespace yspde {

namespace {

void require_two_nodes(const Grid& g) {
    if (g.nodes() < 2) throw ConfigError("degenerate grid: pairwise estimators need >= 2 nodes");
}

void require_beta(double beta) {
    if (beta <= 0.0 || beta > 1.0) throw ConfigError("Hoelder exponent must lie in (0, 1]");
}

void require_m(double m) {
    if (m < 2.0) throw ConfigError("moment order m must lie in [2, inf)");
}

// Per-pair visitor over (i < j), optionally windowed.
template <typename F>
void for_pairs(int nodes, int window, F&& fn) {
    for (int i = 0; i + 1 < nodes; ++i) {
        int jmax = (window > 0) ? std::min(nodes - 1, i + window) : nodes - 1;
        for (int j = i + 1; j <= jmax; ++j) fn(i, j);
    }
}

// Cache of e^{-gap*dt*q} rows, built lazily per gap.
class PropagatorTable {
public:
    PropagatorTable(const SemigroupHandle* sg, double dt, int max_gap)
        : sg_(sg), dt_(dt), rows_(sg ? max_gap + 1 : 0) {}

    const std::vector<double>& row(int gap) {
        auto& r = rows_[gap];
        if (r.empty()) r = sg_->propagator(gap * dt_);
        return r;
    }

private:
    const SemigroupHandle* sg_;
    double dt_;
    std::vector<std::vector<double>> rows_;
};

double pair_value(const FieldPath& y, int i, int j, const PairSupOptions& opt,
                  PropagatorTable& table, const std::vector<double>& w2) {
    const SpectralField& a = y.values[i];
    const SpectralField& b = y.values[j];
    int mc = a.mode_count();
    double s = 0.0;
    if (opt.kind == IncrementKind::Mild) {
        const std::vector<double>& p = table.row(j - i);
        for (int m = 0; m < mc; ++m) {
            double acc = 0.0;
            for (int c = 0; c < a.components(); ++c)
                acc += std::norm(b.at(c, m) - p[m] * a.at(c, m));
            s += w2[m] * acc;
        }
    } else {
        for (int m = 0; m < mc; ++m) {
            double acc = 0.0;
            for (int c = 0; c < a.components(); ++c) acc += std::norm(b.at(c, m) - a.at(c, m));
            s += w2[m] * acc;
        }
    }
    return std::sqrt(s);
}

std::vector<double> squared_norm_weights(const SpectralField& shape, double gamma,
                                         double norm_mass) {
    int mc = shape.mode_count();
    std::vector<double> w2(mc);
    for (int m = 0; m < mc; ++m) w2[m] = std::pow(norm_mass + shape.klen2(m), 2.0 * gamma);
    return w2;
}

void check_mild_opts(const PairSupOptions& opt, const SpectralField& shape) {
    if (opt.kind == IncrementKind::Mild) {
        if (opt.semigroup == nullptr)
            throw ConfigError("mild increments need a semigroup handle");
        opt.semigroup->require_match(shape);
    }
}

}  // namespace

DriverPath DriverPath::restricted(const Grid& coarse) const {
    int stride = coarse.stride_to(grid);
    DriverPath out(coarse, dims);
    out.alpha_nominal = alpha_nominal;
    out.kind = kind;
    for (int k = 0; k < coarse.nodes(); ++k)
        for (int d = 0; d < dims; ++d) out.at(k, d) = at(k * stride, d);
    return out;
}

FieldPath FieldPath::restricted(const Grid& coarse) const {
    int stride = coarse.stride_to(grid);
    FieldPath out;
    out.grid = coarse;
    out.values.reserve(coarse.nodes());
    for (int k = 0; k < coarse.nodes(); ++k) out.values.push_back(values[k * stride]);
    return out;
}

std::vector<double> increment(const DriverPath& y, int s_idx, int t_idx) {
    y.check_node(s_idx);
    y.check_node(t_idx);
    if (s_idx > t_idx) throw ConfigError("increment needs s_idx <= t_idx");
    std::vector<double> d(y.dims);
    for (int c = 0; c < y.dims; ++c) d[c] = y.at(t_idx, c) - y.at(s_idx, c);
    return d;
}

SpectralField increment(const FieldPath& y, int s_idx, int t_idx) {
    y.check_node(s_idx);
    y.check_node(t_idx);
    if (s_idx > t_idx) throw ConfigError("increment needs s_idx <= t_idx");
    return y.values[t_idx] - y.values[s_idx];
}

SpectralField mild_increment(const FieldPath& y, const SemigroupHandle& sg, int s_idx,
                             int t_idx) {
    y.check_node(s_idx);
    y.check_node(t_idx);
    if (s_idx > t_idx) throw ConfigError("mild increment needs s_idx <= t_idx");
    sg.require_match(y.values[s_idx]);
    double dt = y.grid.node(t_idx) - y.grid.node(s_idx);
    return y.values[t_idx] - sg.apply(dt, y.values[s_idx]);
}

SpectralField delta3_defect(const TwoParamArray& a, const SemigroupHandle& sg, int s_idx,
                            int r_idx, int t_idx) {
    if (!(s_idx <= r_idx && r_idx <= t_idx))
        throw ConfigError("delta3 defect needs s_idx <= r_idx <= t_idx");
    double dt = a.grid.node(t_idx) - a.grid.node(r_idx);
    return a.eval(s_idx, t_idx) - sg.apply(dt, a.eval(s_idx, r_idx)) - a.eval(r_idx, t_idx);
}

double holder_seminorm(const DriverPath& y, double beta, const PairSupOptions& opt) {
    require_two_nodes(y.grid);
    require_beta(beta);
    double best = 0.0;
    for_pairs(y.grid.nodes(), opt.window, [&](int i, int j) {
        double s = 0.0;
        for (int c = 0; c < y.dims; ++c) {
            double d = y.at(j, c) - y.at(i, c);
            s += d * d;
        }
        double gap = y.grid.node(j) - y.grid.node(i);
        best = std::max(best, std::sqrt(s) / std::pow(gap, beta));
    });
    return best;
}

double holder_seminorm(const FieldPath& y, double beta, double gamma, double norm_mass,
                       const PairSupOptions& opt) {
    require_two_nodes(y.grid);
    require_beta(beta);
    check_mild_opts(opt, y.values.front());
    auto w2 = squared_norm_weights(y.values.front(), gamma, norm_mass);
    PropagatorTable table(opt.semigroup, y.grid.dt(), y.grid.intervals());
    double best = 0.0;
    for_pairs(y.grid.nodes(), opt.window, [&](int i, int j) {
        double v = pair_value(y, i, j, opt, table, w2);
        double gap = y.grid.node(j) - y.grid.node(i);
        best = std::max(best, v / std::pow(gap, beta));
    });
    return best;
}

double sup_norm(const FieldPath& y, double gamma, double norm_mass) {
    double best = 0.0;
    for (const auto& f : y.values) best = std::max(best, sobolev_norm(f, gamma, norm_mass));
    return best;
}

double mixed_norm_Lm_of_holder(const FieldEnsemble& ens, double beta, double gamma, double m,
                               double norm_mass, const PairSupOptions& opt) {
    if (ens.empty()) throw ConfigError("empty ensemble");
    require_two_nodes(ens.front().grid);
    require_beta(beta);
    require_m(m);
    check_mild_opts(opt, ens.front().values.front());
    auto w2 = squared_norm_weights(ens.front().values.front(), gamma, norm_mass);
    PropagatorTable table(opt.semigroup, ens.front().grid.dt(), ens.front().grid.intervals());
    const Grid& g = ens.front().grid;
    double best = 0.0;
    for_pairs(g.nodes(), opt.window, [&](int i, int j) {
        double acc = 0.0;
        for (const auto& y : ens) acc += std::pow(pair_value(y, i, j, opt, table, w2), m);
        double lm = std::pow(acc / ens.size(), 1.0 / m);
        double gap = g.node(j) - g.node(i);
        best = std::max(best, lm / std::pow(gap, beta));
    });
    return best;
}

double mixed_norm_Lm_of_holder(const DriverEnsemble& ens, double beta, double m,
                               const PairSupOptions& opt) {
    if (ens.empty()) throw ConfigError("empty ensemble");
    require_two_nodes(ens.front().grid);
    require_beta(beta);
    require_m(m);
    const Grid& g = ens.front().grid;
    double best = 0.0;
    for_pairs(g.nodes(), opt.window, [&](int i, int j) {
        double acc = 0.0;
        for (const auto& y : ens) {
            double s = 0.0;
            for (int c = 0; c < y.dims; ++c) {
                double d = y.at(j, c) - y.at(i, c);
                s += d * d;
            }
            acc += std::pow(std::sqrt(s), m);
        }
        double lm = std::pow(acc / ens.size(), 1.0 / m);
        double gap = g.node(j) - g.node(i);
        best = std::max(best, lm / std::pow(gap, beta));
    });
    return best;
}

double mixed_norm_holder_of_Lm(const FieldEnsemble& ens, double beta, double gamma, double m,
                               double norm_mass, const PairSupOptions& opt) {
    if (ens.empty()) throw ConfigError("empty ensemble");
    require_m(m);
    double acc = 0.0;
    for (const auto& y : ens) acc += std::pow(holder_seminorm(y, beta, gamma, norm_mass, opt), m);
    return std::pow(acc / ens.size(), 1.0 / m);
}

double mixed_norm_holder_of_Lm(const DriverEnsemble& ens, double beta, double m,
                               const PairSupOptions& opt) {
    if (ens.empty()) throw ConfigError("empty ensemble");
    require_m(m);
    double acc = 0.0;
    for (const auto& y : ens) acc += std::pow(holder_seminorm(y, beta, opt), m);
    return std::pow(acc / ens.size(), 1.0 / m);
}

double mixed_sup_Lm(const FieldEnsemble& ens, double gamma, double m, double norm_mass) {
    if (ens.empty()) throw ConfigError("empty ensemble");
    require_m(m);
    int nodes = ens.front().grid.nodes();
    double best = 0.0;
    for (int t = 0; t < nodes; ++t) {
        double acc = 0.0;
        for (const auto& y : ens) acc += std::pow(sobolev_norm(y.values[t], gamma, norm_mass), m);
        best = std::max(best, std::pow(acc / ens.size(), 1.0 / m));
    }
    return best;
}

double mixed_Lm_sup(const FieldEnsemble& ens, double gamma, double m, double norm_mass) {
    if (ens.empty()) throw ConfigError("empty ensemble");
    require_m(m);
    double acc = 0.0;
    for (const auto& y : ens) acc += std::pow(sup_norm(y, gamma, norm_mass), m);
    return std::pow(acc / ens.size(), 1.0 / m);
}

double ebeta_lm_norm(const FieldEnsemble& ens, double beta, double gamma, double m,
                     double norm_mass, const PairSupOptions& opt) {
    return mixed_norm_Lm_of_holder(ens, beta, gamma - beta, m, norm_mass, opt) +
           mixed_sup_Lm(ens, gamma, m, norm_mass);
}

double lm_ebeta_norm(const FieldEnsemble& ens, double beta, double gamma, double m,
                     double norm_mass, const PairSupOptions& opt) {
    return mixed_norm_holder_of_Lm(ens, beta, gamma - beta, m, norm_mass, opt) +
           mixed_Lm_sup(ens, gamma, m, norm_mass);
}

}  // namespace yspde
