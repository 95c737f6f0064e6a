#include "yspde/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace yspde {

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    if (!same_shape(o)) throw ConfigError("field shape mismatch in +=");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    if (!same_shape(o)) throw ConfigError("field shape mismatch in -=");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double c) {
    for (auto& v : coeffs_) v *= c;
    return *this;
}

SpectralField SpectralField::block(int j, int block_size) const {
    if ((j + 1) * block_size > components_) throw ConfigError("driver block out of range");
    SpectralField out(dim_, block_size, cutoff_);
    int mc = mode_count();
    for (int c = 0; c < block_size; ++c)
        for (int m = 0; m < mc; ++m) out.at(c, m) = at(j * block_size + c, m);
    return out;
}

SpectralField SpectralField::contract(const double* weights, int e) const {
    if (components_ % e != 0) throw ConfigError("component count not divisible by driver dimension");
    int l = components_ / e;
    SpectralField out(dim_, l, cutoff_);
    int mc = mode_count();
    for (int j = 0; j < e; ++j) {
        double w = weights[j];
        if (w == 0.0) continue;
        for (int c = 0; c < l; ++c)
            for (int m = 0; m < mc; ++m) out.at(c, m) += w * at(j * l + c, m);
    }
    return out;
}

void SpectralField::symmetrize() {
    int mc = mode_count();
    std::vector<int> k(3, 0), nk(3, 0);
    for (int m = 0; m < mc; ++m) {
        wavevector(m, k.data());
        for (int a = 0; a < dim_; ++a) nk[a] = -k[a];
        int mm = mode_index(nk.data());
        if (mm < m) continue;
        for (int c = 0; c < components_; ++c) {
            Complex avg = 0.5 * (at(c, m) + std::conj(at(c, mm)));
            at(c, m) = avg;
            at(c, mm) = std::conj(avg);
        }
    }
}

SpectralField scalar_field(double x) {
    SpectralField f(1, 1, 0);
    f.at(0, 0) = Complex(x, 0.0);
    return f;
}

SemigroupHandle::SemigroupHandle(int dim, int cutoff, double mass_shift)
    : dim_(dim), cutoff_(cutoff), mass_shift_(mass_shift) {
    if (mass_shift < 0.0) throw ConfigError("mass shift must be >= 0");
    norm_mass_ = std::max(mass_shift, 1.0);
    SpectralField probe(dim, 1, cutoff);
    int mc = probe.mode_count();
    q_.resize(mc);
    klen2_.resize(mc);
    for (int m = 0; m < mc; ++m) {
        klen2_[m] = probe.klen2(m);
        q_[m] = klen2_[m] + mass_shift;
    }
}

std::vector<double> SemigroupHandle::propagator(double t) const {
    if (t < 0.0) throw ConfigError("semigroup time must be >= 0");
    std::vector<double> p(q_.size());
    for (std::size_t m = 0; m < q_.size(); ++m) p[m] = std::exp(-t * q_[m]);
    return p;
}

SpectralField SemigroupHandle::apply(double t, const SpectralField& u) const {
    require_match(u);
    SpectralField out = u;
    auto p = propagator(t);
    apply_inplace(p, out);
    return out;
}

void SemigroupHandle::apply_inplace(const std::vector<double>& prop, SpectralField& u) const {
    require_match(u);
    int mc = mode_count();
    for (int c = 0; c < u.components(); ++c)
        for (int m = 0; m < mc; ++m) u.at(c, m) *= prop[m];
}

std::vector<double> SemigroupHandle::norm_weights(double gamma) const {
    std::vector<double> w(q_.size());
    for (std::size_t m = 0; m < q_.size(); ++m)
        w[m] = std::pow(norm_mass_ + klen2_[m], gamma);
    return w;
}

double SemigroupHandle::sobolev_norm(const SpectralField& u, double gamma) const {
    require_match(u);
    return yspde::sobolev_norm(u, gamma, norm_mass_);
}

SpectralField SemigroupHandle::frac_power(double gamma, const SpectralField& u,
                                          bool norm_mode) const {
    require_match(u);
    SpectralField out = u;
    int mc = mode_count();
    for (int m = 0; m < mc; ++m) {
        double base = norm_mode ? (norm_mass_ + klen2_[m]) : q_[m];
        double mult;
        if (base == 0.0) {
            if (gamma < 0.0)
                throw NumericalError("(-L)^gamma is singular at the zero mode; "
                                     "use norm mode or a positive mass shift");
            mult = (gamma == 0.0) ? 1.0 : 0.0;
        } else {
            mult = std::pow(base, gamma);
        }
        for (int c = 0; c < u.components(); ++c) out.at(c, m) *= mult;
    }
    return out;
}

double SemigroupHandle::smoothing_constant_probe(double gamma1, double gamma2,
                                                 const std::vector<double>& t_list) const {
    if (gamma1 > gamma2) throw ConfigError("smoothing probe needs gamma1 <= gamma2");
    double theta = gamma2 - gamma1;
    double best = 0.0;
    for (double t : t_list) {
        if (t <= 0.0) throw ConfigError("smoothing probe times must be positive");
        for (std::size_t m = 0; m < q_.size(); ++m) {
            double w = norm_mass_ + klen2_[m];
            double ratio = std::pow(t, theta) * std::exp(-t * q_[m]) * std::pow(w, theta);
            best = std::max(best, ratio);
        }
    }
    return best;
}

double SemigroupHandle::one_mode_constant(double theta) {
    if (theta == 0.0) return 1.0;
    return std::pow(theta / 2.718281828459045235360287471353, theta);
}

SemigroupHandle scalar_semigroup(double kappa) { return SemigroupHandle(1, 0, kappa); }

double sobolev_norm(const SpectralField& u, double gamma, double norm_mass) {
    int mc = u.mode_count();
    double s = 0.0;
    for (int m = 0; m < mc; ++m) {
        double w = std::pow(norm_mass + u.klen2(m), 2.0 * gamma);
        double a = 0.0;
        for (int c = 0; c < u.components(); ++c) a += std::norm(u.at(c, m));
        s += w * a;
    }
    return std::sqrt(s);
}

TransformPlan::TransformPlan(int dim, int cutoff, int phys_per_axis)
    : dim_(dim), cutoff_(cutoff), phys_(phys_per_axis) {
    if (phys_ < 2 * cutoff + 1)
        throw ConfigError("physical grid too small for cutoff (aliasing): need >= 2K+1 points");
    int per = 2 * cutoff + 1;
    fwd_t_.resize(static_cast<std::size_t>(per) * phys_);
    bwd_.resize(static_cast<std::size_t>(per) * phys_);
    for (int ki = 0; ki < per; ++ki) {
        int k = ki - cutoff;
        for (int j = 0; j < phys_; ++j) {
            double ang = 6.283185307179586476925286766559 * k * j / phys_;
            // bwd_ laid out (src=mode ki, dst=point j); fwd_t_ (src=point j, dst=mode ki)
            bwd_[static_cast<std::size_t>(ki) * phys_ + j] = Complex(std::cos(ang), std::sin(ang));
            fwd_t_[static_cast<std::size_t>(j) * per + ki] = Complex(std::cos(ang), -std::sin(ang));
        }
    }
}

namespace {

// Transform one tensor axis (axis 0 fastest, components slowest) from size
// `from` to size `to` via the (from x to) table entry (src, dst).
std::vector<Complex> axis_transform(const std::vector<Complex>& in, int comps,
                                    const int* shape, int dim, int axis, int to,
                                    const Complex* table, double scale) {
    int from = shape[axis];
    std::size_t inner = 1, outer = 1;
    for (int b = 0; b < axis; ++b) inner *= shape[b];
    for (int b = axis + 1; b < dim; ++b) outer *= shape[b];
    std::vector<Complex> out(static_cast<std::size_t>(comps) * outer * to * inner,
                             Complex(0.0, 0.0));
    for (std::size_t co = 0; co < static_cast<std::size_t>(comps) * outer; ++co)
        for (int s = 0; s < from; ++s) {
            const Complex* src = &in[(co * from + s) * inner];
            for (int d = 0; d < to; ++d) {
                Complex w = table[static_cast<std::size_t>(s) * to + d] * scale;
                Complex* dst = &out[(co * to + d) * inner];
                for (std::size_t i = 0; i < inner; ++i) dst[i] += w * src[i];
            }
        }
    return out;
}

}  // namespace

std::vector<double> TransformPlan::synthesize(const SpectralField& u) const {
    if (u.dim() != dim_ || u.cutoff() != cutoff_)
        throw ConfigError("field truncation does not match transform plan");
    int per = 2 * cutoff_ + 1;
    int comps = u.components();
    std::vector<Complex> cur(u.data());
    int shape[3] = {per, per, per};
    for (int a = 0; a < dim_; ++a) {
        cur = axis_transform(cur, comps, shape, dim_, a, phys_, bwd_.data(), 1.0);
        shape[a] = phys_;
    }
    std::vector<double> out(cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i) out[i] = cur[i].real();
    return out;
}

SpectralField TransformPlan::analyze(const std::vector<double>& samples, int components) const {
    std::size_t expect = static_cast<std::size_t>(components) * phys_count();
    if (samples.size() != expect) throw ConfigError("sample count does not match transform plan");
    int per = 2 * cutoff_ + 1;
    std::vector<Complex> cur(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) cur[i] = Complex(samples[i], 0.0);
    int shape[3] = {phys_, phys_, phys_};
    double inv = 1.0 / phys_;
    for (int a = 0; a < dim_; ++a) {
        // fwd_ is laid out (mode, point); axis_transform wants (src=point, dst=mode)
        cur = axis_transform(cur, components, shape, dim_, a, per, fwd_t_.data(), inv);
        shape[a] = per;
    }
    SpectralField out(dim_, components, cutoff_);
    out.data() = std::move(cur);
    out.symmetrize();
    return out;
}

SpectralField gradient_axis(const SpectralField& u, int axis) {
    if (axis < 0 || axis >= u.dim()) throw ConfigError("gradient axis out of range");
    SpectralField out = u;
    int mc = u.mode_count();
    int k[3] = {0, 0, 0};
    for (int m = 0; m < mc; ++m) {
        u.wavevector(m, k);
        Complex ik(0.0, static_cast<double>(k[axis]));
        for (int c = 0; c < u.components(); ++c) out.at(c, m) = ik * u.at(c, m);
    }
    return out;
}

}  // namespace yspde
