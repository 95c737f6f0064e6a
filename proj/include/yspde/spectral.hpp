#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "yspde/errors.hpp"

namespace yspde {

using Complex = std::complex<double>;

/// Truncated Fourier representation of an R^c-valued field on the torus
/// T^n, modes k in {-K..K}^n. Conjugate symmetry (u_{-k} = conj(u_k) per
/// component) is maintained by construction for real physical fields.
///
/// A field valued in H_gamma^e (one field per driver component) is stored
/// with components = l*e, block j holding components [j*l, (j+1)*l).
class SpectralField {
public:
    SpectralField() = default;
    SpectralField(int dim, int components, int cutoff)
        : dim_(dim), components_(components), cutoff_(cutoff) {
        if (dim < 1 || dim > 3) throw ConfigError("torus dimension must be 1, 2 or 3");
        if (components < 1) throw ConfigError("field needs >= 1 components");
        if (cutoff < 0) throw ConfigError("spectral cutoff must be >= 0");
        coeffs_.assign(static_cast<std::size_t>(components) * mode_count(), Complex(0.0, 0.0));
    }

    int dim() const { return dim_; }
    int components() const { return components_; }
    int cutoff() const { return cutoff_; }
    int modes_per_axis() const { return 2 * cutoff_ + 1; }
    int mode_count() const {
        int m = 1;
        for (int a = 0; a < dim_; ++a) m *= modes_per_axis();
        return m;
    }

    Complex& at(int comp, int mode) { return coeffs_[idx(comp, mode)]; }
    const Complex& at(int comp, int mode) const { return coeffs_[idx(comp, mode)]; }

    std::vector<Complex>& data() { return coeffs_; }
    const std::vector<Complex>& data() const { return coeffs_; }

    /// Wavevector of a linear mode index, axis by axis in {-K..K}.
    void wavevector(int mode, int* k) const {
        int per = modes_per_axis();
        for (int a = 0; a < dim_; ++a) {
            k[a] = mode % per - cutoff_;
            mode /= per;
        }
    }

    /// |k|^2 of a linear mode index.
    double klen2(int mode) const {
        int k[3] = {0, 0, 0};
        wavevector(mode, k);
        double s = 0.0;
        for (int a = 0; a < dim_; ++a) s += static_cast<double>(k[a]) * k[a];
        return s;
    }

    int mode_index(const int* k) const {
        int per = modes_per_axis();
        int idx = 0, strd = 1;
        for (int a = 0; a < dim_; ++a) {
            if (k[a] < -cutoff_ || k[a] > cutoff_) throw ConfigError("mode outside truncation");
            idx += (k[a] + cutoff_) * strd;
            strd *= per;
        }
        return idx;
    }

    bool same_shape(const SpectralField& o) const {
        return dim_ == o.dim_ && components_ == o.components_ && cutoff_ == o.cutoff_;
    }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double c);
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double c, SpectralField a) { return a *= c; }

    /// Extract one driver block [j*l, (j+1)*l) as an l-component field.
    SpectralField block(int j, int block_size) const;

    /// Contract an l*e-component field with a weight per driver block:
    /// result = sum_j w[j] * block_j.  Realizes Y * d_eta for Y in H_gamma^e.
    SpectralField contract(const double* weights, int e) const;

    /// Enforce u_{-k} = conj(u_k); call after constructions that may break
    /// symmetry through rounding.
    void symmetrize();

private:
    std::size_t idx(int comp, int mode) const {
        return static_cast<std::size_t>(comp) * mode_count() + mode;
    }

    int dim_ = 1;
    int components_ = 1;
    int cutoff_ = 0;
    std::vector<Complex> coeffs_;
};

/// Scalar value as the single-mode field on T^1 with K = 0.
SpectralField scalar_field(double x);

/// The generator multipliers q(k) = |k|^2 + m0 of the shifted heat
/// semigroup on T^n, with the norm weight mass m1 = max(m0, 1) used by
/// |.|_gamma so the norm stays nondegenerate at k = 0.
class SemigroupHandle {
public:
    SemigroupHandle() = default;
    SemigroupHandle(int dim, int cutoff, double mass_shift);

    int dim() const { return dim_; }
    int cutoff() const { return cutoff_; }
    double mass_shift() const { return mass_shift_; }
    double norm_mass() const { return norm_mass_; }
    int mode_count() const { return static_cast<int>(q_.size()); }
    const std::vector<double>& multipliers() const { return q_; }
    const std::vector<double>& klen2() const { return klen2_; }

    bool matches(const SpectralField& u) const {
        return u.dim() == dim_ && u.cutoff() == cutoff_;
    }
    void require_match(const SpectralField& u) const {
        if (!matches(u)) throw ConfigError("field truncation does not match semigroup handle");
    }

    /// Per-mode decay factors e^{-t q(k)}; reusable across fields with the
    /// same step.
    std::vector<double> propagator(double t) const;

    SpectralField apply(double t, const SpectralField& u) const;
    void apply_inplace(const std::vector<double>& prop, SpectralField& u) const;

    /// (m1 + |k|^2)^gamma weights of the H_gamma norm.
    std::vector<double> norm_weights(double gamma) const;

    double sobolev_norm(const SpectralField& u, double gamma) const;

    /// Generator mode multiplies by q(k)^gamma, norm mode by
    /// (m1 + |k|^2)^gamma.  Generator mode with q(0) = 0 and gamma < 0 is
    /// singular.
    SpectralField frac_power(double gamma, const SpectralField& u, bool norm_mode = false) const;

    /// Empirical prefactor of the smoothing estimate: max over basis modes
    /// and t in t_list of t^(g2-g1) |S_t e_k|_{g2} / |e_k|_{g1}.
    double smoothing_constant_probe(double gamma1, double gamma2,
                                    const std::vector<double>& t_list) const;

    /// One-mode calculus bound for the probe: max_t t^theta q^theta e^{-tq}
    /// over q > 0 equals (theta/e)^theta.
    static double one_mode_constant(double theta);

private:
    int dim_ = 1;
    int cutoff_ = 0;
    double mass_shift_ = 0.0;
    double norm_mass_ = 1.0;
    std::vector<double> q_;
    std::vector<double> klen2_;
};

/// Scalar ODE as a one-mode semigroup: q = kappa on T^1 with K = 0.
SemigroupHandle scalar_semigroup(double kappa);

/// |u|_gamma with explicit norm mass (free-function form used where no
/// semigroup handle is in play; mass defaults to 1).
double sobolev_norm(const SpectralField& u, double gamma, double norm_mass = 1.0);

/// Direct truncated DFT pair between spectral coefficients and samples on
/// a uniform physical grid of phys_per_axis points per axis.  Exact on
/// band-limited fields when phys_per_axis >= 2K+1; products evaluated on a
/// grid of >= 3K+1 points per axis stay alias-free after truncation back
/// to K (the 2/3-rule).
class TransformPlan {
public:
    TransformPlan(int dim, int cutoff, int phys_per_axis);

    int dim() const { return dim_; }
    int cutoff() const { return cutoff_; }
    int phys_per_axis() const { return phys_; }
    int phys_count() const {
        int m = 1;
        for (int a = 0; a < dim_; ++a) m *= phys_;
        return m;
    }
    /// Physical node coordinate along one axis, x_j = 2 pi j / M.
    double coord(int j) const { return 6.283185307179586476925286766559 * j / phys_; }

    /// Field -> samples, component-major (comp * phys_count + point).
    std::vector<double> synthesize(const SpectralField& u) const;

    /// Samples -> field of the given component count.
    SpectralField analyze(const std::vector<double>& samples, int components) const;

    /// Smallest alias-free grid for quadratic products at cutoff K.
    static int dealiased_size(int cutoff) { return 3 * cutoff + 1; }

private:
    int dim_;
    int cutoff_;
    int phys_;
    std::vector<Complex> fwd_t_;  // e^{-i k x_j}, (point, mode) layout, one axis
    std::vector<Complex> bwd_;    // e^{+i k x_j}, (mode, point) layout
};

/// Spectral derivative along one axis: coefficient multiplier i k_axis.
SpectralField gradient_axis(const SpectralField& u, int axis);

}  // namespace yspde
