#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "yspde/drivers.hpp"
#include "yspde/paths.hpp"
#include "yspde/sewing.hpp"
#include "yspde/spectral.hpp"

namespace yspde {

/// Coefficient descriptor: an id plus numeric parameters; realized on the
/// torus by realize_problem.
struct CoefficientDescriptor {
    std::string id = "none";
    std::vector<double> params;
};

/// The concrete problem family on T^n: heat generator with mass shift,
/// drift G1(x) * sum_a d_a u + G0(x) u + g against eta, deterministic f
/// and Ito h.  Exponent fields mirror the solution-space bookkeeping.
struct ProblemSpec {
    double T = 1.0;
    int n = 1, l = 1, e = 1, d = 1, K = 8;
    double alpha = 0.75;
    double beta = 0.3;
    double gamma = 0.0;
    double lambda = 0.5;
    double mu = 0.0;
    double nu = 0.5;
    double m = 4.0;
    double mass_shift = 0.0;
    bool continuous_mode = false;
    CoefficientDescriptor xi, f, G1, G0, g, h;

    /// Throws ConfigError quoting the violated inequality.
    void validate() const;
};

/// Problem realized at a fixed seed: semigroup, transform plan, initial
/// field and multiplier fields sampled/evaluated once.
class ProblemRealization {
public:
    ProblemRealization(const ProblemSpec& spec, std::uint64_t seed);

    const ProblemSpec& spec() const { return spec_; }
    const SemigroupHandle& semigroup() const { return sg_; }
    const TransformPlan& plan() const { return plan_; }
    const SpectralField& initial() const { return xi_; }
    void set_initial(const SpectralField& xi) {
        sg_.require_match(xi);
        xi_ = xi;
    }
    const SpectralField& g_value() const { return g_field_; }

    /// Y = G1 * sum_a d_a u + G0 u + g, assembled pseudo-spectrally;
    /// components = l*e.
    SpectralField drift(const SpectralField& u) const;
    bool has_drift() const { return !g1_phys_.empty() || !g0_phys_.empty() || has_g_; }

    /// f(t, u, grad u) evaluated pointwise; components = l.
    SpectralField nonlinearity(double t, const SpectralField& u) const;
    bool has_f() const { return spec_.f.id != "none"; }

    /// h(t, u); components = l*d.
    SpectralField noise_coefficient(double t, const SpectralField& u) const;
    bool has_h() const { return spec_.h.id != "none"; }

    SpectralField state_shape() const { return SpectralField(spec_.n, spec_.l, spec_.K); }

private:
    ProblemSpec spec_;
    SemigroupHandle sg_;
    TransformPlan plan_;
    SpectralField xi_;
    std::vector<double> g1_phys_, g0_phys_;  // scalar multiplier fields on the plan grid
    SpectralField g_field_;
    SpectralField h_field_;  // the u-independent "field" noise coefficient
    bool has_g_ = false;
};

/// Spatial field built from a descriptor (initial data, g blocks, ...).
SpectralField realize_field(const CoefficientDescriptor& d, int dim, int components,
                            int cutoff, std::uint64_t seed);

/// ETD weights dt*phi1(q dt), phi1(x) = (1-e^-x)/x, phi1(0) = 1; exact
/// per mode for piecewise-constant integrands.
std::vector<double> etd_weights(const SemigroupHandle& sg, double dt);

/// Ito step weights w(q dt), w(x) = sqrt((1-e^-2x)/(2x)), w(0) = 1; makes
/// the per-mode variance of the stochastic convolution exact for constant h.
std::vector<double> ito_weights(const SemigroupHandle& sg, double dt);

/// F = int_0^. S_{.-r} f(r, u_r) dr by per-mode exponential time stepping.
FieldPath deterministic_convolution(const ProblemRealization& prob, const FieldPath& u,
                                    const Grid& grid);

/// H = int_0^. S_{.-r} h(r, u_r) dW_r, left-point and adapted: only
/// u_{t_k} enters the k-th increment.
FieldPath stochastic_convolution(const ProblemRealization& prob, const FieldPath& u,
                                 const DriverPath& w, const Grid& grid);

/// One Picard application Phi(u) = S xi + F(u) + Z(u) + H(u) over the
/// whole grid.
FieldPath picard_map(const ProblemRealization& prob, const FieldPath& u,
                     const DriverPath& eta, const DriverPath& w, const Grid& grid);

struct WindowStats {
    int start_node = 0;
    int end_node = 0;
    double window_len = 0.0;
    std::vector<double> residuals;
    double max_ratio = 0.0;  // max of residual_{i+1}/residual_i over i >= 1
};

struct Trajectory {
    FieldPath u;
    std::vector<WindowStats> windows;
    int halvings = 0;
    double final_window_len = 0.0;
};

struct SolveOptions {
    double window_len = 0.0;  // 0 selects T/8
    double picard_tol = 1e-10;
    int max_iter = 50;
    int max_halvings = 4;
    double contraction_cap = 0.9;
    bool zero_initial_guess = false;  // uniqueness surrogate: start windows from 0
};

/// Windowed Picard iteration to the discrete fixed point; windows chain
/// left to right, each started from the previous terminal value with a
/// constant-in-time initial guess.  Windows that fail to contract are
/// halved (up to max_halvings) before a window-divergence error.
Trajectory solve_mild(const ProblemRealization& prob, const DriverPath& eta,
                      const DriverPath& w, const Grid& grid, const SolveOptions& opt = {});

/// Closed-form single-mode trajectories used as independent oracles.
std::vector<double> oracle_young_linear(double kappa, double xi, const DriverPath& eta);
std::vector<double> oracle_deterministic_linear(double kappa, double rate, double xi,
                                                const Grid& grid);
struct OuCurves {
    std::vector<double> mean;
    std::vector<double> variance;
};
OuCurves oracle_ou(double q, double sigma, double xi, const Grid& grid);

}  // namespace yspde
