#pragma once

#include <functional>
#include <vector>

#include "yspde/paths.hpp"
#include "yspde/spectral.hpp"

namespace yspde {

/// Two-parameter germ A_{s,t} evaluated on finest-grid index pairs, with
/// A_{t,t} = 0 and a defect that factors through the semigroup,
/// delta-hat A_{s,r,t} = S_{t-r} Lambda_{s,r,t}.  The declared exponents
/// (alpha for |A|, 1+epsilon for Lambda) only enter reports.
struct GermEvaluator {
    std::function<SpectralField(int, int)> eval;
    double alpha = 0.5;
    double epsilon = 0.0;
};

struct DefectLevel {
    int level = 0;          // refinement depth relative to the working grid
    double max_defect = 0.0;  // sup-node |Z^(l) - Z^(l-1)|_gamma
    double ratio_to_prev = 0.0;
};

struct SewingResult {
    FieldPath z;         // deepest dyadic partial sums, on the working grid
    FieldPath z_finest;  // left-point recursion on the finest grid (exactly additive)
    std::vector<DefectLevel> levels;
    int levels_used = 0;
    bool converged = false;
};

struct SewingDivergence : NumericalError {
    SewingDivergence(const std::string& msg, std::vector<DefectLevel> report)
        : NumericalError(msg), report(std::move(report)) {}
    std::vector<DefectLevel> report;
};

/// Left-point semigroup-twisted recursion over a sub-sampling of the
/// finest grid: Z_{i+1} = S_delta Z_i + A(v_i, v_{i+1}).  stride = 1
/// walks the finest grid itself.
FieldPath twisted_recursion(const GermEvaluator& germ, const Grid& finest,
                            const SemigroupHandle& sg, int stride,
                            const SpectralField& shape);

/// Dyadic mild sewing: for each working node the partial sums over dyadic
/// refinements of [0, t], stopping when the successive-level sup
/// difference in |.|_gamma drops below tol or refine_levels is exhausted.
/// Non-decaying level differences raise SewingDivergence with the report
/// attached.
SewingResult mild_sewing(const GermEvaluator& germ, const Grid& working,
                         const SemigroupHandle& sg, int refine_levels, double tol,
                         double gamma, const SpectralField& shape);

/// Young convolution germ A_{s,t} = S_{t-s} Y_s delta-eta_{s,t} for an
/// H_gamma^e-valued Y (components = l*e).  Y and eta live on the finest
/// grid (working refined by refine_levels); the germ never interpolates.
GermEvaluator young_germ(const FieldPath& y, const DriverPath& eta,
                         const SemigroupHandle& sg, double alpha, double beta);

/// Z = int_0^. S_{.-r} Y_r d eta_r by dyadic sewing, plus the fast
/// recursion form at the finest level.
SewingResult young_convolution(const FieldPath& y, const DriverPath& eta,
                               const SemigroupHandle& sg, const Grid& working,
                               int refine_levels, double tol, double gamma,
                               double alpha, double beta);

/// Just the finest-level recursion (the solver's fast path).
FieldPath young_recursion(const FieldPath& y, const DriverPath& eta,
                          const SemigroupHandle& sg);

struct GermProbe {
    double constant_coarse = 0.0;  // measured K over wide random triples
    double constant_fine = 0.0;    // same, gaps shrunk fourfold
    bool best_effort = false;      // probe grew (or overflowed): no sewing bound
};

/// Probes the factorization delta-hat A_{s,r,t} = S_{t-r} Lambda_{s,r,t}
/// with |Lambda|_gamma <= K |t-s| |t-r|^eps on random triples.  At finite
/// truncation Lambda = S_{t-r}^{-1} delta-hat A always exists; the probe
/// measures K at two gap scales and downgrades the guarantee to
/// best-effort when the measured constant is not scale-stable.
GermProbe germ_defect_probe(const GermEvaluator& germ, const SemigroupHandle& sg,
                            const Grid& finest, double gamma, int trials,
                            std::uint64_t seed);

/// Measured prefactor of the sewing remainder: sup over pairs of
/// |delta-hat Z_{s,t} - A_{s,t}|_{gamma+theta} / |t-s|^{1+eps-theta}.
double remainder_prefactor(const FieldPath& z, const GermEvaluator& germ,
                           const SemigroupHandle& sg, double gamma, double theta,
                           double eps, int window = 0);

/// L^m-averaged variant over an ensemble of sewn paths sharing one grid.
double remainder_prefactor_lm(const std::vector<const FieldPath*>& zs,
                              const std::vector<const GermEvaluator*>& germs,
                              const SemigroupHandle& sg, double gamma, double theta,
                              double eps, double m, int window = 0);

struct ConvolutionBoundReport {
    double ratio_lm = 0.0;        // ||dhat Z||_{a-th,m,g+th} / (||Y||_{E^b L_m H_g} max|deta|_a)
    double ratio_pathwise = 0.0;  // max over members of the per-path ratio
    double max() const { return ratio_lm > ratio_pathwise ? ratio_lm : ratio_pathwise; }
};

/// Empirical prefactor of the convolution estimate on an ensemble.
ConvolutionBoundReport convolution_bound_probe(const FieldEnsemble& zs,
                                               const FieldEnsemble& ys,
                                               const DriverEnsemble& etas,
                                               const SemigroupHandle& sg, double alpha,
                                               double beta, double gamma, double theta,
                                               double m, int window = 0);

struct CompatibilityReport {
    double lm_residual = 0.0;        // last-level diff, L^m-averaged over members
    double pathwise_residual = 0.0;  // last-level diff, max over members
    double discrepancy() const {
        return lm_residual > pathwise_residual ? lm_residual : pathwise_residual;
    }
};

/// The stochastic-order and pathwise constructions are the same finite
/// grid algorithm per path; this runs the sewing per member and reports
/// both convergence residuals measured on the same data.
CompatibilityReport compatibility_check(const FieldEnsemble& ys, const DriverEnsemble& etas,
                                        const SemigroupHandle& sg, const Grid& working,
                                        int refine_levels, double tol, double gamma,
                                        double alpha, double beta, double m);

}  // namespace yspde
