#pragma once

#include <functional>
#include <string>
#include <vector>

#include "yspde/grid.hpp"
#include "yspde/spectral.hpp"

namespace yspde {

/// Sampled R^e-valued driving path on a grid; values node-major
/// ((N+1) x dims).  alpha_nominal records the declared Hoelder exponent,
/// it is metadata and never asserted.
struct DriverPath {
    Grid grid;
    int dims = 1;
    std::vector<double> values;
    double alpha_nominal = 0.5;
    std::string kind = "deterministic";

    DriverPath() = default;
    DriverPath(const Grid& g, int e)
        : grid(g), dims(e), values(static_cast<std::size_t>(g.nodes()) * e, 0.0) {}

    double& at(int node, int d) { return values[static_cast<std::size_t>(node) * dims + d]; }
    double at(int node, int d) const { return values[static_cast<std::size_t>(node) * dims + d]; }

    void check_node(int node) const {
        if (node < 0 || node >= grid.nodes()) throw ConfigError("path node index out of range");
    }

    /// Restriction to a coarser dyadic level (point reuse, no interpolation).
    DriverPath restricted(const Grid& coarse) const;
};

/// Time-indexed spectral fields on a grid, one field per node.
struct FieldPath {
    Grid grid;
    std::vector<SpectralField> values;

    FieldPath() = default;
    FieldPath(const Grid& g, const SpectralField& shape)
        : grid(g), values(static_cast<std::size_t>(g.nodes()), shape) {}

    void check_node(int node) const {
        if (node < 0 || node >= static_cast<int>(values.size()))
            throw ConfigError("field path node index out of range");
    }

    FieldPath restricted(const Grid& coarse) const;
};

using DriverEnsemble = std::vector<DriverPath>;
using FieldEnsemble = std::vector<FieldPath>;

/// delta Y_{s,t} = Y_t - Y_s (componentwise for drivers).
std::vector<double> increment(const DriverPath& y, int s_idx, int t_idx);
SpectralField increment(const FieldPath& y, int s_idx, int t_idx);

/// delta-hat Y_{s,t} = Y_t - S_{t-s} Y_s.
SpectralField mild_increment(const FieldPath& y, const SemigroupHandle& sg, int s_idx, int t_idx);

/// Two-parameter array A_{s,t} with A_{t,t} = 0, evaluated through a
/// callback on grid index pairs.
struct TwoParamArray {
    Grid grid;
    std::function<SpectralField(int, int)> eval;
};

/// Mild coboundary delta-hat A_{s,r,t} = A_{s,t} - S_{t-r} A_{s,r} - A_{r,t}.
SpectralField delta3_defect(const TwoParamArray& a, const SemigroupHandle& sg,
                            int s_idx, int r_idx, int t_idx);

/// Whether pairwise estimators use delta or delta-hat increments.
enum class IncrementKind { Plain, Mild };

/// Options shared by the pairwise sup estimators.  window == 0 means the
/// exhaustive O(N^2) sup; window > 0 restricts to pairs with
/// t_idx - s_idx <= window (recorded by callers in output metadata).
struct PairSupOptions {
    int window = 0;
    IncrementKind kind = IncrementKind::Plain;
    const SemigroupHandle* semigroup = nullptr;  // required for Mild
};

/// |delta Y|_beta = sup_{s<t} |Y_t - Y_s| / (t-s)^beta over grid pairs.
double holder_seminorm(const DriverPath& y, double beta, const PairSupOptions& opt = {});
double holder_seminorm(const FieldPath& y, double beta, double gamma, double norm_mass = 1.0,
                       const PairSupOptions& opt = {});

/// sup_t |Y_t| (pathwise sup of node norms).
double sup_norm(const FieldPath& y, double gamma, double norm_mass = 1.0);

/// E^beta L_m order: per pair the empirical L^m average over members,
/// then sup over pairs.  ||A||_{beta,m,gamma}.
double mixed_norm_Lm_of_holder(const FieldEnsemble& ens, double beta, double gamma, double m,
                               double norm_mass = 1.0, const PairSupOptions& opt = {});
double mixed_norm_Lm_of_holder(const DriverEnsemble& ens, double beta, double m,
                               const PairSupOptions& opt = {});

/// L_m E^beta order: pathwise sup over pairs first, then empirical L^m
/// over members.  ||A||_{m,beta,gamma}.
double mixed_norm_holder_of_Lm(const FieldEnsemble& ens, double beta, double gamma, double m,
                               double norm_mass = 1.0, const PairSupOptions& opt = {});
double mixed_norm_holder_of_Lm(const DriverEnsemble& ens, double beta, double m,
                               const PairSupOptions& opt = {});

/// sup_t ( mean_i |Y_t|^m )^{1/m}  --  ||Y||_{0,m,gamma}.
double mixed_sup_Lm(const FieldEnsemble& ens, double gamma, double m, double norm_mass = 1.0);
/// ( mean_i (sup_t |Y_t|)^m )^{1/m}  --  ||Y||_{m,0,gamma}.
double mixed_Lm_sup(const FieldEnsemble& ens, double gamma, double m, double norm_mass = 1.0);

/// ||delta Y||_{beta,m,gamma-beta} + ||Y||_{0,m,gamma}: the solution-space
/// norm estimate in the E^beta L_m order.
double ebeta_lm_norm(const FieldEnsemble& ens, double beta, double gamma, double m,
                     double norm_mass = 1.0, const PairSupOptions& opt = {});
/// Same quantities in the L_m E^beta order.
double lm_ebeta_norm(const FieldEnsemble& ens, double beta, double gamma, double m,
                     double norm_mass = 1.0, const PairSupOptions& opt = {});

}  // namespace yspde
