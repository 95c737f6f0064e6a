#pragma once

#include <string>
#include <vector>

#include "yspde/grid.hpp"
#include "yspde/paths.hpp"
#include "yspde/rng.hpp"

namespace yspde {

struct FbmOptions {
    int cholesky_cap = 4096;
    bool circulant = false;  // Davies-Harte mode for interval counts above the cap
};

/// Exact-in-distribution fBm sampler.  The default factorizes the grid
/// covariance R(s,t) = (s^2H + t^2H - |t-s|^2H)/2 once per (H, grid)
/// (Cholesky, retried with 1e-12*maxdiag jitter on breakdown); the
/// circulant mode embeds the increment covariance and needs a
/// power-of-two interval count.
class FbmSampler {
public:
    FbmSampler(double hurst, const Grid& grid, const FbmOptions& opt = {});
    ~FbmSampler();
    FbmSampler(FbmSampler&&) noexcept;
    FbmSampler& operator=(FbmSampler&&) noexcept;

    DriverPath sample(RngStream& rng, int dims = 1) const;
    double hurst() const { return hurst_; }
    bool circulant_mode() const { return circulant_; }

private:
    double hurst_;
    Grid grid_;
    bool circulant_;
    struct Impl;
    Impl* impl_;
};

DriverPath sample_fbm(double hurst, const Grid& grid, RngStream& rng, int dims = 1,
                      const FbmOptions& opt = {});

/// Standard Brownian motion: W_0 = 0, independent N(0, dt I) increments.
DriverPath sample_bm(const Grid& grid, RngStream& rng, int dims = 1);

/// Test drivers: eta_t = c t ("linear", params {c}), c sin(omega t)
/// ("sine", params {c, omega}) or c t^a ("power", params {c, a} with
/// a in (1/2, 1]).
DriverPath deterministic_driver(const std::string& formula_id,
                                const std::vector<double>& params, const Grid& grid);

}  // namespace yspde
