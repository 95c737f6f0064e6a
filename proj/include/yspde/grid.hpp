#pragma once

#include <string>

#include "yspde/errors.hpp"

namespace yspde {

/// Uniform partition of [0, T] with dyadic refinement: N = N0 * 2^level
/// intervals. Nodes of a coarser level are a subset of every finer level,
/// so refined grids reuse coarse points exactly.
struct Grid {
    double horizon = 1.0;
    int base_intervals = 1;
    int level = 0;

    Grid() = default;
    Grid(double T, int n0, int lev) : horizon(T), base_intervals(n0), level(lev) {
        if (T <= 0.0) throw ConfigError("grid horizon must be positive");
        if (n0 < 1) throw ConfigError("grid base interval count must be >= 1");
        if (lev < 0 || lev > 30) throw ConfigError("grid level must lie in [0, 30]");
    }

    int intervals() const { return base_intervals << level; }
    int nodes() const { return intervals() + 1; }
    double dt() const { return horizon / intervals(); }
    double node(int k) const { return horizon * static_cast<double>(k) / intervals(); }

    Grid refined(int extra) const { return Grid(horizon, base_intervals, level + extra); }

    /// Index stride from this grid into a finer grid with the same horizon
    /// and base interval count.
    int stride_to(const Grid& finer) const {
        if (finer.horizon != horizon || finer.base_intervals != base_intervals ||
            finer.level < level)
            throw ConfigError("grids are not dyadically nested");
        return 1 << (finer.level - level);
    }

    bool operator==(const Grid& o) const {
        return horizon == o.horizon && base_intervals == o.base_intervals && level == o.level;
    }
};

}  // namespace yspde
