#pragma once

#include <optional>
#include <string>

#include "yspde/config.hpp"

namespace yspde {

struct CliOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> grid_level;
    std::optional<int> threads;
    std::optional<std::string> y_csv;    // integrate: integrand path
    std::optional<std::string> eta_csv;  // integrate: driver path
};

/// Runs one subcommand (gen-driver, integrate, solve, experiment, check)
/// against a parsed config.  Returns the process exit status: 0 ok,
/// 2 config error, 3 numerical divergence / failed checks, 4 io.
int dispatch(const std::string& subcommand, RunConfig cfg, const CliOverrides& overrides);

/// The `check` invariant suite; prints one PASS/FAIL line per invariant
/// to the given stream and returns true when everything passed.
bool run_check_suite(const RunConfig& cfg, std::ostream& os);

}  // namespace yspde
