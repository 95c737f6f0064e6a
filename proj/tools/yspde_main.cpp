#include <CLI11.hpp>

#include <iostream>

#include "yspde/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"yspde: Young-drift stochastic heat equation laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
    int grid_level = -1;
    int threads = -1;
    std::string y_csv, eta_csv;

    for (const char* name : {"gen-driver", "integrate", "solve", "experiment", "check"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "run configuration file");
        sub->add_option("--seed", seed, "override the config seed")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_option("--out", out_dir, "output directory override");
        sub->add_option("--grid-level", grid_level, "working grid level override");
        sub->add_option("--threads", threads, "worker threads (0 = auto)");
        if (std::string(name) == "integrate") {
            sub->add_option("--y", y_csv, "integrand path CSV (default: Y = eta)");
            sub->add_option("--eta", eta_csv, "driver path CSV (default: generated)");
        }
    }

    CLI11_PARSE(app, argc, argv);

    try {
        yspde::RunConfig cfg =
            config_path.empty() ? yspde::RunConfig{} : yspde::load_config(config_path);
        yspde::CliOverrides ov;
        if (seed_set) ov.seed = seed;
        if (!out_dir.empty()) ov.out_dir = out_dir;
        if (grid_level >= 0) ov.grid_level = grid_level;
        if (threads >= 0) ov.threads = threads;
        if (!y_csv.empty()) ov.y_csv = y_csv;
        if (!eta_csv.empty()) ov.eta_csv = eta_csv;
        return yspde::dispatch(app.get_subcommands().front()->get_name(), cfg, ov);
    } catch (const yspde::Error& e) {
        const char* cat = e.category() == yspde::ErrorCategory::Config     ? "config"
                          : e.category() == yspde::ErrorCategory::Numerical ? "numerical"
                                                                            : "io";
        std::cerr << "error[" << cat << "]: " << e.what() << "\n";
        return static_cast<int>(e.category());
    }
}
