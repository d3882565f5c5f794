#include <iostream>

#include <CLI11.hpp>

#include "fdsic/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Multi-tap analog self-interference cancellation: theory, Monte Carlo and link-level runs"};
    std::string subcommand;
    fdsic::RunManifest m;
    std::uint64_t seed = 0;
    std::int64_t trials = 0;
    app.add_option("subcommand", subcommand, "theory | montecarlo | link | sweep | validate")->required();
    app.add_option("--config", m.config_path, "Configuration file (INI); built-in link defaults when omitted");
    app.add_option("--out", m.output_path, "CSV output path, '-' for stdout")->capture_default_str();
    auto* seed_opt = app.add_option("--seed", seed, "Base seed for per-trial random streams");
    auto* trials_opt = app.add_option("--trials", trials, "Monte Carlo trials per grid point");
    app.footer("Environment: FDSIC_THREADS sets the number of worker threads.");
    CLI11_PARSE(app, argc, argv);
    try {
        m.subcommand = fdsic::parse_subcommand(subcommand);
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    if (*seed_opt) m.base_seed = seed;
    if (*trials_opt) m.trials = trials;
    return fdsic::run(m, std::cerr);
}
