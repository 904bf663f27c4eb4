// Command-line front end: solve | contraction | reduction | sweep | kinetic
// | validate, each driven by a config file with per-flag overrides.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sscl/driver.hpp"
#include "sscl/sscl.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Finite-volume Monte Carlo solver and verification harness for "
                 "stochastic scalar conservation laws"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> workers_override;
    std::optional<std::string> out_override;
    std::string suite_arg;

    const std::vector<std::string> subnames{"solve",  "contraction", "reduction",
                                            "sweep",  "kinetic",     "validate"};
    for (const auto& name : subnames) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "config file (key-value sections or JSON)");
        sub->add_option("--seed", seed_override, "master seed override");
        sub->add_option("--workers", workers_override, "worker thread count override");
        sub->add_option("--out", out_override, "output directory override");
        if (name == "validate")
            sub->add_option("suite", suite_arg,
                            "riemann_shock | riemann_rarefaction | boundary_layer");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string sub = app.get_subcommands().front()->get_name();

    try {
        sscl::RunConfig cfg;
        if (!config_path.empty()) cfg = sscl::load_config(config_path);
        cfg.experiment = sscl::parse_experiment(sub);
        if (seed_override) cfg.master_seed = *seed_override;
        if (out_override) cfg.output_dir = *out_override;
        if (workers_override) {
            cfg.workers = *workers_override;
        } else if (const char* env = std::getenv("SKL_WORKERS")) {
            cfg.workers = std::max(1, std::atoi(env));
        }
        if (!suite_arg.empty()) {
            sscl::parse_validation_suite(suite_arg);
            cfg.suite = suite_arg;
        }
        return sscl::execute(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
