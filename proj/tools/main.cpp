// debatelab CLI: simulate debates, verify the analytical results, train the
// tabular self-debate policy, and evaluate closed-form bounds.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "debatelab/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"belief-dynamics debate simulator and self-debate trainer"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string rule;
    std::vector<std::string> suites;
    int scale = 100;
    int threads = 0;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* config_opt = cmd->add_option("--config", config_path, "config document (JSON)");
        if (needs_config) {
            config_opt->required();
        }
        cmd->add_option("--seed", seed, "master seed (overrides the config)")
            ->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--out", out_path, "output path");
        cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "run replicated debates");
    add_common(simulate, true);
    simulate->add_option("--format", format, "csv (per-round summary) or jsonl (trajectories)")
        ->check(CLI::IsMember({"csv", "jsonl"}));

    CLI::App* verify = app.add_subcommand("verify", "run the analytical verification suites");
    add_common(verify, false);
    verify->add_option("--suite", suites, "suite selector (repeatable; default: all)");
    verify->add_option("--scale", scale, "replicate scale percent (100 = pinned sizes)")
        ->check(CLI::Range(1, 100));

    CLI::App* train = app.add_subcommand("train", "train the tabular self-debate policy");
    add_common(train, true);
    train->add_option("--rule", rule, "pairing rule override: random | frequency")
        ->check(CLI::IsMember({"random", "frequency"}));

    CLI::App* bounds = app.add_subcommand("bounds", "evaluate closed-form bounds");
    add_common(bounds, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // bad usage is a config error
    }

    debatelab::CliOptions options;
    if (seed_set) {
        options.seed = seed;
    }
    options.out_path = out_path;
    options.format = format;
    options.verify_scale_percent = scale;
    options.threads = threads;
    if (!rule.empty()) {
        options.rule = (rule == "random") ? debatelab::PairingRule::Random
                                          : debatelab::PairingRule::Frequency;
    }

    try {
        if (simulate->parsed()) {
            return debatelab::cmd_simulate(debatelab::load_config_file(config_path), options);
        }
        if (verify->parsed()) {
            return debatelab::cmd_verify(suites, options);
        }
        if (train->parsed()) {
            return debatelab::cmd_train(debatelab::load_config_file(config_path), options);
        }
        if (bounds->parsed()) {
            return debatelab::cmd_bounds(debatelab::load_config_file(config_path), options);
        }
    } catch (const debatelab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
