// mlnheat: pseudo-spectral solver and verification laboratory for the heat
// equation with mixed local-nonlocal diffusion and rough coefficients.
//
// Exit codes: 0 success, 1 usage, 2 invalid configuration or i/o,
// 3 solver failure, 4 property-suite failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mlnheat/command.hpp"
#include "mlnheat/kernels/dispatch.hpp"

namespace {

int run(mlnheat::Command command, const std::string& config_path, const std::string& output_dir,
        int threads, long long seed) {
    using namespace mlnheat;

    ExperimentConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) {
            std::cerr << "cannot read config file: " << config_path << "\n";
            return 2;
        }
        std::ostringstream text;
        text << in.rdbuf();
        const ParseOutcome parsed = parse_config(text.str());
        if (!parsed.config.has_value()) {
            std::cerr << "invalid configuration (" << parsed.issues.size() << " problem"
                      << (parsed.issues.size() == 1 ? "" : "s") << "):\n";
            for (const auto& i : parsed.issues)
                std::cerr << "  " << i.path << ": " << i.message << "\n";
            return 2;
        }
        cfg = *parsed.config;
    } else if (command != Command::check) {
        std::cerr << "--config is required for this subcommand\n";
        return 1;
    }
    cfg.command = command;
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    if (threads > 0) cfg.threads = threads;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);

    const CommandOutcome outcome = run_command(cfg);
    for (const auto& line : outcome.lines) std::cout << line << "\n";
    for (const auto& f : outcome.files) std::cout << "wrote " << cfg.output_dir << "/" << f << "\n";
    return outcome.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral laboratory for heat flow driven by a mixed "
                 "local-nonlocal operator with rough coefficients"};
    app.require_subcommand(1);

    std::string config_path, output_dir;
    int threads = 0;
    long long seed = -1;

    const std::pair<std::string, std::string> subs[] = {
        {"solve", "one regularised (or raw smooth-data) initial value solve"},
        {"net", "family of solves over a decreasing epsilon net with moderateness analysis"},
        {"uniqueness", "difference net under a negligible (or control) perturbation"},
        {"consistency", "convergence to the unmollified reference for regular data"},
        {"check", "property suite: spectral identities, coercivity, energy monotonicity"},
    };
    for (const auto& [name, desc] : subs) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", config_path, "path to the JSON experiment configuration");
        sub->add_option("--output", output_dir, "directory for report files (must exist)");
        sub->add_option("--threads", threads, "worker threads for per-epsilon runs");
        sub->add_option("--seed", seed, "seed for the seeded property checks");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const std::string sub_name = app.get_subcommands().front()->get_name();
    try {
        return run(mlnheat::command_from_name(sub_name), config_path, output_dir, threads, seed);
    } catch (const mlnheat::CgDivergence& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const mlnheat::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const mlnheat::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const mlnheat::NotRegularData& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const mlnheat::IoError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const mlnheat::PositivityViolation& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const mlnheat::UnresolvedKernel& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const mlnheat::KernelTooWide& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const mlnheat::Error& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }
}
