#pragma once
// Experiment drivers behind the CLI subcommands, plus the property suite
// behind `check`.

#include "mlnheat/config.hpp"
#include "mlnheat/reports.hpp"

namespace mlnheat {

// Deterministic given the seed: spectral identities, operator-form duality,
// coercivity, per-step contraction, energy monotonicity, a priori bound.
std::vector<PropertyResult> run_property_suite(std::uint64_t seed);

struct CommandOutcome {
    int exit_code = 0;
    std::vector<std::string> files; // report files written
    std::vector<std::string> lines; // human-readable summary
};

// Executes cfg.command and emits its reports into cfg.output_dir.
// Throws: ValidationError and relatives for inadmissible inputs,
// CgDivergence for solver failures, IoError for emission problems.
CommandOutcome run_command(const ExperimentConfig& cfg);

} // namespace mlnheat
