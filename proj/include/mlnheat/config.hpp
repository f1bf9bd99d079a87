#pragma once
// Experiment configuration: a JSON document (sections with scalar and array
// values; the exact grammar is documented in the README). Parsing validates
// every cross-field precondition reachable from the file and reports all
// failures at once, each with the path of the offending field.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlnheat/nets.hpp"

namespace mlnheat {

enum class Command { solve, net, uniqueness, consistency, check };

Command command_from_name(const std::string& name);
std::string command_name(Command c);

struct ExperimentConfig {
    Command command = Command::check;
    GridSpec grid{1, 64, 6.283185307179586};
    double s = 0.5;
    CoefficientSpec coeff_a, coeff_b, coeff_c;
    DistributionSpec u0_spec;
    MollifierSpec mollifier;
    RunConfig run;
    std::vector<double> epsilons;
    std::optional<double> epsilon; // solve: mollify at this scale; absent = raw data
    Perturbation perturbation = Perturbation::exp_small;
    std::string output_dir = ".";
    std::uint64_t seed = 0;
    int threads = 1;
    // When the file omits "epsilons", the default geometric grid
    // {2^-3, ..., 2^-8} is used with unresolvable entries clamped away;
    // this counts the clamped ones so drivers can report the clamp.
    int clamped_default_epsilons = 0;

    NetConfig net_config() const;
};

struct ParseOutcome {
    std::optional<ExperimentConfig> config; // set iff issues is empty
    std::vector<ValidationIssue> issues;
};

// Throws ParseError on malformed JSON (with location); collects every
// validation problem instead of stopping at the first.
ParseOutcome parse_config(const std::string& text);

// Canonical text: emit_config(parse_config(t).config) parses to an equal
// config, and equal configs emit byte-identical text.
std::string emit_config(const ExperimentConfig& cfg);

// FNV-1a 64-bit hash of the canonical text (16 hex digits): the run id.
std::string config_hash(const ExperimentConfig& cfg);

} // namespace mlnheat
