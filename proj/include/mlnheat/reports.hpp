#pragma once
// Deterministic report emission: fixed column schemas, '.' decimal
// separator, '\n' line endings, 17 significant digits, file names derived
// from the config hash (no timestamps). Identical configs produce
// byte-identical files.

#include <string>
#include <vector>

#include "mlnheat/config.hpp"
#include "mlnheat/evolve.hpp"
#include "mlnheat/nets.hpp"

namespace mlnheat {

// Shortest-width fixed-precision rendering (printf %.17g equivalent),
// locale-independent.
std::string format_double(double v);

// CSV schemas (header line included, one record per line).
// time,l2_sq,grad_w_sq,frac_w_sq,mass_w_sq,total,ut_l2_sq,cg_iterations
std::string energy_trace_csv(const EnergyTrace& trace);
// t,v0,v1,...  one row per stored snapshot
std::string snapshots_csv(const SolveResult& run);
// epsilon,omega,sup_t_h1_sq,sup_t_hs_sq,C_eps,apriori_lhs_max,apriori_rhs,
// apriori_satisfied,cg_total_iters,failed
std::string net_csv(const NetReport& rep);
// epsilon,omega,diff_norm
std::string uniqueness_csv(const MollifierSpec& m, const UniquenessReport& rep);
// epsilon,omega,error_c_l2,error_l2_h1
std::string consistency_csv(const MollifierSpec& m, const ConsistencyReport& rep);

std::string net_json(const ExperimentConfig& cfg, const NetReport& rep);
std::string uniqueness_json(const ExperimentConfig& cfg, const UniquenessReport& rep);
std::string consistency_json(const ExperimentConfig& cfg, const ConsistencyReport& rep);
std::string solve_json(const ExperimentConfig& cfg, const SolveResult& run);

struct PropertyResult {
    std::string name;
    bool passed = false;
    std::string detail; // worst measured value, deterministic text
};
std::string check_json(const ExperimentConfig& cfg, const std::vector<PropertyResult>& props);

// Writes `content` to dir/name; the directory must already exist
// (IoError with the path otherwise).
void write_report_file(const std::string& dir, const std::string& name,
                       const std::string& content);

} // namespace mlnheat
