#pragma once
// Families of regularised solves over a decreasing epsilon net: existence
// (moderateness of the solution net), uniqueness (negligibility of
// differences under negligible data perturbations), consistency against an
// unmollified reference for regular data, and a constant-coefficient
// refinement harness. Per-epsilon members are independent and may run on a
// thread pool; reports merge keyed by epsilon, so results do not depend on
// scheduling.

#include <optional>
#include <string>
#include <vector>

#include "mlnheat/distributions.hpp"
#include "mlnheat/evolve.hpp"
#include "mlnheat/moderateness.hpp"

namespace mlnheat {

struct NetConfig {
    std::vector<double> epsilons; // strictly decreasing, in (0,1]
    MollifierSpec mollifier;
    CoefficientSpec coeff_a, coeff_b, coeff_c;
    DistributionSpec u0_spec;
    double s = 0.5;
    GridSpec grid;
    RunConfig run;
    int threads = 1;

    void validate(std::vector<ValidationIssue>& issues) const;
};

struct PerEpsilonResult {
    double epsilon = 0.0;
    double omega = 0.0;
    double sup_t_h1_sq = 0.0;
    double sup_t_hs_sq = 0.0;
    bool apriori_satisfied = false;
    double apriori_lhs_max = 0.0;
    double apriori_rhs = 0.0;
    double C_eps = 0.0;
    long cg_total_iters = 0;
    bool failed = false;
    std::string error;
};

enum class NetVerdict { moderate, not_moderate };

struct NetReport {
    std::vector<PerEpsilonResult> per_eps;
    ModerationReport moderateness; // over sup_t H1 norms
    NetVerdict verdict = NetVerdict::not_moderate;
};

// Throws Error when more than half of the epsilon members fail.
NetReport run_net(const NetConfig& cfg);

enum class Perturbation {
    none,              // determinism control: both nets identical
    exp_small,         // add exp(-1/omega(eps)) to each coefficient
    initial_exp_small, // add exp(-1/omega(eps)) * bump to u0
    omega_first_power, // non-negligible control: add omega(eps)
};

Perturbation perturbation_from_name(const std::string& name);
std::string perturbation_name(Perturbation p);

struct UniquenessReport {
    Perturbation perturbation = Perturbation::none;
    std::vector<double> epsilons;
    // sup_t L2 + sqrt(int_0^T H1^2 dt) of the run difference, per epsilon.
    std::vector<double> diff_norms;
    std::vector<NegligibilityOrder> per_q;
    double fitted_slope = 0.0; // log diff vs log omega (0 when all vanish)
    bool bit_identical = false;
};

UniquenessReport uniqueness_experiment(const NetConfig& cfg, Perturbation kind);

struct ConsistencyReport {
    std::vector<double> epsilons;
    std::vector<double> errors_c_l2;  // max_t |u_eps - u|_{L2}
    std::vector<double> errors_l2_h1; // (int_0^T |u_eps - u|_{H1}^2 dt)^{1/2}
    std::optional<double> fitted_rate; // log-log slope of the C(L2) error vs omega
};

// Requires regular data (no singular parts anywhere): NotRegularData.
// With mollification disabled every member equals the reference exactly.
ConsistencyReport consistency_experiment(const NetConfig& cfg,
                                         bool disable_mollification = false);

struct RefinementConfig {
    double a0 = 1.0, b0 = 1.0, c0 = 1.0;
    double s = 0.5;
    double box = 0.0; // defaults to 2*pi when 0
    std::vector<std::pair<int, double>> modes{{1, 1.0}}; // u0 = sum amp * cos(m k0 x)
    double final_time = 1.0;
    std::vector<double> dts{1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
    std::vector<int> ns{16, 64, 256};
    double cg_rel_tol = 1e-12;
};

struct RefinementReport {
    double backward_euler_order = 0.0;
    double crank_nicolson_order = 0.0;
    // per n: max relative deviation of represented-mode decay factors from
    // the exact one-step recursion (backward Euler).
    std::vector<std::pair<int, double>> spatial_errors;
};

RefinementReport refinement_study(const RefinementConfig& cfg);

} // namespace mlnheat
