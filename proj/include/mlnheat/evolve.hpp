#pragma once
// Time integration of u_t + L u = 0. Implicit one-step schemes only (the
// mixed symbol makes explicit stepping stiffness-limited); each step solves
// an SPD system by conjugate gradients preconditioned with the inverse of
// the constant-coefficient symbol applied spectrally.

#include <string>
#include <vector>

#include "mlnheat/mixed_operator.hpp"

namespace mlnheat {

enum class Scheme { backward_euler, crank_nicolson };

std::string scheme_name(Scheme s);

struct RunConfig {
    double final_time = 1.0;
    double dt = 1e-2;
    Scheme scheme = Scheme::backward_euler;
    double cg_rel_tol = 1e-10; // in (0, 1e-4]
    int cg_max_iter = 500;
    int snapshot_stride = 1;

    void validate(const std::string& path, std::vector<ValidationIssue>& issues) const;
};

// Scalar history of one solve; index 0 is t = 0 (step quantities zero there).
struct EnergyTrace {
    std::vector<double> times;
    std::vector<EnergyBreakdown> breakdowns;
    std::vector<double> ut_l2_sq; // per-step |(u_{n+1}-u_n)/dt|_{L2}^2
    std::vector<int> cg_iterations;
};

struct StepResult {
    Field u_next;
    int cg_iters = 0;
};

// backward_euler: (I + dt L) u' = u;  crank_nicolson: (I + dt/2 L) u' =
// (I - dt/2 L) u. Throws CgDivergence when the preconditioned relative
// residual does not reach cg_rel_tol within cg_max_iter iterations.
StepResult implicit_step(const OperatorData& P, const Field& u_n, double dt, Scheme scheme,
                         double cg_rel_tol = 1e-10, int cg_max_iter = 500);

struct SolveResult {
    std::vector<double> snapshot_times;
    std::vector<Field> snapshots; // t = 0 and t = T always included
    EnergyTrace trace;
};

SolveResult solve_ivp(const OperatorData& P, const Field& u0, const RunConfig& cfg);

struct MonotonicityReport {
    bool monotone_l2 = true;
    bool monotone_total = true;
    double max_violation = 0.0; // largest absolute one-step increase seen
};

// Nonincreasing up to 1e-9 relative slack (absorbs the CG tolerance).
MonotonicityReport verify_energy_monotonicity(const EnergyTrace& trace);

struct AprioriReport {
    double lhs_max = 0.0;  // max over snapshots of |u|^2 + |grad u|^2 + |Lambda u|^2
    double rhs = 0.0;      // apriori_constant(P) * |u0|_{H1}^2
    bool satisfied = false;
};

// Throws TraceMismatch when the run stored no snapshots.
AprioriReport verify_apriori(const OperatorData& P, const SolveResult& run, const Field& u0);

} // namespace mlnheat
