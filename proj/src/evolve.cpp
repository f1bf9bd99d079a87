#include "mlnheat/evolve.hpp"

#include <cmath>

#include "fft.hpp"
#include "mlnheat/kernels/dispatch.hpp"

namespace mlnheat {
namespace {

// One implicit system (I + alpha L) x = rhs, solved by preconditioned CG.
// The preconditioner is the exact inverse of the constant-coefficient part
// 1 + alpha (a0 |k|^2 + b0 |k|^{2s} + c0), applied spectrally, so constant
// coefficients converge in one iteration.
class ImplicitSolver {
public:
    ImplicitSolver(const OperatorData& P, double alpha, double tol, int max_iter)
        : applier_(P), grid_(P.grid()), alpha_(alpha), tol_(tol), max_iter_(max_iter) {
        const std::vector<double> sym = P.floor_symbol();
        precond_.resize(sym.size());
        for (std::size_t i = 0; i < sym.size(); ++i) precond_[i] = 1.0 / (1.0 + alpha * sym[i]);
        const std::size_t np = grid_.points();
        r_.resize(np);
        z_.resize(np);
        p_.resize(np);
        q_.resize(np);
        cbuf_.resize(np);
    }

    double alpha() const { return alpha_; }
    OperatorApplier& applier() { return applier_; }

    // x holds the initial guess on entry and the solution on exit.
    int solve(const std::vector<double>& rhs, std::vector<double>& x) {
        const auto& ops = kernels::ops();
        const std::size_t np = rhs.size();

        const double rhs_sq = ops.sum_sq(rhs.data(), np);
        if (rhs_sq == 0.0) {
            std::fill(x.begin(), x.end(), 0.0);
            return 0;
        }
        apply_precond(rhs, z_);
        const double bnorm = std::sqrt(ops.dot(rhs.data(), z_.data(), np));

        applier_.apply_shifted(x.data(), q_.data(), alpha_);
        for (std::size_t i = 0; i < np; ++i) r_[i] = rhs[i] - q_[i];
        apply_precond(r_, z_);
        double rz = ops.dot(r_.data(), z_.data(), np);
        if (std::sqrt(std::max(rz, 0.0)) <= tol_ * bnorm) return 0;
        p_ = z_;

        for (int it = 1; it <= max_iter_; ++it) {
            applier_.apply_shifted(p_.data(), q_.data(), alpha_);
            const double pq = ops.dot(p_.data(), q_.data(), np);
            const double step = rz / pq;
            ops.axpy(step, p_.data(), x.data(), np);
            ops.axpy(-step, q_.data(), r_.data(), np);
            apply_precond(r_, z_);
            const double rz_next = ops.dot(r_.data(), z_.data(), np);
            if (std::sqrt(std::max(rz_next, 0.0)) <= tol_ * bnorm) return it;
            ops.xpby(z_.data(), rz_next / rz, p_.data(), np);
            rz = rz_next;
        }
        throw CgDivergence(max_iter_, std::sqrt(std::max(rz, 0.0)) / bnorm);
    }

private:
    void apply_precond(const std::vector<double>& in, std::vector<double>& out) {
        const std::size_t np = in.size();
        const double inv_np = 1.0 / static_cast<double>(np);
        for (std::size_t i = 0; i < np; ++i) cbuf_[i] = in[i] * inv_np;
        if (grid_.dim == 1)
            detail::fft_pow2(cbuf_.data(), grid_.n, -1);
        else
            detail::fft_2d(cbuf_.data(), grid_.n, -1);
        kernels::ops().cscale_real(precond_.data(), cbuf_.data(), np);
        if (grid_.dim == 1)
            detail::fft_pow2(cbuf_.data(), grid_.n, +1);
        else
            detail::fft_2d(cbuf_.data(), grid_.n, +1);
        out.resize(np);
        for (std::size_t i = 0; i < np; ++i) out[i] = cbuf_[i].real();
    }

    OperatorApplier applier_;
    GridSpec grid_;
    double alpha_;
    double tol_;
    int max_iter_;
    std::vector<double> precond_;
    std::vector<double> r_, z_, p_, q_;
    std::vector<std::complex<double>> cbuf_;
};

int run_step(ImplicitSolver& solver, Scheme scheme, const std::vector<double>& u_n,
             std::vector<double>& u_next) {
    const std::size_t np = u_n.size();
    std::vector<double> rhs;
    if (scheme == Scheme::backward_euler) {
        rhs = u_n;
    } else {
        rhs.resize(np);
        solver.applier().apply_shifted(u_n.data(), rhs.data(), -solver.alpha());
    }
    u_next = u_n; // warm start
    return solver.solve(rhs, u_next);
}

double scheme_alpha(Scheme scheme, double dt) {
    return scheme == Scheme::backward_euler ? dt : 0.5 * dt;
}

} // namespace

std::string scheme_name(Scheme s) {
    return s == Scheme::backward_euler ? "backward_euler" : "crank_nicolson";
}

void RunConfig::validate(const std::string& path, std::vector<ValidationIssue>& issues) const {
    if (!(final_time > 0.0)) issues.push_back({path + ".final_time", "must be positive"});
    if (!(dt > 0.0)) issues.push_back({path + ".dt", "must be positive"});
    if (dt > final_time) issues.push_back({path + ".dt", "must not exceed final_time"});
    if (!(cg_rel_tol > 0.0 && cg_rel_tol <= 1e-4))
        issues.push_back({path + ".cg_rel_tol", "must lie in (0, 1e-4]"});
    if (cg_max_iter < 1) issues.push_back({path + ".cg_max_iter", "must be at least 1"});
    if (snapshot_stride < 1) issues.push_back({path + ".snapshot_stride", "must be at least 1"});
}

StepResult implicit_step(const OperatorData& P, const Field& u_n, double dt, Scheme scheme,
                         double cg_rel_tol, int cg_max_iter) {
    require_same_grid(P.grid(), u_n.grid(), "implicit_step");
    if (!(dt > 0.0)) throw ValidationError("dt", "must be positive");
    ImplicitSolver solver(P, scheme_alpha(scheme, dt), cg_rel_tol, cg_max_iter);
    std::vector<double> next;
    const int iters = run_step(solver, scheme, u_n.values(), next);
    return StepResult{Field(u_n.grid(), std::move(next)), iters};
}

SolveResult solve_ivp(const OperatorData& P, const Field& u0, const RunConfig& cfg) {
    require_same_grid(P.grid(), u0.grid(), "solve_ivp");
    std::vector<ValidationIssue> issues;
    cfg.validate("run", issues);
    if (!issues.empty()) throw ValidationError(std::move(issues));

    const long steps = static_cast<long>(std::ceil(cfg.final_time / cfg.dt - 1e-12));
    const double last_dt = cfg.final_time - static_cast<double>(steps - 1) * cfg.dt;

    SolveResult out;
    out.trace.times.push_back(0.0);
    out.trace.breakdowns.push_back(energy(P, u0));
    out.trace.ut_l2_sq.push_back(0.0);
    out.trace.cg_iterations.push_back(0);
    out.snapshot_times.push_back(0.0);
    out.snapshots.push_back(u0);

    ImplicitSolver solver(P, scheme_alpha(cfg.scheme, cfg.dt), cfg.cg_rel_tol, cfg.cg_max_iter);
    const double vol = P.grid().cell_volume();
    std::vector<double> u = u0.values();
    std::vector<double> next(u.size());
    std::vector<double> diff(u.size());

    for (long n = 0; n < steps; ++n) {
        const bool final_short = (n == steps - 1) && std::fabs(last_dt - cfg.dt) > 1e-12 * cfg.dt;
        const double dt_n = final_short ? last_dt : cfg.dt;
        int iters = 0;
        try {
            if (final_short) {
                ImplicitSolver short_solver(P, scheme_alpha(cfg.scheme, dt_n), cfg.cg_rel_tol,
                                            cfg.cg_max_iter);
                iters = run_step(short_solver, cfg.scheme, u, next);
            } else {
                iters = run_step(solver, cfg.scheme, u, next);
            }
        } catch (const CgDivergence& e) {
            throw CgDivergence(e.iterations, e.residual, n);
        }
        const double t = n + 1 == steps ? cfg.final_time : cfg.dt * static_cast<double>(n + 1);
        for (std::size_t i = 0; i < u.size(); ++i) diff[i] = (next[i] - u[i]) / dt_n;
        u.swap(next);

        const Field u_field(P.grid(), u);
        out.trace.times.push_back(t);
        out.trace.breakdowns.push_back(energy(P, u_field));
        out.trace.ut_l2_sq.push_back(vol * kernels::ops().sum_sq(diff.data(), diff.size()));
        out.trace.cg_iterations.push_back(iters);
        if ((n + 1) % cfg.snapshot_stride == 0 || n + 1 == steps) {
            out.snapshot_times.push_back(t);
            out.snapshots.push_back(u_field);
        }
    }
    return out;
}

MonotonicityReport verify_energy_monotonicity(const EnergyTrace& trace) {
    if (trace.times.empty()) throw TraceMismatch("empty trace");
    MonotonicityReport rep;
    constexpr double slack = 1e-9;
    for (std::size_t i = 0; i + 1 < trace.times.size(); ++i) {
        const double l2a = trace.breakdowns[i].l2_sq, l2b = trace.breakdowns[i + 1].l2_sq;
        const double ta = trace.breakdowns[i].total, tb = trace.breakdowns[i + 1].total;
        if (l2b > l2a * (1.0 + slack)) {
            rep.monotone_l2 = false;
            rep.max_violation = std::max(rep.max_violation, l2b - l2a);
        }
        if (tb > ta * (1.0 + slack)) {
            rep.monotone_total = false;
            rep.max_violation = std::max(rep.max_violation, tb - ta);
        }
    }
    return rep;
}

AprioriReport verify_apriori(const OperatorData& P, const SolveResult& run, const Field& u0) {
    if (run.snapshots.empty()) throw TraceMismatch("run carries no snapshots");
    AprioriReport rep;
    for (const Field& u : run.snapshots) {
        const Spectrum U = forward_transform(u);
        const double l2_sq =
            u.grid().cell_volume() * kernels::ops().sum_sq(u.values().data(), u.size());
        const double lhs = l2_sq + grad_sq_norm(U) + frac_sq_norm(U, P.s());
        rep.lhs_max = std::max(rep.lhs_max, lhs);
    }
    const Spectrum U0 = forward_transform(u0);
    const double l2_sq =
        u0.grid().cell_volume() * kernels::ops().sum_sq(u0.values().data(), u0.size());
    rep.rhs = apriori_constant(P) * (l2_sq + grad_sq_norm(U0));
    rep.satisfied = rep.lhs_max <= rep.rhs * (1.0 + 1e-9);
    return rep;
}

} // namespace mlnheat
