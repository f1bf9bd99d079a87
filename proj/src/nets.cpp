#include "mlnheat/nets.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "mlnheat/kernels/dispatch.hpp"

namespace mlnheat {
namespace {

using std::numbers::pi;

// Index-parallel loop; bodies write to distinct slots, so the merge is
// deterministic whatever the thread count. A body exception is captured and
// rethrown as the lowest-index failure after everything joins.
template <typename F>
void for_each_index(std::size_t count, int threads, F&& body) {
    std::vector<std::exception_ptr> errors(count);
    const int workers = std::min<int>(threads, static_cast<int>(count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= count) return;
                    try {
                        body(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

struct RegularizedProblem {
    Field a, b, c, u0;
};

RegularizedProblem regularize_problem(const NetConfig& cfg, double eps) {
    return RegularizedProblem{
        regularize_coefficient(cfg.coeff_a, cfg.mollifier, eps, cfg.grid),
        regularize_coefficient(cfg.coeff_b, cfg.mollifier, eps, cfg.grid),
        regularize_coefficient(cfg.coeff_c, cfg.mollifier, eps, cfg.grid),
        regularize(cfg.u0_spec, cfg.mollifier, eps, cfg.grid),
    };
}

OperatorData make_operator(const NetConfig& cfg, const RegularizedProblem& rp) {
    return OperatorData(rp.a, rp.b, rp.c, cfg.s, cfg.coeff_a.floor, cfg.coeff_b.floor,
                        cfg.coeff_c.floor);
}

struct SnapshotNorms {
    double sup_h1_sq = 0.0;
    double sup_hs_sq = 0.0;
};

SnapshotNorms snapshot_norms(const SolveResult& run, double s) {
    SnapshotNorms out;
    for (const Field& u : run.snapshots) {
        const Spectrum U = forward_transform(u);
        const double l2_sq =
            u.grid().cell_volume() * kernels::ops().sum_sq(u.values().data(), u.size());
        out.sup_h1_sq = std::max(out.sup_h1_sq, l2_sq + grad_sq_norm(U));
        out.sup_hs_sq = std::max(out.sup_hs_sq, frac_sq_norm(U, s));
    }
    return out;
}

Field shift_field(const Field& f, double delta) {
    std::vector<double> v = f.values();
    for (double& x : v) x += delta;
    return Field(f.grid(), std::move(v));
}

Field fixed_bump(const GridSpec& g) {
    const double c = 0.5 * g.box;
    const double w = g.box / 8.0;
    if (g.dim == 1) {
        return Field::sample(g, [&](double x) {
            const double t = (x - c) / w;
            return std::fabs(t) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t * t)) : 0.0;
        });
    }
    return Field::sample(g, [&](double x, double y) {
        const double t = std::hypot(x - c, y - c) / w;
        return t < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t * t)) : 0.0;
    });
}

// sup_t L2 difference plus the trapezoid-in-time L2(0,T;H1) difference of
// two runs on the same snapshot schedule.
double run_difference_norm(const SolveResult& r1, const SolveResult& r2) {
    if (r1.snapshots.size() != r2.snapshots.size())
        throw TraceMismatch("uniqueness runs produced different snapshot schedules");
    const GridSpec& g = r1.snapshots.front().grid();
    const double vol = g.cell_volume();
    double sup_l2 = 0.0;
    std::vector<double> h1_sq(r1.snapshots.size());
    for (std::size_t i = 0; i < r1.snapshots.size(); ++i) {
        std::vector<double> diff(r1.snapshots[i].values());
        const auto& v2 = r2.snapshots[i].values();
        for (std::size_t j = 0; j < diff.size(); ++j) diff[j] -= v2[j];
        const Field w(g, std::move(diff));
        const double l2_sq = vol * kernels::ops().sum_sq(w.values().data(), w.size());
        sup_l2 = std::max(sup_l2, std::sqrt(l2_sq));
        h1_sq[i] = l2_sq + grad_sq_norm(forward_transform(w));
    }
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < h1_sq.size(); ++i)
        integral += 0.5 * (h1_sq[i] + h1_sq[i + 1]) *
                    (r1.snapshot_times[i + 1] - r1.snapshot_times[i]);
    return sup_l2 + std::sqrt(integral);
}

} // namespace

void NetConfig::validate(std::vector<ValidationIssue>& issues) const {
    if (epsilons.empty()) issues.push_back({"epsilons", "must not be empty"});
    for (std::size_t i = 0; i + 1 < epsilons.size(); ++i)
        if (!(epsilons[i] > epsilons[i + 1]))
            issues.push_back({"epsilons", "must be strictly decreasing"});
    for (double eps : epsilons) {
        if (!(eps > 0.0 && eps <= 1.0)) {
            issues.push_back({"epsilons", "every entry must lie in (0, 1]"});
            break;
        }
    }
    for (double eps : epsilons) {
        try {
            check_mollifier_resolution(mollifier, eps, grid);
        } catch (const Error& e) {
            issues.push_back({"epsilons", e.what()});
            break;
        }
    }
    if (!(s > 0.0 && s < 1.0)) issues.push_back({"s", "must lie in (0, 1)"});
    run.validate("run", issues);
    validate_distribution(coeff_a.singular, grid, "coeff_a.singular", issues);
    validate_distribution(coeff_b.singular, grid, "coeff_b.singular", issues);
    validate_distribution(coeff_c.singular, grid, "coeff_c.singular", issues);
    validate_distribution(u0_spec, grid, "u0", issues);
    for (const auto* c : {&coeff_a, &coeff_b, &coeff_c}) {
        if (!(c->floor > 0.0)) {
            issues.push_back({"coefficients.floor", "floors must be strictly positive"});
            break;
        }
    }
}

NetReport run_net(const NetConfig& cfg) {
    std::vector<ValidationIssue> issues;
    cfg.validate(issues);
    if (!issues.empty()) throw ValidationError(std::move(issues));

    NetReport rep;
    rep.per_eps.resize(cfg.epsilons.size());
    for_each_index(cfg.epsilons.size(), cfg.threads, [&](std::size_t i) {
        PerEpsilonResult& r = rep.per_eps[i];
        r.epsilon = cfg.epsilons[i];
        r.omega = cfg.mollifier.omega(r.epsilon);
        try {
            const RegularizedProblem rp = regularize_problem(cfg, r.epsilon);
            const OperatorData P = make_operator(cfg, rp);
            const SolveResult run = solve_ivp(P, rp.u0, cfg.run);
            const SnapshotNorms norms = snapshot_norms(run, cfg.s);
            r.sup_t_h1_sq = norms.sup_h1_sq;
            r.sup_t_hs_sq = norms.sup_hs_sq;
            const AprioriReport ap = verify_apriori(P, run, rp.u0);
            r.apriori_satisfied = ap.satisfied;
            r.apriori_lhs_max = ap.lhs_max;
            r.apriori_rhs = ap.rhs;
            r.C_eps = apriori_constant(P);
            for (int it : run.trace.cg_iterations) r.cg_total_iters += it;
        } catch (const Error& e) {
            r.failed = true;
            r.error = e.what();
        }
    });

    std::size_t failures = 0;
    for (const auto& r : rep.per_eps) failures += r.failed ? 1 : 0;
    if (2 * failures > rep.per_eps.size())
        throw Error("net aborted: " + std::to_string(failures) + " of " +
                    std::to_string(rep.per_eps.size()) + " epsilon members failed (" +
                    rep.per_eps.front().error + ")");

    std::vector<double> eps_ok, h1_norms;
    bool all_apriori = true;
    for (const auto& r : rep.per_eps) {
        if (r.failed) {
            all_apriori = false;
            continue;
        }
        eps_ok.push_back(r.epsilon);
        h1_norms.push_back(std::sqrt(r.sup_t_h1_sq));
        all_apriori = all_apriori && r.apriori_satisfied;
    }
    rep.moderateness = fit_moderateness(eps_ok, h1_norms, cfg.mollifier.scale_power);
    rep.verdict = (failures == 0 && all_apriori && rep.moderateness.fit_quality >= 0.9)
                      ? NetVerdict::moderate
                      : NetVerdict::not_moderate;
    return rep;
}

Perturbation perturbation_from_name(const std::string& name) {
    if (name == "none") return Perturbation::none;
    if (name == "exp_small") return Perturbation::exp_small;
    if (name == "initial_exp_small") return Perturbation::initial_exp_small;
    if (name == "omega_first_power") return Perturbation::omega_first_power;
    throw ValidationError("uniqueness.perturbation",
                          "must be none|exp_small|initial_exp_small|omega_first_power");
}

std::string perturbation_name(Perturbation p) {
    switch (p) {
        case Perturbation::none: return "none";
        case Perturbation::exp_small: return "exp_small";
        case Perturbation::initial_exp_small: return "initial_exp_small";
        case Perturbation::omega_first_power: return "omega_first_power";
    }
    return "none";
}

UniquenessReport uniqueness_experiment(const NetConfig& cfg, Perturbation kind) {
    std::vector<ValidationIssue> issues;
    cfg.validate(issues);
    if (!issues.empty()) throw ValidationError(std::move(issues));

    UniquenessReport rep;
    rep.perturbation = kind;
    rep.epsilons = cfg.epsilons;
    rep.diff_norms.resize(cfg.epsilons.size());
    std::vector<char> identical(cfg.epsilons.size(), 0);

    for_each_index(cfg.epsilons.size(), cfg.threads, [&](std::size_t i) {
        const double eps = cfg.epsilons[i];
        const double om = cfg.mollifier.omega(eps);
        const RegularizedProblem base = regularize_problem(cfg, eps);

        RegularizedProblem tilde = base;
        if (kind == Perturbation::exp_small || kind == Perturbation::omega_first_power) {
            const double delta =
                kind == Perturbation::exp_small ? std::exp(-1.0 / om) : om;
            tilde.a = shift_field(base.a, delta);
            tilde.b = shift_field(base.b, delta);
            tilde.c = shift_field(base.c, delta);
        } else if (kind == Perturbation::initial_exp_small) {
            const double delta = std::exp(-1.0 / om);
            const Field bump = fixed_bump(cfg.grid);
            std::vector<double> v = base.u0.values();
            for (std::size_t j = 0; j < v.size(); ++j) v[j] += delta * bump[j];
            tilde.u0 = Field(cfg.grid, std::move(v));
        }

        const SolveResult r1 = solve_ivp(make_operator(cfg, base), base.u0, cfg.run);
        const SolveResult r2 = solve_ivp(make_operator(cfg, tilde), tilde.u0, cfg.run);
        rep.diff_norms[i] = run_difference_norm(r1, r2);

        bool same = true;
        for (std::size_t k = 0; same && k < r1.snapshots.size(); ++k)
            same = r1.snapshots[k].values() == r2.snapshots[k].values();
        identical[i] = same ? 1 : 0;
    });

    rep.bit_identical = true;
    for (char c : identical) rep.bit_identical = rep.bit_identical && c != 0;
    rep.per_q = negligibility_orders(cfg.epsilons, rep.diff_norms, cfg.mollifier.scale_power);

    double peak = 0.0;
    for (double d : rep.diff_norms) peak = std::max(peak, d);
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < rep.diff_norms.size(); ++i) {
        if (rep.diff_norms[i] > 1e-13 * peak && rep.diff_norms[i] > 0.0) {
            lx.push_back(std::log(cfg.mollifier.omega(cfg.epsilons[i])));
            ly.push_back(std::log(rep.diff_norms[i]));
        }
    }
    rep.fitted_slope = lx.size() >= 2 ? fit_line(lx, ly).slope : 0.0;
    return rep;
}

ConsistencyReport consistency_experiment(const NetConfig& cfg, bool disable_mollification) {
    std::vector<ValidationIssue> issues;
    cfg.validate(issues);
    if (!issues.empty()) throw ValidationError(std::move(issues));
    if (cfg.coeff_a.singular.has_singular() || cfg.coeff_b.singular.has_singular() ||
        cfg.coeff_c.singular.has_singular() || cfg.u0_spec.has_singular())
        throw NotRegularData();

    const auto raw_coeff = [&](const CoefficientSpec& c) {
        Field f = sample_distribution(c.singular, cfg.grid);
        std::vector<double> v = f.values();
        for (double& x : v) x += c.floor;
        return Field(cfg.grid, std::move(v));
    };
    const Field a_ref = raw_coeff(cfg.coeff_a);
    const Field b_ref = raw_coeff(cfg.coeff_b);
    const Field c_ref = raw_coeff(cfg.coeff_c);
    const Field u0_ref = sample_distribution(cfg.u0_spec, cfg.grid);
    const OperatorData P_ref(a_ref, b_ref, c_ref, cfg.s, cfg.coeff_a.floor, cfg.coeff_b.floor,
                             cfg.coeff_c.floor);
    const SolveResult ref = solve_ivp(P_ref, u0_ref, cfg.run);

    ConsistencyReport rep;
    rep.epsilons = cfg.epsilons;
    rep.errors_c_l2.resize(cfg.epsilons.size());
    rep.errors_l2_h1.resize(cfg.epsilons.size());

    for_each_index(cfg.epsilons.size(), cfg.threads, [&](std::size_t i) {
        SolveResult member = [&] {
            if (disable_mollification) return solve_ivp(P_ref, u0_ref, cfg.run);
            const RegularizedProblem rp = regularize_problem(cfg, cfg.epsilons[i]);
            return solve_ivp(make_operator(cfg, rp), rp.u0, cfg.run);
        }();
        if (member.snapshots.size() != ref.snapshots.size())
            throw TraceMismatch("consistency member diverged from the reference schedule");
        const double vol = cfg.grid.cell_volume();
        double sup_l2 = 0.0, integral = 0.0;
        std::vector<double> h1_sq(member.snapshots.size());
        for (std::size_t k = 0; k < member.snapshots.size(); ++k) {
            std::vector<double> diff(member.snapshots[k].values());
            const auto& rv = ref.snapshots[k].values();
            for (std::size_t j = 0; j < diff.size(); ++j) diff[j] -= rv[j];
            const Field w(cfg.grid, std::move(diff));
            const double l2_sq = vol * kernels::ops().sum_sq(w.values().data(), w.size());
            sup_l2 = std::max(sup_l2, std::sqrt(l2_sq));
            h1_sq[k] = l2_sq + grad_sq_norm(forward_transform(w));
        }
        for (std::size_t k = 0; k + 1 < h1_sq.size(); ++k)
            integral += 0.5 * (h1_sq[k] + h1_sq[k + 1]) *
                        (member.snapshot_times[k + 1] - member.snapshot_times[k]);
        rep.errors_c_l2[i] = sup_l2;
        rep.errors_l2_h1[i] = std::sqrt(integral);
    });

    bool positive = true;
    for (double e : rep.errors_c_l2) positive = positive && e > 0.0;
    if (positive) {
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < rep.epsilons.size(); ++i) {
            lx.push_back(std::log(cfg.mollifier.omega(rep.epsilons[i])));
            ly.push_back(std::log(rep.errors_c_l2[i]));
        }
        rep.fitted_rate = fit_line(lx, ly).slope;
    }
    return rep;
}

RefinementReport refinement_study(const RefinementConfig& cfg) {
    const double box = cfg.box > 0.0 ? cfg.box : 2.0 * pi;
    if (cfg.modes.empty())
        throw ValidationError("refinement.modes", "u0 needs at least one mode");
    RefinementReport rep;

    const auto lambda_of = [&](int m) {
        const double k = 2.0 * pi * m / box;
        return cfg.a0 * k * k + cfg.b0 * std::pow(std::fabs(k), 2.0 * cfg.s) + cfg.c0;
    };
    const auto make_problem = [&](int n) {
        const GridSpec g(1, n, box);
        const Field coeff_a = Field::sample(g, [&](double) { return cfg.a0; });
        const Field coeff_b = Field::sample(g, [&](double) { return cfg.b0; });
        const Field coeff_c = Field::sample(g, [&](double) { return cfg.c0; });
        OperatorData P(coeff_a, coeff_b, coeff_c, cfg.s, cfg.a0, cfg.b0, cfg.c0);
        Field u0 = Field::sample(g, [&](double x) {
            double v = 0.0;
            for (const auto& [m, amp] : cfg.modes) v += amp * std::cos(2.0 * pi * m * x / box);
            return v;
        });
        return std::pair<OperatorData, Field>(std::move(P), std::move(u0));
    };

    // Temporal orders on the coarsest grid (all modes exactly represented).
    const int n0 = cfg.ns.front();
    auto [P0, u0_field] = make_problem(n0);
    const GridSpec g0 = P0.grid();
    const Field exact = Field::sample(g0, [&](double x) {
        double v = 0.0;
        for (const auto& [m, amp] : cfg.modes)
            v += amp * std::exp(-lambda_of(m) * cfg.final_time) *
                 std::cos(2.0 * pi * m * x / box);
        return v;
    });
    for (Scheme scheme : {Scheme::backward_euler, Scheme::crank_nicolson}) {
        std::vector<double> lx, ly;
        for (double dt : cfg.dts) {
            RunConfig rc;
            rc.final_time = cfg.final_time;
            rc.dt = dt;
            rc.scheme = scheme;
            rc.cg_rel_tol = cfg.cg_rel_tol;
            rc.snapshot_stride = 1 << 20;
            const SolveResult run = solve_ivp(P0, u0_field, rc);
            const Field& uT = run.snapshots.back();
            double err_sq = 0.0;
            for (std::size_t i = 0; i < uT.size(); ++i) {
                const double d = uT[i] - exact[i];
                err_sq += d * d;
            }
            lx.push_back(std::log(dt));
            ly.push_back(std::log(std::sqrt(err_sq * g0.cell_volume())));
        }
        const double order = fit_line(lx, ly).slope;
        if (scheme == Scheme::backward_euler)
            rep.backward_euler_order = order;
        else
            rep.crank_nicolson_order = order;
    }

    // Spatial check: represented-mode decay factors against the exact
    // backward-Euler recursion, per grid size.
    const double dt = cfg.dts.front();
    for (int n : cfg.ns) {
        auto [P, u0n] = make_problem(n);
        RunConfig rc;
        rc.final_time = cfg.final_time;
        rc.dt = dt;
        rc.scheme = Scheme::backward_euler;
        rc.cg_rel_tol = cfg.cg_rel_tol;
        rc.snapshot_stride = 1 << 20;
        const SolveResult run = solve_ivp(P, u0n, rc);
        const Spectrum S0 = forward_transform(u0n);
        const Spectrum ST = forward_transform(run.snapshots.back());
        const long steps = static_cast<long>(std::ceil(cfg.final_time / dt - 1e-12));
        double worst = 0.0;
        for (const auto& [m, amp] : cfg.modes) {
            const double factor = std::pow(1.0 + dt * lambda_of(m), -static_cast<double>(steps));
            const double measured = ST.at(m).real() / S0.at(m).real();
            worst = std::max(worst, std::fabs(measured - factor) / factor);
        }
        rep.spatial_errors.emplace_back(n, worst);
    }
    return rep;
}

} // namespace mlnheat
