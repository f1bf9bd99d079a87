#include "mlnheat/command.hpp"

#include <cmath>

#include "mlnheat/kernels/dispatch.hpp"

namespace mlnheat {
namespace {

struct Worst {
    double value = 0.0;
    void track(double v) { value = std::max(value, v); }
    bool within(double tol) const { return value <= tol; }
};

PropertyResult make_result(const std::string& name, const Worst& w, double tol) {
    PropertyResult r;
    r.name = name;
    r.passed = w.within(tol);
    r.detail = "worst " + format_double(w.value) + " (tolerance " + format_double(tol) + ")";
    return r;
}

std::vector<GridSpec> suite_grids() {
    return {GridSpec(1, 16, 6.283185307179586), GridSpec(1, 64, 3.0),
            GridSpec(2, 16, 6.283185307179586), GridSpec(2, 32, 4.5)};
}

OperatorData suite_operator(const GridSpec& g, int which) {
    const double tau = 2.0 * 3.14159265358979323846 / g.box;
    const auto mk = [&](auto f) { return g.dim == 1
        ? Field::sample(g, [&](double x) { return f(x, 0.0); })
        : Field::sample(g, [&](double x, double y) { return f(x, y); }); };
    switch (which) {
        case 0:
            return OperatorData(mk([&](double, double) { return 1.0; }),
                                mk([&](double, double) { return 1.0; }),
                                mk([&](double, double) { return 1.0; }), 0.5, 1.0, 1.0, 1.0);
        case 1:
            return OperatorData(
                mk([&](double x, double y) { return 1.0 + 0.5 * (1.0 + std::sin(tau * (x + y))); }),
                mk([&](double x, double) { return 0.5 + 0.25 * (1.0 + std::cos(2.0 * tau * x)); }),
                mk([&](double x, double y) { return 0.3 + 0.3 * (1.0 + std::cos(tau * (x - y))); }),
                0.35, 1.0, 0.5, 0.3);
        default:
            return OperatorData(
                mk([&](double x, double) { return 2.0 + std::sin(tau * x); }),
                mk([&](double, double y) { return 1.0 + 0.5 * (1.0 + std::cos(tau * y)); }),
                mk([&](double x, double y) { return 1.0 + 0.2 * (1.0 + std::sin(tau * (2 * x + y))); }),
                0.7, 1.0, 1.0, 1.0);
    }
}

} // namespace

std::vector<PropertyResult> run_property_suite(std::uint64_t seed) {
    std::vector<PropertyResult> out;

    Worst round_trip, plancherel, self_adjoint, domination;
    bool nonneg = true;
    for (const GridSpec& g : suite_grids()) {
        const Field u = random_field(g, seed + g.points());
        const Field v = random_field(g, seed + g.points() + 1);

        const Field back = inverse_transform(forward_transform(u));
        double sup = 0.0, sup_diff = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            sup = std::max(sup, std::fabs(u[i]));
            sup_diff = std::max(sup_diff, std::fabs(u[i] - back[i]));
        }
        round_trip.track(sup_diff / sup);

        const Spectrum U = forward_transform(u);
        double spec_sq = 0.0;
        for (const auto& c : U.coeffs()) spec_sq += std::norm(c);
        spec_sq *= g.dim == 1 ? g.box : g.box * g.box;
        const double phys = l2_norm(u);
        plancherel.track(std::fabs(std::sqrt(spec_sq) - phys) / phys);

        for (double s : {0.25, 0.5, 0.75}) {
            const Field lu = fractional_laplacian_half(u, s);
            const Field lv = fractional_laplacian_half(v, s);
            const double asym = std::fabs(l2_inner(lu, v) - l2_inner(u, lv));
            self_adjoint.track(asym / (l2_norm(lu) * l2_norm(v)));
            nonneg = nonneg && l2_inner(lu, lu) >= 0.0;
        }
        for (int j = 0; j < g.n; ++j) {
            const double k2 = g.wavenumber(j) * g.wavenumber(j);
            for (double s = 0.1; s < 0.95; s += 0.1)
                domination.track(std::pow(k2, s) > 1.0 + k2 ? std::pow(k2, s) - 1.0 - k2 : 0.0);
        }
        for (double s = 0.1; s < 0.95; s += 0.1) {
            const NormSet ns = field_norms(u, s);
            const double excess = ns.hs_seminorm * ns.hs_seminorm - ns.h1 * ns.h1;
            domination.track(excess > 0.0 ? excess / (ns.h1 * ns.h1) : 0.0);
        }
    }
    out.push_back(make_result("spectral_round_trip", round_trip, 1e-12));
    out.push_back(make_result("discrete_plancherel", plancherel, 1e-12));
    PropertyResult sa = make_result("frac_laplacian_self_adjoint", self_adjoint, 1e-12);
    sa.passed = sa.passed && nonneg;
    out.push_back(sa);
    out.push_back(make_result("fourier_domination", domination, 0.0));

    Worst duality, coercivity;
    for (int which = 0; which < 3; ++which) {
        const GridSpec g(1, 64, 6.283185307179586);
        const OperatorData P = suite_operator(g, which);
        for (std::uint64_t k = 0; k < 10; ++k) {
            const Field u = random_field(g, seed + 100 * which + k);
            const Field v = random_field(g, seed + 100 * which + k + 50);
            const double form = bilinear_form(P, u, v);
            const double dual = l2_inner(apply_operator(P, u), v);
            const double scale = std::sqrt(bilinear_form(P, u, u) * bilinear_form(P, v, v));
            duality.track(std::fabs(form - dual) / scale);
            const double margin = coercivity_margin(P, u);
            const double buu = bilinear_form(P, u, u);
            coercivity.track(margin < 0.0 ? -margin / buu : 0.0);
        }
    }
    out.push_back(make_result("operator_form_duality", duality, 1e-10));
    out.push_back(make_result("coercivity_margin", coercivity, 1e-10));

    Worst contraction, monotonicity;
    bool apriori_ok = true;
    for (int which = 0; which < 3; ++which) {
        const GridSpec g(1, 64, 6.283185307179586);
        const OperatorData P = suite_operator(g, which);
        const Field u0 = random_smooth_field(g, seed + 7 + which, 8);
        for (Scheme scheme : {Scheme::backward_euler, Scheme::crank_nicolson}) {
            RunConfig rc;
            rc.final_time = 0.1;
            rc.dt = 0.01;
            rc.scheme = scheme;
            rc.cg_rel_tol = 1e-12;
            const SolveResult run = solve_ivp(P, u0, rc);
            for (std::size_t i = 0; i + 1 < run.trace.times.size(); ++i) {
                const double a = run.trace.breakdowns[i].l2_sq;
                const double b = run.trace.breakdowns[i + 1].l2_sq;
                contraction.track(b > a ? (b - a) / a : 0.0);
                if (scheme == Scheme::backward_euler) {
                    const double ta = run.trace.breakdowns[i].total;
                    const double tb = run.trace.breakdowns[i + 1].total;
                    monotonicity.track(tb > ta ? (tb - ta) / ta : 0.0);
                }
            }
            apriori_ok = apriori_ok && verify_apriori(P, run, u0).satisfied;
        }
    }
    out.push_back(make_result("l2_step_contraction", contraction, 1e-9));
    out.push_back(make_result("energy_monotonicity_backward_euler", monotonicity, 1e-9));
    PropertyResult ap;
    ap.name = "apriori_bound";
    ap.passed = apriori_ok;
    ap.detail = apriori_ok ? "satisfied on every suite run" : "violated";
    out.push_back(ap);
    return out;
}

namespace {

struct SolveInputs {
    OperatorData P;
    Field u0;
};

SolveInputs build_solve_inputs(const ExperimentConfig& cfg) {
    if (cfg.epsilon.has_value()) {
        const double eps = *cfg.epsilon;
        return SolveInputs{
            OperatorData(regularize_coefficient(cfg.coeff_a, cfg.mollifier, eps, cfg.grid),
                         regularize_coefficient(cfg.coeff_b, cfg.mollifier, eps, cfg.grid),
                         regularize_coefficient(cfg.coeff_c, cfg.mollifier, eps, cfg.grid),
                         cfg.s, cfg.coeff_a.floor, cfg.coeff_b.floor, cfg.coeff_c.floor),
            regularize(cfg.u0_spec, cfg.mollifier, eps, cfg.grid)};
    }
    if (cfg.coeff_a.singular.has_singular() || cfg.coeff_b.singular.has_singular() ||
        cfg.coeff_c.singular.has_singular() || cfg.u0_spec.has_singular())
        throw ValidationError("epsilon",
                              "solve without 'epsilon' requires regular data; set 'epsilon' "
                              "to mollify singular terms");
    const auto raw = [&](const CoefficientSpec& c) {
        Field f = sample_distribution(c.singular, cfg.grid);
        std::vector<double> v = f.values();
        for (double& x : v) x += c.floor;
        return Field(cfg.grid, std::move(v));
    };
    return SolveInputs{OperatorData(raw(cfg.coeff_a), raw(cfg.coeff_b), raw(cfg.coeff_c), cfg.s,
                                    cfg.coeff_a.floor, cfg.coeff_b.floor, cfg.coeff_c.floor),
                       sample_distribution(cfg.u0_spec, cfg.grid)};
}

} // namespace

CommandOutcome run_command(const ExperimentConfig& cfg) {
    CommandOutcome out;
    const std::string id = config_hash(cfg);
    const std::string stem = command_name(cfg.command) + "_" + id;
    if (cfg.clamped_default_epsilons > 0 && cfg.command != Command::check &&
        cfg.command != Command::solve)
        out.lines.push_back("note: " + std::to_string(cfg.clamped_default_epsilons) +
                            " default epsilon value(s) were clamped by the grid resolution");

    const auto emit = [&](const std::string& name, const std::string& content) {
        write_report_file(cfg.output_dir, name, content);
        out.files.push_back(name);
    };

    switch (cfg.command) {
        case Command::solve: {
            const SolveInputs in = build_solve_inputs(cfg);
            const SolveResult run = solve_ivp(in.P, in.u0, cfg.run);
            emit(stem + ".csv", energy_trace_csv(run.trace));
            emit(stem + "_snapshots.csv", snapshots_csv(run));
            emit(stem + ".json", solve_json(cfg, run));
            const MonotonicityReport mono = verify_energy_monotonicity(run.trace);
            const AprioriReport ap = verify_apriori(in.P, run, in.u0);
            out.lines.push_back("solve " + id + ": " + std::to_string(run.trace.times.size() - 1) +
                                " steps, final |u|^2 = " +
                                format_double(run.trace.breakdowns.back().l2_sq));
            out.lines.push_back(std::string("energy monotone: ") +
                                (mono.monotone_total ? "yes" : "NO") +
                                ", a priori bound: " + (ap.satisfied ? "satisfied" : "VIOLATED"));
            break;
        }
        case Command::net: {
            const NetReport rep = run_net(cfg.net_config());
            emit(stem + ".json", net_json(cfg, rep));
            emit(stem + ".csv", net_csv(rep));
            out.lines.push_back(
                "net " + id + ": verdict " +
                (rep.verdict == NetVerdict::moderate ? "moderate" : "not_moderate") +
                ", exponent " + format_double(rep.moderateness.exponent) + ", fit quality " +
                format_double(rep.moderateness.fit_quality));
            break;
        }
        case Command::uniqueness: {
            const UniquenessReport rep = uniqueness_experiment(cfg.net_config(), cfg.perturbation);
            emit(stem + ".json", uniqueness_json(cfg, rep));
            emit(stem + ".csv", uniqueness_csv(cfg.mollifier, rep));
            int max_pass = -1;
            for (const auto& o : rep.per_q)
                if (o.passes) max_pass = std::max(max_pass, o.q);
            out.lines.push_back("uniqueness " + id + " (" + perturbation_name(cfg.perturbation) +
                                "): negligible up to q = " + std::to_string(max_pass));
            break;
        }
        case Command::consistency: {
            const ConsistencyReport rep = consistency_experiment(cfg.net_config());
            emit(stem + ".json", consistency_json(cfg, rep));
            emit(stem + ".csv", consistency_csv(cfg.mollifier, rep));
            out.lines.push_back(
                "consistency " + id + ": rate " +
                (rep.fitted_rate.has_value() ? format_double(*rep.fitted_rate) : "n/a"));
            break;
        }
        case Command::check: {
            const std::vector<PropertyResult> props = run_property_suite(cfg.seed);
            emit(stem + ".json", check_json(cfg, props));
            bool all = true;
            for (const auto& p : props) {
                out.lines.push_back("property " + p.name + ": " +
                                    (p.passed ? "PASS" : "FAIL") + " (" + p.detail + ")");
                all = all && p.passed;
            }
            if (!all) out.exit_code = 4;
            break;
        }
    }
    return out;
}

} // namespace mlnheat
