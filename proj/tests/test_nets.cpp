#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mlnheat/nets.hpp"

using namespace mlnheat;

namespace {

std::vector<double> halving_epsilons(int from = 3, int to = 8) {
    std::vector<double> eps;
    for (int k = from; k <= to; ++k) eps.push_back(std::pow(2.0, -k));
    return eps;
}

// Smooth baseline problem on the unit torus, resolved down to eps = 2^-8.
NetConfig smooth_config() {
    NetConfig cfg;
    cfg.grid = GridSpec(1, 1024, 1.0);
    cfg.epsilons = halving_epsilons();
    cfg.mollifier = {MollifierProfile::bump, 1.0};
    cfg.coeff_a.floor = 1.0;
    cfg.coeff_b.floor = 1.0;
    cfg.coeff_c.floor = 1.0;
    // Low-mode datum: its mollification changes the H1 norm by a few percent
    // across the epsilon range, keeping the net in the flat regime.
    cfg.u0_spec.terms.push_back(
        DistributionTerm::smooth_term(SmoothExpr::parse("0.5 + cos(2*pi*x/L)")));
    cfg.s = 0.5;
    cfg.run.final_time = 0.25;
    cfg.run.dt = 0.0125;
    cfg.run.cg_rel_tol = 1e-12;
    cfg.run.snapshot_stride = 1;
    return cfg;
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (!(v[i] > v[i + 1])) return false;
    return true;
}

} // namespace

TEST_CASE("run_net on smooth data: bounded norms, moderate verdict") {
    const NetConfig cfg = smooth_config();
    const NetReport rep = run_net(cfg);
    REQUIRE(rep.per_eps.size() == cfg.epsilons.size());
    for (const auto& r : rep.per_eps) {
        CHECK(!r.failed);
        CHECK(r.apriori_satisfied);
        CHECK(r.sup_t_h1_sq > 0.0);
    }
    CHECK(std::fabs(rep.moderateness.exponent) <= 0.1);
    CHECK(rep.moderateness.fit_quality >= 0.9);
    CHECK(rep.verdict == NetVerdict::moderate);
}

TEST_CASE("run_net with a delta in the zero-order coefficient stays moderate") {
    NetConfig cfg = smooth_config();
    cfg.coeff_c.singular.nonnegative = true;
    cfg.coeff_c.singular.terms.push_back(DistributionTerm::dirac_term({0.5, 0.0}, 10.0));
    const NetReport rep = run_net(cfg);
    for (const auto& r : rep.per_eps) {
        CHECK(!r.failed);
        CHECK(r.apriori_satisfied);
    }
    CHECK(rep.moderateness.fit_quality >= 0.9);
    CHECK(std::isfinite(rep.moderateness.exponent));
    CHECK(rep.verdict == NetVerdict::moderate);

    // The a priori constant net inherits the omega^{-1} growth of the
    // mollified delta's sup norm.
    std::vector<double> c_eps;
    for (const auto& r : rep.per_eps) c_eps.push_back(r.C_eps);
    const ModerationReport cfit = fit_moderateness(cfg.epsilons, c_eps, 1.0);
    CHECK(cfit.exponent == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("run_net with a delta initial datum has a finite growth exponent") {
    NetConfig cfg = smooth_config();
    cfg.u0_spec = DistributionSpec{};
    cfg.u0_spec.terms.push_back(DistributionTerm::dirac_term({0.5, 0.0}, 1.0));
    const NetReport rep = run_net(cfg);
    for (const auto& r : rep.per_eps) {
        CHECK(!r.failed);
        CHECK(r.apriori_satisfied);
    }
    // |psi_omega|_{H1} ~ omega^{-3/2} in d = 1 drives the solution net.
    CHECK(rep.moderateness.exponent > 1.0);
    CHECK(rep.moderateness.exponent < 2.0);
    CHECK(rep.moderateness.fit_quality >= 0.9);
    CHECK(rep.verdict == NetVerdict::moderate);
}

TEST_CASE("uniqueness: zero perturbation is bit-identical; all orders pass") {
    NetConfig cfg = smooth_config();
    cfg.epsilons = halving_epsilons(3, 6); // 4 members keep it quick
    const UniquenessReport rep = uniqueness_experiment(cfg, Perturbation::none);
    CHECK(rep.bit_identical);
    for (const auto& o : rep.per_q) CHECK(o.passes);
    for (double d : rep.diff_norms) CHECK(d == 0.0);
}

TEST_CASE("uniqueness: exp-small coefficient perturbation is negligible") {
    const NetConfig cfg = smooth_config();
    const UniquenessReport rep = uniqueness_experiment(cfg, Perturbation::exp_small);
    REQUIRE(rep.per_q.size() == 11);
    for (const auto& o : rep.per_q) CHECK(o.passes);
    CHECK(!rep.bit_identical); // the largest epsilons differ measurably
}

TEST_CASE("uniqueness: exp-small initial perturbation is negligible") {
    const NetConfig cfg = smooth_config();
    const UniquenessReport rep = uniqueness_experiment(cfg, Perturbation::initial_exp_small);
    for (const auto& o : rep.per_q) CHECK(o.passes);
}

TEST_CASE("uniqueness: first-power control fails at order two") {
    const NetConfig cfg = smooth_config();
    const UniquenessReport rep = uniqueness_experiment(cfg, Perturbation::omega_first_power);
    CHECK(rep.per_q[0].passes);
    CHECK(rep.per_q[1].passes);
    CHECK(!rep.per_q[2].passes);
    CHECK(rep.fitted_slope == doctest::Approx(1.0).epsilon(0.25));
}

TEST_CASE("consistency: smooth-data errors decay at second order") {
    NetConfig cfg = smooth_config();
    cfg.coeff_a.singular.nonnegative = true;
    cfg.coeff_a.singular.terms.push_back(
        DistributionTerm::smooth_term(SmoothExpr::parse("1 + sin(2*pi*x/L)")));
    cfg.coeff_b.singular.nonnegative = true;
    cfg.coeff_b.singular.terms.push_back(
        DistributionTerm::smooth_term(SmoothExpr::parse("0.5 + 0.5*cos(2*pi*x/L)")));
    const ConsistencyReport rep = consistency_experiment(cfg);
    CHECK(strictly_decreasing(rep.errors_c_l2));
    CHECK(strictly_decreasing(rep.errors_l2_h1));
    REQUIRE(rep.fitted_rate.has_value());
    CHECK(*rep.fitted_rate == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("consistency: disabled mollification reproduces the reference exactly") {
    NetConfig cfg = smooth_config();
    cfg.epsilons = halving_epsilons(3, 6);
    const ConsistencyReport rep = consistency_experiment(cfg, true);
    for (double e : rep.errors_c_l2) CHECK(e == 0.0);
    for (double e : rep.errors_l2_h1) CHECK(e == 0.0);
    CHECK(!rep.fitted_rate.has_value());
}

TEST_CASE("consistency rejects singular data") {
    NetConfig cfg = smooth_config();
    cfg.coeff_c.singular.nonnegative = true;
    cfg.coeff_c.singular.terms.push_back(DistributionTerm::dirac_term({0.5, 0.0}, 1.0));
    CHECK_THROWS_AS(consistency_experiment(cfg), NotRegularData);
}

TEST_CASE("refinement study: first and second temporal order, spectral in space") {
    RefinementConfig cfg;
    cfg.ns = {16, 64, 256};
    const RefinementReport rep = refinement_study(cfg);
    CHECK(rep.backward_euler_order == doctest::Approx(1.0).epsilon(0.1));
    CHECK(rep.crank_nicolson_order == doctest::Approx(2.0).epsilon(0.1));
    REQUIRE(rep.spatial_errors.size() == 3);
    for (const auto& [n, err] : rep.spatial_errors) CHECK(err <= 1e-8);
}

TEST_CASE("net reports are identical across thread counts") {
    NetConfig cfg = smooth_config();
    cfg.epsilons = halving_epsilons(3, 6);
    cfg.threads = 1;
    const NetReport r1 = run_net(cfg);
    cfg.threads = 2;
    const NetReport r2 = run_net(cfg);
    REQUIRE(r1.per_eps.size() == r2.per_eps.size());
    for (std::size_t i = 0; i < r1.per_eps.size(); ++i) {
        CHECK(r1.per_eps[i].sup_t_h1_sq == r2.per_eps[i].sup_t_h1_sq);
        CHECK(r1.per_eps[i].sup_t_hs_sq == r2.per_eps[i].sup_t_hs_sq);
        CHECK(r1.per_eps[i].C_eps == r2.per_eps[i].C_eps);
    }
    CHECK(r1.moderateness.exponent == r2.moderateness.exponent);
}

TEST_CASE("net aborts when more than half the members fail") {
    NetConfig cfg = smooth_config();
    cfg.coeff_c.singular.nonnegative = true;
    cfg.coeff_c.singular.terms.push_back(DistributionTerm::dirac_term({0.5, 0.0}, 10.0));
    cfg.run.cg_max_iter = 1; // the spiky coefficient needs more than one iteration
    CHECK_THROWS_WITH_AS(run_net(cfg), doctest::Contains("net aborted"), Error);
}

TEST_CASE("net validation reports unresolvable epsilons") {
    NetConfig cfg = smooth_config();
    cfg.grid = GridSpec(1, 64, 1.0); // h too coarse for 2^-8
    std::vector<ValidationIssue> issues;
    cfg.validate(issues);
    bool cited = false;
    for (const auto& i : issues) cited = cited || i.message.find("UnresolvedKernel") != std::string::npos;
    CHECK(cited);
    CHECK_THROWS_AS(run_net(cfg), ValidationError);
}
