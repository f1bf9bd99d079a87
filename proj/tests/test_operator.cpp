#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mlnheat/mixed_operator.hpp"
#include "mlnheat/spectral.hpp"

using namespace mlnheat;
using std::numbers::pi;

namespace {

double sup_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

double sup_abs(const Field& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i]));
    return m;
}

OperatorData constant_data(const GridSpec& g, double a0, double b0, double c0, double s) {
    return OperatorData(Field::sample(g, [&](double) { return a0; }),
                        Field::sample(g, [&](double) { return b0; }),
                        Field::sample(g, [&](double) { return c0; }), s, a0, b0, c0);
}

Field scaled(const Field& f, double k) {
    std::vector<double> v = f.values();
    for (double& x : v) x *= k;
    return Field(f.grid(), std::move(v));
}

} // namespace

TEST_CASE("operator data validates floors, order, and grids") {
    const GridSpec g(1, 64, 2.0 * pi);
    const Field one = Field::sample(g, [](double) { return 1.0; });
    CHECK_THROWS_AS(OperatorData(one, one, one, 0.5, 1.0, 1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(OperatorData(one, one, one, 1.2, 1.0, 1.0, 1.0), InvalidOrder);
    CHECK_THROWS_AS(OperatorData(one, one, one, 0.5, 2.0, 1.0, 1.0), PositivityViolation);
    const Field other = Field::zero(GridSpec(1, 32, 2.0 * pi));
    CHECK_THROWS_AS(OperatorData(one, one, other, 0.5, 1.0, 1.0, 1.0), GridMismatch);
    const Field u = Field::zero(GridSpec(1, 32, 2.0 * pi));
    const OperatorData P = constant_data(g, 1.0, 1.0, 1.0, 0.5);
    CHECK_THROWS_AS(apply_operator(P, u), GridMismatch);
}

TEST_CASE("constant coefficients act diagonally on Fourier modes") {
    const GridSpec g(1, 64, 2.0 * pi);
    const double s = 0.5;
    const OperatorData P = constant_data(g, 2.0, 1.5, 0.7, s);
    for (int m : {1, 3, 7}) {
        const double k = static_cast<double>(m);
        const double lambda = 2.0 * k * k + 1.5 * std::pow(k, 2.0 * s) + 0.7;
        const Field u = Field::sample(g, [&](double x) { return std::cos(k * x); });
        const Field lu = apply_operator(P, u);
        const Field expect = Field::sample(g, [&](double x) { return lambda * std::cos(k * x); });
        CHECK(sup_diff(lu, expect) <= 1e-12 * lambda);
    }
    // Every represented mode below Nyquist matches the diagonal symbol.
    const Field noise = random_field(g, 31);
    const Spectrum lu_hat = forward_transform(apply_operator(P, noise));
    const Spectrum u_hat = forward_transform(noise);
    for (int j = 0; j < g.n; ++j) {
        if (j == g.n / 2) continue; // odd-derivative multiplier is zeroed there
        const double k = g.wavenumber(j);
        const double lambda = 2.0 * k * k + 1.5 * std::pow(std::fabs(k), 2.0 * s) + 0.7;
        const auto expect = lambda * u_hat.coeffs()[static_cast<std::size_t>(j)];
        CHECK(std::abs(lu_hat.coeffs()[static_cast<std::size_t>(j)] - expect) <=
              1e-12 * std::max(1.0, lambda * std::abs(u_hat.coeffs()[static_cast<std::size_t>(j)])));
    }
}

TEST_CASE("operator kills gradients of constants: L(1) = c") {
    const GridSpec g(1, 64, 2.0 * pi);
    const Field a = Field::sample(g, [](double x) { return 2.0 + std::sin(x); });
    const Field b = Field::sample(g, [](double x) { return 1.0 + 0.5 * std::cos(2.0 * x); });
    const Field c = Field::sample(g, [](double x) { return 1.5 + std::cos(x); });
    const OperatorData P(a, b, c, 0.4, 1.0, 0.5, 0.5);
    const Field one = Field::sample(g, [](double) { return 1.0; });
    CHECK(sup_diff(apply_operator(P, one), c) < 1e-11);
}

TEST_CASE("variable-coefficient application matches an 8x-resolution reference") {
    // a = 2 + sin x, b = c = 1, u = cos x: every term is band-limited, so the
    // fine-grid evaluation restricted to the coarse grid is the exact answer.
    const auto make = [](int n) {
        const GridSpec g(1, n, 2.0 * pi);
        const Field a = Field::sample(g, [](double x) { return 2.0 + std::sin(x); });
        const Field one = Field::sample(g, [](double) { return 1.0; });
        return OperatorData(a, one, one, 0.5, 1.0, 1.0, 1.0);
    };
    const OperatorData coarse = make(64);
    const OperatorData fine = make(512);
    const Field uc = Field::sample(coarse.grid(), [](double x) { return std::cos(x); });
    const Field uf = Field::sample(fine.grid(), [](double x) { return std::cos(x); });
    const Field lc = apply_operator(coarse, uc);
    const Field lf = apply_operator(fine, uf);
    double worst = 0.0;
    for (int i = 0; i < 64; ++i)
        worst = std::max(worst, std::fabs(lc[static_cast<std::size_t>(i)] -
                                          lf[static_cast<std::size_t>(i) * 8]));
    CHECK(worst <= 1e-8 * sup_abs(lf));
}

TEST_CASE("bilinear form: closed form, zero argument, duality with L") {
    const GridSpec g(1, 64, 2.0 * pi);
    const OperatorData P = constant_data(g, 1.0, 1.0, 1.0, 0.5);
    const Field u = Field::sample(g, [](double x) { return std::cos(x); });
    CHECK(bilinear_form(P, u, u) == doctest::Approx(3.0 * pi).epsilon(1e-12));
    CHECK(bilinear_form(P, u, Field::zero(g)) == 0.0);

    for (int dim : {1, 2}) {
        const GridSpec gr(dim, 32, 5.0);
        const Field a = Field::sample(gr, [](double x, double y = 0.0) {
            return 2.0 + std::sin(2.0 * pi * x / 5.0) * std::cos(2.0 * pi * y / 5.0);
        });
        const Field b = Field::sample(gr, [](double x, double y = 0.0) {
            return 1.0 + 0.25 * std::cos(2.0 * pi * (x + y) / 5.0);
        });
        const Field c = Field::sample(gr, [](double, double = 0.0) { return 0.8; });
        const OperatorData Pv(a, b, c, 0.6, 1.0, 0.75, 0.8);
        for (std::uint64_t seed : {10u, 20u, 30u}) {
            const Field x = random_field(gr, seed);
            const Field y = random_field(gr, seed + 1000);
            const double duality = l2_inner(apply_operator(Pv, x), y);
            const double form = bilinear_form(Pv, x, y);
            const double scale = std::sqrt(bilinear_form(Pv, x, x) * bilinear_form(Pv, y, y));
            CHECK(std::fabs(duality - form) <= 1e-10 * scale);
            CHECK(std::fabs(form - bilinear_form(Pv, y, x)) <= 1e-12 * scale);
            // Boundedness with the paper-style product of norm sums.
            const NormSet nx = field_norms(x, 0.6);
            const NormSet ny = field_norms(y, 0.6);
            const double supsum = 3.0 + 1.25 + 0.8; // sup a + sup b + sup c bound
            CHECK(std::fabs(form) <= supsum * (nx.h1 + nx.hs_seminorm) * (ny.h1 + ny.hs_seminorm));
        }
    }
}

TEST_CASE("energy breakdown: closed form, homogeneity, relation to B") {
    const GridSpec g(1, 64, 2.0 * pi);
    const OperatorData P = constant_data(g, 1.0, 1.0, 1.0, 0.5);

    const EnergyBreakdown z = energy(P, Field::zero(g));
    CHECK(z.total == 0.0);

    const Field u = Field::sample(g, [](double x) { return std::cos(x); });
    const EnergyBreakdown e = energy(P, u);
    CHECK(e.l2_sq == doctest::Approx(pi).epsilon(1e-12));
    CHECK(e.grad_w_sq == doctest::Approx(pi).epsilon(1e-12));
    CHECK(e.frac_w_sq == doctest::Approx(pi).epsilon(1e-12));
    CHECK(e.mass_w_sq == doctest::Approx(pi).epsilon(1e-12));
    CHECK(e.total == doctest::Approx(4.0 * pi).epsilon(1e-12));

    const EnergyBreakdown e2 = energy(P, scaled(u, 2.0));
    CHECK(e2.l2_sq == doctest::Approx(4.0 * e.l2_sq).epsilon(1e-12));
    CHECK(e2.total == doctest::Approx(4.0 * e.total).epsilon(1e-12));

    const Field r = random_field(g, 77);
    const EnergyBreakdown er = energy(P, r);
    const double via_form = er.l2_sq + bilinear_form(P, r, r);
    CHECK(std::fabs(er.total - via_form) <= 1e-10 * er.total);
}

TEST_CASE("coercivity margin: equality at the floors, nonnegative above them") {
    const GridSpec g(1, 64, 2.0 * pi);
    const OperatorData Pfloor = constant_data(g, 1.3, 0.9, 0.4, 0.5);
    const Field u = random_field(g, 3);
    const double m0 = coercivity_margin(Pfloor, u);
    CHECK(std::fabs(m0) <= 1e-12 * bilinear_form(Pfloor, u, u));
    CHECK(coercivity_margin(Pfloor, Field::zero(g)) == 0.0);

    const Field a = Field::sample(g, [](double x) { return 1.0 + 0.5 * (1.0 + std::sin(x)); });
    const Field b = Field::sample(g, [](double x) { return 0.5 + 0.25 * (1.0 + std::cos(3 * x)); });
    const Field c = Field::sample(g, [](double x) { return 0.2 + 0.1 * (1.0 + std::cos(x)); });
    const OperatorData P(a, b, c, 0.35, 1.0, 0.5, 0.2);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Field v = random_field(g, 1000 + seed);
        CHECK(coercivity_margin(P, v) >= -1e-10 * bilinear_form(P, v, v));
    }
}

TEST_CASE("a priori constant: paper arithmetic and monotonicity") {
    const GridSpec g(1, 32, 2.0 * pi);
    CHECK(apriori_constant(constant_data(g, 1.0, 1.0, 1.0, 0.5)) == doctest::Approx(24.0));

    const Field two = Field::sample(g, [](double) { return 2.0; });
    const Field half = Field::sample(g, [](double) { return 0.5; });
    const OperatorData P2(two, two, half, 0.5, 2.0, 2.0, 0.5);
    CHECK(apriori_constant(P2) == doctest::Approx(22.0));

    const Field bigger_c = Field::sample(g, [](double) { return 0.9; });
    const OperatorData P3(two, two, bigger_c, 0.5, 2.0, 2.0, 0.5);
    CHECK(apriori_constant(P3) > apriori_constant(P2));
}

TEST_CASE("gagliardo pair sum: zero field, homogeneity, guards") {
    const GridSpec g(1, 128, 2.0 * pi);
    const Field zero = Field::zero(g);
    CHECK(gagliardo_seminorm_bruteforce(zero, 0.5, 1.0).value == 0.0);

    const Field bump = Field::sample(g, [&](double x) {
        const double t = (x - pi) / 1.0;
        return std::fabs(t) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t * t)) : 0.0;
    });
    const auto r1 = gagliardo_seminorm_bruteforce(bump, 0.5, pi);
    const auto r2 = gagliardo_seminorm_bruteforce(scaled(bump, 2.0), 0.5, pi);
    CHECK(r2.value == doctest::Approx(4.0 * r1.value).epsilon(1e-14));
    CHECK(r1.tail_bound > 0.0);

    CHECK_THROWS_AS(gagliardo_seminorm_bruteforce(bump, 0.5, 4.0), ValidationError);
    const Field wide = Field::sample(g, [](double x) { return std::cos(x); });
    CHECK_THROWS_AS(gagliardo_seminorm_bruteforce(wide, 0.5, pi), SupportViolation);
    const GridSpec big(2, 256, 2.0 * pi);
    CHECK_THROWS_AS(gagliardo_seminorm_bruteforce(Field::zero(big), 0.5, pi), CostGuard);
}

TEST_CASE("gagliardo pair sum is proportional to the spectral seminorm") {
    const GridSpec g(1, 128, 2.0 * pi);
    const double widths[] = {0.45, 0.5, 0.55, 0.6, 0.65};
    for (double s : {0.3, 0.5, 0.7}) {
        double lo = 1e300, hi = 0.0;
        for (int i = 0; i < 5; ++i) {
            const double c = pi + 0.15 * (i - 2);
            const double w = widths[i];
            const Field u = Field::sample(g, [&](double x) {
                const double t = (x - c) / w;
                return std::fabs(t) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t * t)) : 0.0;
            });
            const double brute = gagliardo_seminorm_bruteforce(u, s, pi).value;
            const double spectral = frac_sq_norm(forward_transform(u), s);
            const double ratio = brute / spectral;
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        CHECK((hi - lo) / (0.5 * (hi + lo)) < 0.10);
    }
}
