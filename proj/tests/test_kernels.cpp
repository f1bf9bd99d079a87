// Equivalence tests: every SIMD kernel must reproduce the scalar reference
// on awkward lengths (remainder loops) and random data. FMA changes the
// rounding of individual elements, so comparisons are tolerance-based.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>
#include <vector>

#include "mlnheat/kernels/dispatch.hpp"

using namespace mlnheat;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

std::vector<std::complex<double>> random_cvec(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::vector<std::complex<double>> v(n);
    for (auto& c : v) c = {dist(rng), dist(rng)};
    return v;
}

bool close_rel(double a, double b, double tol, double scale = 1.0) {
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), scale});
}

const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 15, 33, 64, 257, 1000};

} // namespace

TEST_CASE("reduction kernels match scalar reference") {
    if (!kernels::avx2_available()) {
        MESSAGE("AVX2 unavailable; skipping equivalence checks");
        return;
    }
    const auto& sc = kernels::scalar_ops();
    const auto& vx = *kernels::avx2_ops();
    for (std::size_t n : kLengths) {
        auto x = random_vec(n, 11 + n);
        auto y = random_vec(n, 23 + n);
        auto w = random_vec(n, 37 + n);
        auto c = random_cvec(n, 41 + n);
        CHECK(close_rel(sc.sum(x.data(), n), vx.sum(x.data(), n), 1e-13, double(n)));
        CHECK(close_rel(sc.sum_sq(x.data(), n), vx.sum_sq(x.data(), n), 1e-13, double(n)));
        CHECK(close_rel(sc.dot(x.data(), y.data(), n), vx.dot(x.data(), y.data(), n), 1e-13,
                        double(n)));
        CHECK(close_rel(sc.weighted_dot(w.data(), x.data(), y.data(), n),
                        vx.weighted_dot(w.data(), x.data(), y.data(), n), 1e-13, double(n)));
        CHECK(sc.max_abs(x.data(), n) == vx.max_abs(x.data(), n));
        CHECK(sc.min_val(x.data(), n) == vx.min_val(x.data(), n));
        CHECK(close_rel(sc.weighted_sum_sq_cplx(w.data(), c.data(), n),
                        vx.weighted_sum_sq_cplx(w.data(), c.data(), n), 1e-13, double(n)));
    }
}

TEST_CASE("update kernels match scalar reference") {
    if (!kernels::avx2_available()) return;
    const auto& sc = kernels::scalar_ops();
    const auto& vx = *kernels::avx2_ops();
    for (std::size_t n : kLengths) {
        const auto x = random_vec(n, 3 + n);
        const auto y0 = random_vec(n, 5 + n);

        auto ys = y0, yv = y0;
        sc.axpy(0.7, x.data(), ys.data(), n);
        vx.axpy(0.7, x.data(), yv.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(close_rel(ys[i], yv[i], 1e-15));

        ys = y0; yv = y0;
        sc.xpby(x.data(), -1.3, ys.data(), n);
        vx.xpby(x.data(), -1.3, yv.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(close_rel(ys[i], yv[i], 1e-15));

        std::vector<double> zs(n), zv(n);
        sc.mul(x.data(), y0.data(), zs.data(), n);
        vx.mul(x.data(), y0.data(), zv.data(), n);
        CHECK(zs == zv); // plain products, bit-identical

        ys = y0; yv = y0;
        sc.scale(0.31, ys.data(), n);
        vx.scale(0.31, yv.data(), n);
        CHECK(ys == yv);
    }
}

TEST_CASE("complex multiplier kernels match scalar reference") {
    if (!kernels::avx2_available()) return;
    const auto& sc = kernels::scalar_ops();
    const auto& vx = *kernels::avx2_ops();
    for (std::size_t n : kLengths) {
        const auto c0 = random_cvec(n, 7 + n);
        const auto m = random_vec(n, 13 + n);
        const auto a = random_cvec(n, 17 + n);

        auto cs = c0, cv = c0;
        sc.cscale_real(m.data(), cs.data(), n);
        vx.cscale_real(m.data(), cv.data(), n);
        CHECK(cs == cv);

        cs = c0; cv = c0;
        sc.cscale_imag(m.data(), cs.data(), n);
        vx.cscale_imag(m.data(), cv.data(), n);
        CHECK(cs == cv);

        cs = c0; cv = c0;
        sc.cmul(a.data(), cs.data(), n);
        vx.cmul(a.data(), cv.data(), n);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(close_rel(cs[i].real(), cv[i].real(), 1e-15));
            CHECK(close_rel(cs[i].imag(), cv[i].imag(), 1e-15));
        }
    }
}

TEST_CASE("dispatch honors forcing and reports an ISA") {
    const auto isa = kernels::active_isa();
    CHECK((isa == kernels::Isa::scalar || isa == kernels::Isa::avx2));
    kernels::force_isa(kernels::Isa::scalar);
    CHECK(kernels::active_isa() == kernels::Isa::scalar);
    CHECK(kernels::ops().sum != nullptr);
    if (kernels::avx2_available()) {
        kernels::force_isa(kernels::Isa::avx2);
        CHECK(kernels::active_isa() == kernels::Isa::avx2);
    }
    kernels::force_isa(isa); // restore
}
