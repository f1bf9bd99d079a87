// Scalar reference kernels. These define the semantics the SIMD variants
// must reproduce; keep them obvious.

#include "mlnheat/kernels/dispatch.hpp"

#include <cmath>

namespace mlnheat::kernels {
namespace {

double k_sum(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double k_sum_sq(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
    return s;
}

double k_dot(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

double k_weighted_dot(const double* w, const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * x[i] * y[i];
    return s;
}

double k_max_abs(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
    return m;
}

double k_min_val(const double* x, std::size_t n) {
    if (n == 0) return 0.0;
    double m = x[0];
    for (std::size_t i = 1; i < n; ++i) m = std::min(m, x[i]);
    return m;
}

double k_weighted_sum_sq_cplx(const double* w, const std::complex<double>* c, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * std::norm(c[i]);
    return s;
}

void k_axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void k_xpby(const double* x, double b, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + b * y[i];
}

void k_mul(const double* x, const double* y, double* z, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) z[i] = x[i] * y[i];
}

void k_scale(double a, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void k_cscale_real(const double* m, std::complex<double>* c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) c[i] *= m[i];
}

void k_cscale_imag(const double* k, std::complex<double>* c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        c[i] = std::complex<double>(-k[i] * c[i].imag(), k[i] * c[i].real());
}

void k_cmul(const std::complex<double>* a, std::complex<double>* c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double re = a[i].real() * c[i].real() - a[i].imag() * c[i].imag();
        const double im = a[i].real() * c[i].imag() + a[i].imag() * c[i].real();
        c[i] = std::complex<double>(re, im);
    }
}

} // namespace

const Ops& scalar_ops() {
    static const Ops table = {
        k_sum,  k_sum_sq, k_dot,  k_weighted_dot, k_max_abs, k_min_val, k_weighted_sum_sq_cplx,
        k_axpy, k_xpby,   k_mul,  k_scale,
        k_cscale_real, k_cscale_imag, k_cmul,
    };
    return table;
}

} // namespace mlnheat::kernels
