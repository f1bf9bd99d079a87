// AVX2 + FMA kernels. This translation unit is compiled with -mavx2 -mfma
// and only ever entered through the dispatch table after a cpuid check.

#include "mlnheat/kernels/dispatch.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace mlnheat::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

// [m0,m1] -> [m0,m0,m1,m1], pairing one real factor per complex slot.
inline __m256d pair_expand(const double* m) {
    return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(m)), 0x50);
}

double k_sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i];
    return s;
}

double k_sum_sq(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * x[i];
    return s;
}

double k_dot(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

double k_weighted_dot(const double* w, const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d wx = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
        acc = _mm256_fmadd_pd(wx, _mm256_loadu_pd(y + i), acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += w[i] * x[i] * y[i];
    return s;
}

double k_max_abs(const double* x, std::size_t n) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffll));
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_max_pd(acc, _mm256_and_pd(mask, _mm256_loadu_pd(x + i)));
    __m128d lo = _mm_max_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
    double m = _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
    for (; i < n; ++i) m = std::max(m, std::fabs(x[i]));
    return m;
}

double k_min_val(const double* x, std::size_t n) {
    if (n == 0) return 0.0;
    double m = x[0];
    std::size_t i = 0;
    if (n >= 4) {
        __m256d acc = _mm256_loadu_pd(x);
        for (i = 4; i + 4 <= n; i += 4) acc = _mm256_min_pd(acc, _mm256_loadu_pd(x + i));
        __m128d lo = _mm_min_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
        m = _mm_cvtsd_f64(_mm_min_sd(lo, _mm_unpackhi_pd(lo, lo)));
    }
    for (; i < n; ++i) m = std::min(m, x[i]);
    return m;
}

double k_weighted_sum_sq_cplx(const double* w, const std::complex<double>* c, std::size_t n) {
    const double* cv = reinterpret_cast<const double*>(c);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d v = _mm256_loadu_pd(cv + 2 * i);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(v, v), pair_expand(w + i), acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += w[i] * std::norm(c[i]);
    return s;
}

void k_axpy(double a, const double* x, double* y, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, r);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void k_xpby(const double* x, double b, double* y, std::size_t n) {
    const __m256d bv = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_fmadd_pd(bv, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, r);
    }
    for (; i < n; ++i) y[i] = x[i] + b * y[i];
}

void k_mul(const double* x, const double* y, double* z, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(z + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) z[i] = x[i] * y[i];
}

void k_scale(double a, double* x, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

void k_cscale_real(const double* m, std::complex<double>* c, std::size_t n) {
    double* cv = reinterpret_cast<double*>(c);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d r = _mm256_mul_pd(_mm256_loadu_pd(cv + 2 * i), pair_expand(m + i));
        _mm256_storeu_pd(cv + 2 * i, r);
    }
    for (; i < n; ++i) c[i] *= m[i];
}

void k_cscale_imag(const double* k, std::complex<double>* c, std::size_t n) {
    // c <- i*k*c: (re,im) -> (-k*im, k*re)
    const __m256d flip_even = _mm256_set_pd(0.0, -0.0, 0.0, -0.0);
    double* cv = reinterpret_cast<double*>(c);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d sw = _mm256_permute_pd(_mm256_loadu_pd(cv + 2 * i), 0x5);
        __m256d ks = _mm256_xor_pd(pair_expand(k + i), flip_even);
        _mm256_storeu_pd(cv + 2 * i, _mm256_mul_pd(sw, ks));
    }
    for (; i < n; ++i)
        c[i] = std::complex<double>(-k[i] * c[i].imag(), k[i] * c[i].real());
}

void k_cmul(const std::complex<double>* a, std::complex<double>* c, std::size_t n) {
    const double* av = reinterpret_cast<const double*>(a);
    double* cv = reinterpret_cast<double*>(c);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(av + 2 * i);
        __m256d vc = _mm256_loadu_pd(cv + 2 * i);
        __m256d are = _mm256_movedup_pd(va);
        __m256d aim = _mm256_permute_pd(va, 0xF);
        __m256d csw = _mm256_permute_pd(vc, 0x5);
        _mm256_storeu_pd(cv + 2 * i, _mm256_fmaddsub_pd(are, vc, _mm256_mul_pd(aim, csw)));
    }
    for (; i < n; ++i) {
        const double re = a[i].real() * c[i].real() - a[i].imag() * c[i].imag();
        const double im = a[i].real() * c[i].imag() + a[i].imag() * c[i].real();
        c[i] = std::complex<double>(re, im);
    }
}

} // namespace

const Ops* avx2_ops() {
    static const Ops table = {
        k_sum,  k_sum_sq, k_dot,  k_weighted_dot, k_max_abs, k_min_val, k_weighted_sum_sq_cplx,
        k_axpy, k_xpby,   k_mul,  k_scale,
        k_cscale_real, k_cscale_imag, k_cmul,
    };
    return &table;
}

} // namespace mlnheat::kernels

#else

namespace mlnheat::kernels {
const Ops* avx2_ops() { return nullptr; }
} // namespace mlnheat::kernels

#endif
