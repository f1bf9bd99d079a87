#pragma once
// Runtime-dispatched arithmetic kernels for the hot inner loops:
// BLAS-1 style vector ops, weighted reductions, and pointwise complex
// multiplier application in spectral space. Every entry has a scalar
// reference implementation and (on x86-64 with AVX2) a vectorized one;
// the two are equivalence-tested against each other.

#include <complex>
#include <cstddef>

namespace mlnheat::kernels {

enum class Isa { scalar, avx2 };

struct Ops {
    // Reductions.
    double (*sum)(const double* x, std::size_t n);
    double (*sum_sq)(const double* x, std::size_t n);
    double (*dot)(const double* x, const double* y, std::size_t n);
    // sum_i w[i] * x[i] * y[i]
    double (*weighted_dot)(const double* w, const double* x, const double* y, std::size_t n);
    double (*max_abs)(const double* x, std::size_t n);
    double (*min_val)(const double* x, std::size_t n);
    // sum_i w[i] * |c[i]|^2
    double (*weighted_sum_sq_cplx)(const double* w, const std::complex<double>* c, std::size_t n);

    // Vector updates.
    void (*axpy)(double a, const double* x, double* y, std::size_t n);       // y += a*x
    void (*xpby)(const double* x, double b, double* y, std::size_t n);       // y = x + b*y
    void (*mul)(const double* x, const double* y, double* z, std::size_t n); // z = x*y
    void (*scale)(double a, double* x, std::size_t n);                       // x *= a

    // Spectral multipliers (complex arrays are interleaved re,im).
    void (*cscale_real)(const double* m, std::complex<double>* c, std::size_t n);   // c[i] *= m[i]
    void (*cscale_imag)(const double* k, std::complex<double>* c, std::size_t n);   // c[i] *= i*k[i]
    void (*cmul)(const std::complex<double>* a, std::complex<double>* c, std::size_t n); // c[i] *= a[i]
};

// Kernel table in use. Selected once per process: AVX2 when the CPU has it,
// scalar otherwise; the MLNHEAT_KERNELS environment variable (scalar|avx2|auto)
// and force_isa() override.
const Ops& ops();

Isa active_isa();
bool avx2_available();

// Force a specific table (used by the equivalence tests and the CLI).
// Throws Error if the requested ISA is not available on this machine.
void force_isa(Isa isa);

const Ops& scalar_ops();
const Ops* avx2_ops(); // nullptr when unavailable

} // namespace mlnheat::kernels
