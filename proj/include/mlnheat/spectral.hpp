#pragma once
// Discrete Fourier transforms on the periodic grid and the multiplier
// operators built on them: classical derivatives, the half-power
// fractional Laplacian, and the L2/H1/Hs norms.
//
// Conventions, fixed once here and relied on everywhere else:
//   * forward transform divides by n^d, so the coefficient at frequency m
//     is the average of the field against that mode (a constant field has
//     coefficient 1 at m = 0 and nothing else);
//   * odd-order derivative multipliers (gradient, divergence) vanish on
//     the Nyquist bin m = -n/2: the sampled derivative of the Nyquist
//     cosine is identically zero on the grid, and keeping the bin would
//     break conjugate symmetry;
//   * |k|^s keeps the Nyquist bin (the multiplier is even) and maps the
//     zero mode to zero.

#include <array>
#include <vector>

#include "mlnheat/grid.hpp"

namespace mlnheat {

Spectrum forward_transform(const Field& u);

// Throws SymmetryViolation when the relative imaginary residue of the
// complex inverse exceeds 1e-10 (a corrupted, non-symmetric spectrum).
Field inverse_transform(const Spectrum& U);

// Inverse for spectra that are conjugate-symmetric by construction
// (multipliers applied to, or products of, transforms of real fields);
// discards the rounding-level imaginary part without the check above.
Field inverse_transform_real(const Spectrum& U);

// (-Delta)^{s/2}: Fourier multiplier |k|^s, 0 < s < 1.
Field fractional_laplacian_half(const Field& u, double s);
Spectrum fractional_laplacian_half(const Spectrum& U, double s);

// Spectral gradient; component j has spectrum i*k_j*u_hat.
std::vector<Field> gradient(const Field& u);
Field divergence(const std::vector<Field>& components);

struct NormSet {
    double l2 = 0.0;          // (h^d sum u^2)^{1/2}, physical quadrature
    double h1 = 0.0;          // (l2^2 + |grad u|_{L2}^2)^{1/2}
    double hs_seminorm = 0.0; // |(-Delta)^{s/2} u|_{L2}, spectral
};
NormSet field_norms(const Field& u, double s);

double l2_norm(const Field& u);
double l2_inner(const Field& u, const Field& v);
// |grad u|_{L2}^2 and |(-Delta)^{s/2} u|_{L2}^2 evaluated from one spectrum.
double grad_sq_norm(const Spectrum& U);
double frac_sq_norm(const Spectrum& U, double s);

// Multiplier tables for one grid, shared by the operator and the stepper.
struct MultiplierTables {
    explicit MultiplierTables(const GridSpec& grid);
    GridSpec grid;
    std::array<std::vector<double>, 2> axis_k; // i*k_j multiplier input, Nyquist zeroed
    std::vector<double> k_sq;                  // sum_j k_j^2, Nyquist zeroed per axis
    std::vector<double> frac_half(double s) const; // |k|^s, zero mode -> 0
};

} // namespace mlnheat
