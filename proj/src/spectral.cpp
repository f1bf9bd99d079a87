#include "mlnheat/spectral.hpp"

#include <cmath>
#include <limits>

#include "fft.hpp"
#include "mlnheat/kernels/dispatch.hpp"

namespace mlnheat {
namespace {

constexpr double kSymmetryTol = 1e-10;

void transform(std::vector<std::complex<double>>& buf, const GridSpec& g, int sign) {
    if (g.dim == 1)
        detail::fft_pow2(buf.data(), g.n, sign);
    else
        detail::fft_2d(buf.data(), g.n, sign);
}

// |k|^{2s} with the zero mode mapped to zero; full lattice wavenumbers
// (the multiplier is even, so the Nyquist bin is kept).
std::vector<double> frac_power_table(const GridSpec& g, double exponent) {
    std::vector<double> m(g.points());
    if (g.dim == 1) {
        for (int j = 0; j < g.n; ++j) {
            const double k = g.wavenumber(j);
            m[static_cast<std::size_t>(j)] = j == 0 ? 0.0 : std::pow(k * k, 0.5 * exponent);
        }
    } else {
        std::size_t idx = 0;
        for (int i = 0; i < g.n; ++i) {
            const double ki = g.wavenumber(i);
            for (int j = 0; j < g.n; ++j, ++idx) {
                const double kj = g.wavenumber(j);
                const double ksq = ki * ki + kj * kj;
                m[idx] = ksq == 0.0 ? 0.0 : std::pow(ksq, 0.5 * exponent);
            }
        }
    }
    return m;
}

void require_order(double s) {
    if (!(s > 0.0 && s < 1.0)) throw InvalidOrder(s);
}

// Inverse for internally built spectra (multipliers applied to transforms of
// real fields): the exact result is real, so the rounding-level imaginary
// part is dropped without the symmetry check reserved for user input.
Field real_inverse(std::vector<std::complex<double>> buf, const GridSpec& g) {
    transform(buf, g, +1);
    std::vector<double> out(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real();
    return Field(g, std::move(out));
}

} // namespace

MultiplierTables::MultiplierTables(const GridSpec& g) : grid(g) {
    const std::size_t np = g.points();
    k_sq.assign(np, 0.0);
    const int nyq = g.n / 2;
    if (g.dim == 1) {
        axis_k[0].assign(np, 0.0);
        for (int j = 0; j < g.n; ++j) {
            const double k = j == nyq ? 0.0 : g.wavenumber(j);
            axis_k[0][static_cast<std::size_t>(j)] = k;
            k_sq[static_cast<std::size_t>(j)] = k * k;
        }
    } else {
        axis_k[0].assign(np, 0.0);
        axis_k[1].assign(np, 0.0);
        std::size_t idx = 0;
        for (int i = 0; i < g.n; ++i) {
            const double ki = i == nyq ? 0.0 : g.wavenumber(i);
            for (int j = 0; j < g.n; ++j, ++idx) {
                const double kj = j == nyq ? 0.0 : g.wavenumber(j);
                axis_k[0][idx] = ki;
                axis_k[1][idx] = kj;
                k_sq[idx] = ki * ki + kj * kj;
            }
        }
    }
}

std::vector<double> MultiplierTables::frac_half(double s) const {
    require_order(s);
    return frac_power_table(grid, s);
}

Spectrum forward_transform(const Field& u) {
    std::vector<std::complex<double>> buf(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) buf[i] = u[i];
    transform(buf, u.grid(), -1);
    const double scale = 1.0 / static_cast<double>(u.size());
    for (auto& c : buf) c *= scale;
    return Spectrum(u.grid(), std::move(buf));
}

Field inverse_transform(const Spectrum& U) {
    std::vector<std::complex<double>> buf = U.coeffs();
    transform(buf, U.grid(), +1);
    double max_abs = 0.0, max_im = 0.0;
    for (const auto& c : buf) {
        max_abs = std::max(max_abs, std::abs(c));
        max_im = std::max(max_im, std::fabs(c.imag()));
    }
    if (max_abs > 0.0 && max_im > kSymmetryTol * max_abs)
        throw SymmetryViolation(max_im / max_abs, kSymmetryTol);
    std::vector<double> out(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real();
    return Field(U.grid(), std::move(out));
}

Field inverse_transform_real(const Spectrum& U) {
    return real_inverse(U.coeffs(), U.grid());
}

Spectrum fractional_laplacian_half(const Spectrum& U, double s) {
    require_order(s);
    const std::vector<double> mult = frac_power_table(U.grid(), s);
    Spectrum out = U;
    kernels::ops().cscale_real(mult.data(), out.mutable_coeffs().data(), out.size());
    return out;
}

Field fractional_laplacian_half(const Field& u, double s) {
    const Spectrum f = fractional_laplacian_half(forward_transform(u), s);
    return real_inverse(f.coeffs(), f.grid());
}

std::vector<Field> gradient(const Field& u) {
    const GridSpec& g = u.grid();
    const MultiplierTables tables(g);
    const Spectrum U = forward_transform(u);
    std::vector<Field> out;
    out.reserve(static_cast<std::size_t>(g.dim));
    for (int axis = 0; axis < g.dim; ++axis) {
        std::vector<std::complex<double>> comp = U.coeffs();
        kernels::ops().cscale_imag(tables.axis_k[static_cast<std::size_t>(axis)].data(),
                                   comp.data(), comp.size());
        out.push_back(real_inverse(std::move(comp), g));
    }
    return out;
}

Field divergence(const std::vector<Field>& components) {
    if (components.empty()) throw GridMismatch("divergence of empty component list");
    const GridSpec& g = components.front().grid();
    if (static_cast<int>(components.size()) != g.dim)
        throw GridMismatch("divergence needs one component per axis");
    for (const Field& f : components) require_same_grid(g, f.grid(), "divergence components");
    const MultiplierTables tables(g);
    std::vector<std::complex<double>> acc(g.points(), 0.0);
    for (int axis = 0; axis < g.dim; ++axis) {
        Spectrum comp = forward_transform(components[static_cast<std::size_t>(axis)]);
        kernels::ops().cscale_imag(tables.axis_k[static_cast<std::size_t>(axis)].data(),
                                   comp.mutable_coeffs().data(), comp.size());
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += comp.coeffs()[i];
    }
    return real_inverse(std::move(acc), g);
}

double l2_norm(const Field& u) {
    return std::sqrt(u.grid().cell_volume() * kernels::ops().sum_sq(u.values().data(), u.size()));
}

double l2_inner(const Field& u, const Field& v) {
    require_same_grid(u.grid(), v.grid(), "l2 inner product");
    return u.grid().cell_volume() * kernels::ops().dot(u.values().data(), v.values().data(), u.size());
}

double grad_sq_norm(const Spectrum& U) {
    const MultiplierTables tables(U.grid());
    const double vol = U.grid().dim == 1 ? U.grid().box : U.grid().box * U.grid().box;
    return vol * kernels::ops().weighted_sum_sq_cplx(tables.k_sq.data(), U.coeffs().data(), U.size());
}

double frac_sq_norm(const Spectrum& U, double s) {
    require_order(s);
    const std::vector<double> mult = frac_power_table(U.grid(), 2.0 * s);
    const double vol = U.grid().dim == 1 ? U.grid().box : U.grid().box * U.grid().box;
    return vol * kernels::ops().weighted_sum_sq_cplx(mult.data(), U.coeffs().data(), U.size());
}

NormSet field_norms(const Field& u, double s) {
    require_order(s);
    NormSet out;
    out.l2 = l2_norm(u);
    const Spectrum U = forward_transform(u);
    out.h1 = std::sqrt(out.l2 * out.l2 + grad_sq_norm(U));
    out.hs_seminorm = std::sqrt(frac_sq_norm(U, s));
    return out;
}

} // namespace mlnheat
