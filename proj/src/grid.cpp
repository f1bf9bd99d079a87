#include "mlnheat/grid.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace mlnheat {
namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace

GridSpec::GridSpec(int dim_, int n_, double box_) : dim(dim_), n(n_), box(box_) {
    std::vector<ValidationIssue> issues;
    if (dim != 1 && dim != 2) issues.push_back({"grid.dimension", "must be 1 or 2"});
    if (!power_of_two(n) || n < 16)
        issues.push_back({"grid.points_per_axis", "must be a power of two >= 16"});
    if (!(box > 0.0)) issues.push_back({"grid.box_length", "must be positive"});
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

double GridSpec::cell_volume() const {
    const double h = spacing();
    return dim == 1 ? h : h * h;
}

double GridSpec::wavenumber(int j) const {
    return 2.0 * std::numbers::pi * freq(j) / box;
}

Field::Field(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.points())
        throw GridMismatch("field has " + std::to_string(values_.size()) +
                           " values, grid wants " + std::to_string(grid_.points()));
    for (double v : values_)
        if (!std::isfinite(v)) throw Error("field contains a non-finite value");
}

Field Field::zero(const GridSpec& grid) {
    return Field(grid, std::vector<double>(grid.points(), 0.0));
}

Spectrum::Spectrum(GridSpec grid, std::vector<std::complex<double>> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.points())
        throw GridMismatch("spectrum has " + std::to_string(coeffs_.size()) +
                           " coefficients, grid wants " + std::to_string(grid_.points()));
}

Spectrum Spectrum::zero(const GridSpec& grid) {
    return Spectrum(grid, std::vector<std::complex<double>>(grid.points()));
}

std::complex<double> Spectrum::at(int m0, int m1) const {
    const int j0 = m0 >= 0 ? m0 : m0 + grid_.n;
    if (grid_.dim == 1) return coeffs_[static_cast<std::size_t>(j0)];
    const int j1 = m1 >= 0 ? m1 : m1 + grid_.n;
    return coeffs_[static_cast<std::size_t>(j0) * grid_.n + j1];
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
    if (!(a == b)) throw GridMismatch(where);
}

Field random_field(const GridSpec& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> v(grid.points());
    for (double& x : v) x = dist(rng);
    return Field(grid, std::move(v));
}

Field random_smooth_field(const GridSpec& grid, std::uint64_t seed, int max_mode) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const double k0 = 2.0 * std::numbers::pi / grid.box;
    if (grid.dim == 1) {
        std::vector<double> a(static_cast<std::size_t>(max_mode) + 1);
        std::vector<double> p(a.size());
        for (std::size_t m = 0; m <= static_cast<std::size_t>(max_mode); ++m) {
            a[m] = amp(rng);
            p[m] = phase(rng);
        }
        return Field::sample(grid, [&](double x) {
            double s = 0.0;
            for (std::size_t m = 0; m < a.size(); ++m) s += a[m] * std::cos(k0 * m * x + p[m]);
            return s;
        });
    }
    struct Mode { int mx, my; double a, p; };
    std::vector<Mode> modes;
    for (int mx = 0; mx <= max_mode; ++mx)
        for (int my = -max_mode; my <= max_mode; ++my)
            modes.push_back({mx, my, amp(rng), phase(rng)});
    return Field::sample(grid, [&](double x, double y) {
        double s = 0.0;
        for (const Mode& m : modes)
            s += m.a * std::cos(k0 * (m.mx * x + m.my * y) + m.p);
        return s;
    });
}

} // namespace mlnheat
