#pragma once
// Uniform periodic grid on the torus [0, box)^d, d in {1,2}, n a power of
// two per axis, together with the two value types everything else moves
// around: real Fields and their complex Spectra. Both are immutable in
// spirit -- operations take them by const reference and return new values.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <type_traits>
#include <vector>

#include "mlnheat/errors.hpp"

namespace mlnheat {

struct GridSpec {
    int dim = 1;          // d in {1,2}
    int n = 16;           // points per axis, power of two >= 16
    double box = 1.0;     // period, same along each axis

    GridSpec() = default;
    GridSpec(int dim_, int n_, double box_);

    std::size_t points() const {
        return dim == 1 ? static_cast<std::size_t>(n)
                        : static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    }
    double spacing() const { return box / n; }
    double cell_volume() const;

    // Coordinate of grid node i along one axis.
    double coord(int i) const { return spacing() * i; }

    // Signed integer frequency for DFT bin j: j for j < n/2, j - n otherwise.
    int freq(int j) const { return j < n / 2 ? j : j - n; }
    // Physical wavenumber 2*pi*m/box for bin j.
    double wavenumber(int j) const;

    bool operator==(const GridSpec&) const = default;
};

class Field {
public:
    Field(GridSpec grid, std::vector<double> values);
    static Field zero(const GridSpec& grid);
    // f(x) in 1-D, f(x, y) in 2-D, sampled at the grid nodes.
    template <typename F>
    static Field sample(const GridSpec& grid, F&& f);

    const GridSpec& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

private:
    GridSpec grid_;
    std::vector<double> values_;
};

class Spectrum {
public:
    Spectrum(GridSpec grid, std::vector<std::complex<double>> coeffs);
    static Spectrum zero(const GridSpec& grid);

    const GridSpec& grid() const { return grid_; }
    const std::vector<std::complex<double>>& coeffs() const { return coeffs_; }
    std::vector<std::complex<double>>& mutable_coeffs() { return coeffs_; }
    std::size_t size() const { return coeffs_.size(); }

    // Coefficient at integer frequency (m0) or (m0, m1), m in [-n/2, n/2).
    std::complex<double> at(int m0, int m1 = 0) const;

private:
    GridSpec grid_;
    std::vector<std::complex<double>> coeffs_;
};

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);

// Deterministic seeded fields for property checks.
Field random_field(const GridSpec& grid, std::uint64_t seed);
// Band-limited variant (modes |m|_inf <= max_mode), smooth enough for solves.
Field random_smooth_field(const GridSpec& grid, std::uint64_t seed, int max_mode);

template <typename F>
Field Field::sample(const GridSpec& grid, F&& f) {
    std::vector<double> v(grid.points());
    if (grid.dim == 1) {
        if constexpr (std::is_invocable_v<F&, double>) {
            for (int i = 0; i < grid.n; ++i) v[static_cast<std::size_t>(i)] = f(grid.coord(i));
        } else {
            throw GridMismatch("sample: callable does not accept a single coordinate");
        }
    } else {
        if constexpr (std::is_invocable_v<F&, double, double>) {
            std::size_t idx = 0;
            for (int i = 0; i < grid.n; ++i)
                for (int j = 0; j < grid.n; ++j) v[idx++] = f(grid.coord(i), grid.coord(j));
        } else {
            throw GridMismatch("sample: callable does not accept two coordinates");
        }
    }
    return Field(grid, std::move(v));
}

} // namespace mlnheat
