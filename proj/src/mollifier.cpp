#include "mlnheat/mollifier.hpp"

#include <cmath>
#include <numbers>

#include "mlnheat/kernels/dispatch.hpp"

namespace mlnheat {
namespace {

using std::numbers::pi;

constexpr double kGaussSigma = 0.25; // support radius 1 = 4 sigma

double bump_raw(double t) {
    const double t2 = t * t;
    if (t2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - t2));
}

// Composite Simpson; enough for the smooth bump profile.
template <typename F>
double simpson(F&& f, double a, double b, int intervals) {
    const double h = (b - a) / intervals;
    double s = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

double bump_mass(int dim) {
    static const double mass1 = simpson([](double t) { return bump_raw(t); }, -1.0, 1.0, 1 << 16);
    static const double mass2 =
        2.0 * pi * simpson([](double r) { return bump_raw(r) * r; }, 0.0, 1.0, 1 << 16);
    return dim == 1 ? mass1 : mass2;
}

double gauss_mass(int dim) {
    if (dim == 1)
        return kGaussSigma * std::sqrt(2.0 * pi) *
               std::erf(1.0 / (kGaussSigma * std::sqrt(2.0)));
    return 2.0 * pi * kGaussSigma * kGaussSigma *
           (1.0 - std::exp(-1.0 / (2.0 * kGaussSigma * kGaussSigma)));
}

double hat_mass(int dim) { return dim == 1 ? 1.0 : pi / 3.0; }

double min_image(double dx, double box) { return dx - box * std::round(dx / box); }

} // namespace

double MollifierSpec::omega(double eps) const {
    if (!(scale_power > 0.0))
        throw ValidationError("mollifier.scale_power", "must be positive");
    if (!(eps > 0.0 && eps <= 1.0))
        throw ValidationError("epsilon", "must lie in (0, 1]");
    return std::pow(eps, scale_power);
}

double mollifier_profile(MollifierProfile profile, int dim, double r) {
    r = std::fabs(r);
    switch (profile) {
        case MollifierProfile::bump:
            return bump_raw(r) / bump_mass(dim);
        case MollifierProfile::hat:
            return r >= 1.0 ? 0.0 : (1.0 - r) / hat_mass(dim);
        case MollifierProfile::truncated_gaussian:
            if (r >= 1.0) return 0.0;
            return std::exp(-r * r / (2.0 * kGaussSigma * kGaussSigma)) / gauss_mass(dim);
    }
    return 0.0;
}

double mollifier_profile_derivative(MollifierProfile profile, int order, double t) {
    if (order != 1 && order != 2)
        throw ValidationError("dirac_derivative.order", "must be 1 or 2");
    const double t2 = t * t;
    switch (profile) {
        case MollifierProfile::bump: {
            if (t2 >= 1.0) return 0.0;
            const double psi = bump_raw(t) / bump_mass(1);
            const double om = 1.0 - t2;
            const double g = -2.0 * t / (om * om);
            if (order == 1) return psi * g;
            const double gp = -2.0 * (1.0 + 3.0 * t2) / (om * om * om);
            return psi * (g * g + gp);
        }
        case MollifierProfile::hat: {
            if (order == 2)
                throw ValidationError("dirac_derivative",
                                      "hat profile has no classical second derivative");
            if (t2 >= 1.0 || t == 0.0) return 0.0;
            return t > 0.0 ? -1.0 : 1.0;
        }
        case MollifierProfile::truncated_gaussian: {
            if (t2 >= 1.0) return 0.0;
            const double s2 = kGaussSigma * kGaussSigma;
            const double psi =
                std::exp(-t2 / (2.0 * s2)) / gauss_mass(1);
            if (order == 1) return psi * (-t / s2);
            return psi * (t2 / (s2 * s2) - 1.0 / s2);
        }
    }
    return 0.0;
}

void check_mollifier_resolution(const MollifierSpec& m, double eps, const GridSpec& grid) {
    const double om = m.omega(eps);
    if (om < 2.0 * grid.spacing()) throw UnresolvedKernel(om, grid.spacing());
    if (!(om < 0.5 * grid.box)) throw KernelTooWide(om, grid.box);
}

Field sample_mollifier_raw(const MollifierSpec& m, double eps, const GridSpec& grid,
                           const std::array<double, 2>& center) {
    check_mollifier_resolution(m, eps, grid);
    const double om = m.omega(eps);
    const double scale = grid.dim == 1 ? 1.0 / om : 1.0 / (om * om);
    if (grid.dim == 1) {
        return Field::sample(grid, [&](double x) {
            const double r = min_image(x - center[0], grid.box) / om;
            return scale * mollifier_profile(m.profile, 1, r);
        });
    }
    return Field::sample(grid, [&](double x, double y) {
        const double dx = min_image(x - center[0], grid.box);
        const double dy = min_image(y - center[1], grid.box);
        return scale * mollifier_profile(m.profile, 2, std::hypot(dx, dy) / om);
    });
}

Field sample_mollifier(const MollifierSpec& m, double eps, const GridSpec& grid) {
    Field raw = sample_mollifier_raw(m, eps, grid, {0.0, 0.0});
    const double mass =
        grid.cell_volume() * kernels::ops().sum(raw.values().data(), raw.size());
    std::vector<double> v = raw.values();
    kernels::ops().scale(1.0 / mass, v.data(), v.size());
    return Field(grid, std::move(v));
}

} // namespace mlnheat
