#pragma once
// Friedrichs mollifiers: nonnegative unit-mass profiles with support radius 1
// (the truncated Gaussian uses sigma = 1/4 so that its cut sits at 4 sigma),
// rescaled to width omega(eps) = eps^p and sampled on the periodic grid.

#include <array>

#include "mlnheat/grid.hpp"

namespace mlnheat {

enum class MollifierProfile { bump, hat, truncated_gaussian };

struct MollifierSpec {
    MollifierProfile profile = MollifierProfile::bump;
    double scale_power = 1.0; // p in omega(eps) = eps^p

    // omega(eps); requires eps in (0,1].
    double omega(double eps) const;
};

// Base profile value at radius r (support radius 1), normalized to unit mass
// over R^dim. Derivatives are with respect to the 1-D argument and exist for
// bump and truncated_gaussian; hat admits order 1 a.e. and rejects order 2.
double mollifier_profile(MollifierProfile profile, int dim, double r);
double mollifier_profile_derivative(MollifierProfile profile, int order, double t);

// psi_omega sampled at the torus nodes (minimum-image distance to `center`),
// rescaled so its discrete integral h^d * sum is exactly one.
// Throws UnresolvedKernel when omega(eps) < 2h and KernelTooWide when the
// support does not fit in half the box.
Field sample_mollifier(const MollifierSpec& m, double eps, const GridSpec& grid);

// Same, before the discrete renormalization (the analytic normalization
// quality is a tested invariant) and with an arbitrary center.
Field sample_mollifier_raw(const MollifierSpec& m, double eps, const GridSpec& grid,
                           const std::array<double, 2>& center);

// Admissibility test used by config validation.
void check_mollifier_resolution(const MollifierSpec& m, double eps, const GridSpec& grid);

} // namespace mlnheat
