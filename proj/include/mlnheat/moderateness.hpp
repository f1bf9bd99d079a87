#pragma once
// Growth-rate analysis of epsilon-indexed norm nets: the least-squares
// exponent N in |g_eps| ~ C * omega(eps)^{-N}, the quality of that fit, and
// a per-order negligibility test.
//
// Negligibility at order q is decided by the trend of the log-log fit:
// the net passes q iff the fitted slope of log(norm) against log(omega)
// is at least q - 0.1, i.e. norm/omega^q does not grow as eps -> 0.
// Norms that vanish outright count as negligible at every order.

#include <optional>
#include <vector>

#include "mlnheat/grid.hpp"

namespace mlnheat {

struct ModerationReport {
    std::vector<double> epsilons;
    std::vector<double> norms;
    std::vector<double> omegas;
    double exponent = 0.0;    // N = -slope of log(norm) vs log(omega)
    double fit_quality = 1.0; // R^2; forced to 1 for nets flat within ~10%
    std::optional<int> negligible_up_to_q;
};

// Requires >= 4 samples, strictly decreasing epsilons, positive norms.
ModerationReport fit_moderateness(const std::vector<double>& epsilons,
                                  const std::vector<double>& norms, double scale_power);

struct NegligibilityOrder {
    int q = 0;
    bool passes = false;
};

// Slope test per order q = 0..max_q. Entries whose norm falls below
// 1e-13 * max(norms) are treated as exact zeros (they only help); if fewer
// than two nonzero samples remain, every order passes.
std::vector<NegligibilityOrder> negligibility_orders(const std::vector<double>& epsilons,
                                                     const std::vector<double>& norms,
                                                     double scale_power, int max_q = 10);

// Least-squares helpers shared with the rate fits elsewhere.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

} // namespace mlnheat
