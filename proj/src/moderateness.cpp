#include "mlnheat/moderateness.hpp"

#include <algorithm>
#include <cmath>

#include "mlnheat/errors.hpp"
#include "mlnheat/mollifier.hpp"

namespace mlnheat {
namespace {

constexpr double kSlopeSlack = 0.1;
constexpr double kFlatLogRange = 0.1; // ~10% norm variation counts as flat

void validate_net(const std::vector<double>& epsilons, const std::vector<double>& norms,
                  bool require_positive) {
    if (epsilons.size() < 4) throw InsufficientSamples(epsilons.size());
    if (norms.size() != epsilons.size())
        throw ValidationError("norms", "must align with epsilons");
    for (std::size_t i = 0; i + 1 < epsilons.size(); ++i)
        if (!(epsilons[i] > epsilons[i + 1]))
            throw ValidationError("epsilons", "must be strictly decreasing");
    if (require_positive)
        for (double n : norms)
            if (!(n > 0.0)) throw ValidationError("norms", "must be positive");
}

} // namespace

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    if (syy <= 1e-18) {
        f.r_squared = 1.0;
    } else {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - (f.intercept + f.slope * x[i]);
            ss_res += r * r;
        }
        f.r_squared = 1.0 - ss_res / syy;
    }
    return f;
}

ModerationReport fit_moderateness(const std::vector<double>& epsilons,
                                  const std::vector<double>& norms, double scale_power) {
    validate_net(epsilons, norms, true);
    ModerationReport rep;
    rep.epsilons = epsilons;
    rep.norms = norms;
    MollifierSpec scale{MollifierProfile::bump, scale_power};
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        rep.omegas.push_back(scale.omega(epsilons[i]));
        lx.push_back(std::log(rep.omegas.back()));
        ly.push_back(std::log(norms[i]));
    }
    const LineFit f = fit_line(lx, ly);
    rep.exponent = -f.slope;
    const auto [lo, hi] = std::minmax_element(ly.begin(), ly.end());
    rep.fit_quality = (*hi - *lo) < kFlatLogRange ? 1.0 : f.r_squared;

    const auto orders = negligibility_orders(epsilons, norms, scale_power);
    if (!orders.front().passes) {
        rep.negligible_up_to_q = std::nullopt;
    } else {
        int best = 0;
        for (const auto& o : orders)
            if (o.passes) best = std::max(best, o.q);
        rep.negligible_up_to_q = best;
    }
    return rep;
}

std::vector<NegligibilityOrder> negligibility_orders(const std::vector<double>& epsilons,
                                                     const std::vector<double>& norms,
                                                     double scale_power, int max_q) {
    validate_net(epsilons, norms, false);
    MollifierSpec scale{MollifierProfile::bump, scale_power};

    double peak = 0.0;
    for (double n : norms) peak = std::max(peak, n);
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < norms.size(); ++i) {
        if (norms[i] > 1e-13 * peak && norms[i] > 0.0) {
            lx.push_back(std::log(scale.omega(epsilons[i])));
            ly.push_back(std::log(norms[i]));
        }
    }

    std::vector<NegligibilityOrder> out;
    if (lx.size() < 2) {
        // Vanishing (or all-but-vanishing) nets are negligible at every order.
        for (int q = 0; q <= max_q; ++q) out.push_back({q, true});
        return out;
    }
    const double slope = fit_line(lx, ly).slope;
    for (int q = 0; q <= max_q; ++q) out.push_back({q, slope >= q - kSlopeSlack});
    return out;
}

} // namespace mlnheat
