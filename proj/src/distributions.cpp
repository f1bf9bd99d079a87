#include "mlnheat/distributions.hpp"

#include <cmath>

#include "mlnheat/kernels/dispatch.hpp"
#include "mlnheat/spectral.hpp"

namespace mlnheat {
namespace {

double min_image(double dx, double box) { return dx - box * std::round(dx / box); }

Field sample_smooth_sum(const std::vector<const DistributionTerm*>& terms, const GridSpec& g) {
    if (g.dim == 1) {
        return Field::sample(g, [&](double x) {
            double s = 0.0;
            for (const auto* t : terms) s += t->expr->eval(x, 0.0, g.box);
            return s;
        });
    }
    return Field::sample(g, [&](double x, double y) {
        double s = 0.0;
        for (const auto* t : terms) s += t->expr->eval(x, y, g.box);
        return s;
    });
}

// Exact circular convolution h^d * sum_l f_l k_{j-l} via the transforms;
// with the forward normalization 1/n^d this is idft(L^d * f_hat * k_hat).
void add_convolution(std::vector<double>& acc, const Field& f, const Field& kernel) {
    const GridSpec& g = f.grid();
    Spectrum fs = forward_transform(f);
    const Spectrum ks = forward_transform(kernel);
    kernels::ops().cmul(ks.coeffs().data(), fs.mutable_coeffs().data(), fs.size());
    const double vol = g.dim == 1 ? g.box : g.box * g.box;
    std::vector<std::complex<double>> buf = fs.coeffs();
    for (auto& c : buf) c *= vol;
    const Field conv = inverse_transform_real(Spectrum(g, std::move(buf)));
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += conv[i];
}

} // namespace

DistributionTerm DistributionTerm::smooth_term(SmoothExpr e) {
    DistributionTerm t;
    t.kind = TermKind::smooth;
    t.expr = std::move(e);
    return t;
}

DistributionTerm DistributionTerm::dirac_term(std::array<double, 2> location, double weight) {
    DistributionTerm t;
    t.kind = TermKind::dirac;
    t.location = location;
    t.weight = weight;
    return t;
}

DistributionTerm DistributionTerm::dirac_derivative_term(double location, double weight,
                                                         int order) {
    DistributionTerm t;
    t.kind = TermKind::dirac_derivative;
    t.location = {location, 0.0};
    t.weight = weight;
    t.order = order;
    return t;
}

bool DistributionSpec::has_singular() const {
    for (const auto& t : terms)
        if (t.kind != TermKind::smooth) return true;
    return false;
}

void validate_distribution(const DistributionSpec& spec, const GridSpec& grid,
                           const std::string& path, std::vector<ValidationIssue>& issues) {
    for (std::size_t i = 0; i < spec.terms.size(); ++i) {
        const auto& t = spec.terms[i];
        const std::string tp = path + ".terms[" + std::to_string(i) + "]";
        if (t.kind == TermKind::smooth) {
            if (!t.expr.has_value()) issues.push_back({tp, "smooth term without expression"});
            else if (grid.dim == 1 && t.expr->uses_y())
                issues.push_back({tp, "expression uses 'y' on a 1-D grid"});
            continue;
        }
        for (int a = 0; a < grid.dim; ++a) {
            const double c = t.location[static_cast<std::size_t>(a)];
            if (!(c > 0.0 && c < grid.box))
                issues.push_back({tp + ".location",
                                  "must lie strictly inside the fundamental domain (0, box)"});
        }
        if (t.kind == TermKind::dirac_derivative) {
            if (grid.dim != 1)
                issues.push_back({tp, "dirac_derivative terms are supported in d = 1 only"});
            if (t.order != 1 && t.order != 2)
                issues.push_back({tp + ".order", "must be 1 or 2"});
        }
        if (!(t.weight >= 0.0) && spec.nonnegative)
            issues.push_back({tp + ".weight", "negative weight in a nonnegative distribution"});
    }
}

Field sample_distribution(const DistributionSpec& spec, const GridSpec& grid) {
    if (spec.has_singular()) throw NotRegularData();
    std::vector<const DistributionTerm*> smooth;
    for (const auto& t : spec.terms) smooth.push_back(&t);
    if (smooth.empty()) return Field::zero(grid);
    return sample_smooth_sum(smooth, grid);
}

Field regularize(const DistributionSpec& spec, const MollifierSpec& m, double eps,
                 const GridSpec& grid) {
    check_mollifier_resolution(m, eps, grid);
    const double om = m.omega(eps);
    std::vector<double> acc(grid.points(), 0.0);

    std::vector<const DistributionTerm*> smooth;
    for (const auto& t : spec.terms)
        if (t.kind == TermKind::smooth) smooth.push_back(&t);
    if (!smooth.empty()) {
        const Field f = sample_smooth_sum(smooth, grid);
        const Field kernel = sample_mollifier(m, eps, grid);
        add_convolution(acc, f, kernel);
    }

    for (const auto& t : spec.terms) {
        if (t.kind == TermKind::dirac) {
            // delta * psi = psi translated; renormalize per translate so the
            // discrete mass of the contribution is exactly the weight.
            Field shifted = sample_mollifier_raw(m, eps, grid, t.location);
            const double mass = grid.cell_volume() *
                                kernels::ops().sum(shifted.values().data(), shifted.size());
            const double w = t.weight / mass;
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * shifted[i];
        } else if (t.kind == TermKind::dirac_derivative) {
            if (grid.dim != 1)
                throw ValidationError("distribution", "dirac_derivative requires d = 1");
            const double sign = t.order % 2 == 0 ? 1.0 : -1.0; // (-1)^order
            const double scale = t.weight * sign * std::pow(om, -1.0 - t.order);
            for (int i = 0; i < grid.n; ++i) {
                const double arg = min_image(grid.coord(i) - t.location[0], grid.box) / om;
                acc[static_cast<std::size_t>(i)] +=
                    scale * mollifier_profile_derivative(m.profile, t.order, arg);
            }
        }
    }
    return Field(grid, std::move(acc));
}

Field regularize_coefficient(const CoefficientSpec& coeff, const MollifierSpec& m, double eps,
                             const GridSpec& grid) {
    if (!(coeff.floor > 0.0))
        throw ValidationError("coefficient.floor", "must be positive");
    if (!coeff.singular.empty() && !coeff.singular.nonnegative)
        throw ValidationError("coefficient.singular",
                              "singular part must be flagged nonnegative");
    std::vector<double> v(grid.points(), coeff.floor);
    if (!coeff.singular.empty()) {
        const Field s = regularize(coeff.singular, m, eps, grid);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += s[i];
    }
    const double lo = kernels::ops().min_val(v.data(), v.size());
    if (lo < coeff.floor - 1e-9) throw PositivityViolation(lo, coeff.floor);
    return Field(grid, std::move(v));
}

} // namespace mlnheat
