#pragma once
// Symbolic distributional data: sums of closed-form smooth functions, point
// masses, and point-mass derivatives, plus their regularisation by
// convolution with a sampled mollifier. Deltas and their derivatives are
// regularised analytically (kernel translation / closed-form kernel
// derivative), never by discrete convolution against a grid delta.

#include <array>
#include <optional>
#include <vector>

#include "mlnheat/expressions.hpp"
#include "mlnheat/grid.hpp"
#include "mlnheat/mollifier.hpp"

namespace mlnheat {

enum class TermKind { smooth, dirac, dirac_derivative };

struct DistributionTerm {
    TermKind kind = TermKind::smooth;
    std::optional<SmoothExpr> expr;          // smooth
    std::array<double, 2> location{0.0, 0.0}; // dirac / dirac_derivative
    double weight = 1.0;
    int order = 1; // dirac_derivative only; 1 or 2, d = 1 only

    static DistributionTerm smooth_term(SmoothExpr e);
    static DistributionTerm dirac_term(std::array<double, 2> location, double weight);
    static DistributionTerm dirac_derivative_term(double location, double weight, int order);
};

struct DistributionSpec {
    std::vector<DistributionTerm> terms;
    bool nonnegative = false; // declared, required true for coefficient singular parts

    bool has_singular() const;
    bool empty() const { return terms.empty(); }
};

struct CoefficientSpec {
    double floor = 1.0; // a0, b0, or c0; must be positive
    DistributionSpec singular;
};

// Locations must lie strictly inside [0, box)^d; derivative terms need d = 1.
void validate_distribution(const DistributionSpec& spec, const GridSpec& grid,
                           const std::string& path, std::vector<ValidationIssue>& issues);

// Direct sampling of the smooth part only; throws NotRegularData if a
// singular term is present. Used for unmollified references.
Field sample_distribution(const DistributionSpec& spec, const GridSpec& grid);

// Convolution with psi_omega(eps): smooth terms by exact circular (FFT)
// convolution against the sampled kernel, point terms analytically.
Field regularize(const DistributionSpec& spec, const MollifierSpec& m, double eps,
                 const GridSpec& grid);

// floor + regularize(singular); enforces the declared nonnegativity and the
// floor: throws PositivityViolation if min dips below floor - 1e-9.
Field regularize_coefficient(const CoefficientSpec& coeff, const MollifierSpec& m, double eps,
                             const GridSpec& grid);

} // namespace mlnheat
