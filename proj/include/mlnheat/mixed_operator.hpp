#pragma once
// The mixed local-nonlocal operator
//     L u = -div(a grad u) + (-Delta)^{s/2}( b (-Delta)^{s/2} u ) + c u
// with pointwise (collocation) products, its energy bilinear form, weighted
// energies, coercivity margin, the explicit a priori constant, and a
// brute-force pair-sum evaluation of the Gagliardo seminorm.

#include <memory>
#include <vector>

#include "mlnheat/grid.hpp"
#include "mlnheat/spectral.hpp"

namespace mlnheat {

class OperatorData {
public:
    // Validates: shared grid, s in (0,1), positive floors (c0 > 0 is
    // required; the zero-order floor enters the implicit solver's
    // definiteness), min(coeff) >= floor - 1e-9.
    OperatorData(Field a, Field b, Field c, double s, double a0, double b0, double c0);

    const GridSpec& grid() const { return a_.grid(); }
    const Field& a() const { return a_; }
    const Field& b() const { return b_; }
    const Field& c() const { return c_; }
    double s() const { return s_; }
    double a0() const { return a0_; }
    double b0() const { return b0_; }
    double c0() const { return c0_; }

    const MultiplierTables& tables() const { return *tables_; }
    const std::vector<double>& frac_mult() const { return frac_mult_; } // |k|^s

    // Constant-coefficient symbol a0|k|^2 + b0|k|^{2s} + c0 per mode.
    std::vector<double> floor_symbol() const;

private:
    Field a_, b_, c_;
    double s_, a0_, b0_, c0_;
    std::shared_ptr<const MultiplierTables> tables_;
    std::vector<double> frac_mult_;
};

Field apply_operator(const OperatorData& P, const Field& u);

double bilinear_form(const OperatorData& P, const Field& u, const Field& v);

struct EnergyBreakdown {
    double l2_sq = 0.0;     // |u|^2
    double grad_w_sq = 0.0; // |a^{1/2} grad u|^2
    double frac_w_sq = 0.0; // |b^{1/2} (-Delta)^{s/2} u|^2
    double mass_w_sq = 0.0; // |c^{1/2} u|^2
    double total = 0.0;     // exact sum of the four
};
EnergyBreakdown energy(const OperatorData& P, const Field& u);

// B(u,u) - (a0|grad u|^2 + b0|Lambda u|^2 + c0|u|^2); >= -1e-10 B(u,u)
// for admissible data.
double coercivity_margin(const OperatorData& P, const Field& u);

// 2 (1 + 1/a0 + 1/b0) (1 + |a|_inf + |b|_inf + |c|_inf), sup norms as
// grid maxima.
double apriori_constant(const OperatorData& P);

struct GagliardoResult {
    double value = 0.0;      // truncated double Riemann sum
    double tail_bound = 0.0; // bound on the dropped |x-y| > R far field
};

// Double Riemann sum of |u(x)-u(y)|^2 / |x-y|^{d+2s} over pairs with
// 0 < |x-y| <= R (minimum-image distance). Guards: d * n^d <= 2^16,
// R <= box/2, and u must vanish on the boundary shell (outermost
// box/16) to 1e-8 of its sup.
GagliardoResult gagliardo_seminorm_bruteforce(const Field& u, double s,
                                              double truncation_radius);

// Shared workspace for repeated operator applications on raw arrays
// (the conjugate-gradient inner loop). Pure with respect to P and input.
class OperatorApplier {
public:
    explicit OperatorApplier(const OperatorData& P);
    // out = L in
    void apply(const double* in, double* out);
    // out = in + alpha * L in
    void apply_shifted(const double* in, double* out, double alpha);
    const OperatorData& data() const { return P_; }

private:
    const OperatorData& P_;
    std::vector<std::complex<double>> hat_, work_, acc_;
    std::vector<double> real_a_, real_b_;
};

} // namespace mlnheat
