#include "mlnheat/mixed_operator.hpp"

#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "mlnheat/kernels/dispatch.hpp"

namespace mlnheat {
namespace {

void check_floor(const Field& f, double floor, const char* name) {
    if (!(floor > 0.0))
        throw ValidationError(std::string("operator.") + name + "0",
                              "floor must be strictly positive (c0 = 0 is not admissible here: "
                              "the zero-order term must stay coercive)");
    const double lo = kernels::ops().min_val(f.values().data(), f.size());
    if (lo < floor - 1e-9) throw PositivityViolation(lo, floor);
}

void fft_grid(std::vector<std::complex<double>>& buf, const GridSpec& g, int sign) {
    if (g.dim == 1)
        detail::fft_pow2(buf.data(), g.n, sign);
    else
        detail::fft_2d(buf.data(), g.n, sign);
}

// Pieces of B(u,u) against the unweighted floor norms, computed in one pass.
struct QuadraticParts {
    double grad_w = 0.0, frac_w = 0.0, mass_w = 0.0; // weighted by a, b, c
    double grad = 0.0, frac = 0.0, mass = 0.0;       // unweighted
};

QuadraticParts quadratic_parts(const OperatorData& P, const Field& u) {
    const GridSpec& g = u.grid();
    const double vol = g.cell_volume();
    const auto& ops = kernels::ops();
    QuadraticParts q;
    const auto grads = gradient(u);
    for (const Field& gu : grads) {
        q.grad_w += vol * ops.weighted_dot(P.a().values().data(), gu.values().data(),
                                           gu.values().data(), gu.size());
        q.grad += vol * ops.sum_sq(gu.values().data(), gu.size());
    }
    const Field lu = fractional_laplacian_half(u, P.s());
    q.frac_w += vol * ops.weighted_dot(P.b().values().data(), lu.values().data(),
                                       lu.values().data(), lu.size());
    q.frac += vol * ops.sum_sq(lu.values().data(), lu.size());
    q.mass_w += vol * ops.weighted_dot(P.c().values().data(), u.values().data(),
                                       u.values().data(), u.size());
    q.mass += vol * ops.sum_sq(u.values().data(), u.size());
    return q;
}

} // namespace

OperatorData::OperatorData(Field a, Field b, Field c, double s, double a0, double b0, double c0)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), s_(s), a0_(a0), b0_(b0), c0_(c0) {
    require_same_grid(a_.grid(), b_.grid(), "operator coefficients a/b");
    require_same_grid(a_.grid(), c_.grid(), "operator coefficients a/c");
    if (!(s_ > 0.0 && s_ < 1.0)) throw InvalidOrder(s_);
    check_floor(a_, a0_, "a");
    check_floor(b_, b0_, "b");
    check_floor(c_, c0_, "c");
    tables_ = std::make_shared<MultiplierTables>(grid());
    frac_mult_ = tables_->frac_half(s_);
}

std::vector<double> OperatorData::floor_symbol() const {
    const GridSpec& g = grid();
    std::vector<double> sym(g.points());
    // Full-lattice |k|^2 for the local part of the symbol: the preconditioner
    // has to stay positive even where the derivative multiplier was zeroed.
    std::size_t idx = 0;
    if (g.dim == 1) {
        for (int j = 0; j < g.n; ++j, ++idx) {
            const double k = g.wavenumber(j);
            sym[idx] = a0_ * k * k + b0_ * frac_mult_[idx] * frac_mult_[idx] + c0_;
        }
    } else {
        for (int i = 0; i < g.n; ++i) {
            const double ki = g.wavenumber(i);
            for (int j = 0; j < g.n; ++j, ++idx) {
                const double kj = g.wavenumber(j);
                sym[idx] = a0_ * (ki * ki + kj * kj) +
                           b0_ * frac_mult_[idx] * frac_mult_[idx] + c0_;
            }
        }
    }
    return sym;
}

OperatorApplier::OperatorApplier(const OperatorData& P) : P_(P) {
    const std::size_t np = P.grid().points();
    hat_.resize(np);
    work_.resize(np);
    acc_.resize(np);
    real_a_.resize(np);
    real_b_.resize(np);
}

void OperatorApplier::apply(const double* in, double* out) {
    const GridSpec& g = P_.grid();
    const std::size_t np = g.points();
    const auto& ops = kernels::ops();
    const double inv_np = 1.0 / static_cast<double>(np);

    for (std::size_t i = 0; i < np; ++i) hat_[i] = in[i];
    fft_grid(hat_, g, -1);
    for (auto& c : hat_) c *= inv_np;

    // acc accumulates the spectrum of -div(a grad u) + Lambda(b Lambda u).
    std::fill(acc_.begin(), acc_.end(), std::complex<double>(0.0));
    for (int axis = 0; axis < g.dim; ++axis) {
        const auto& k = P_.tables().axis_k[static_cast<std::size_t>(axis)];
        work_ = hat_;
        ops.cscale_imag(k.data(), work_.data(), np);
        fft_grid(work_, g, +1);
        for (std::size_t i = 0; i < np; ++i) real_a_[i] = work_[i].real();
        ops.mul(P_.a().values().data(), real_a_.data(), real_b_.data(), np);
        for (std::size_t i = 0; i < np; ++i) work_[i] = real_b_[i] * inv_np;
        fft_grid(work_, g, -1);
        // minus sign: -div(a grad u)
        for (std::size_t i = 0; i < np; ++i)
            acc_[i] -= std::complex<double>(-k[i] * work_[i].imag(), k[i] * work_[i].real());
    }

    work_ = hat_;
    ops.cscale_real(P_.frac_mult().data(), work_.data(), np);
    fft_grid(work_, g, +1);
    for (std::size_t i = 0; i < np; ++i) real_a_[i] = work_[i].real();
    ops.mul(P_.b().values().data(), real_a_.data(), real_b_.data(), np);
    for (std::size_t i = 0; i < np; ++i) work_[i] = real_b_[i] * inv_np;
    fft_grid(work_, g, -1);
    ops.cscale_real(P_.frac_mult().data(), work_.data(), np);
    for (std::size_t i = 0; i < np; ++i) acc_[i] += work_[i];

    fft_grid(acc_, g, +1);
    for (std::size_t i = 0; i < np; ++i)
        out[i] = acc_[i].real() + P_.c()[i] * in[i];
}

void OperatorApplier::apply_shifted(const double* in, double* out, double alpha) {
    apply(in, out);
    const std::size_t np = P_.grid().points();
    for (std::size_t i = 0; i < np; ++i) out[i] = in[i] + alpha * out[i];
}

Field apply_operator(const OperatorData& P, const Field& u) {
    require_same_grid(P.grid(), u.grid(), "apply_operator");
    OperatorApplier applier(P);
    std::vector<double> out(u.size());
    applier.apply(u.values().data(), out.data());
    return Field(u.grid(), std::move(out));
}

double bilinear_form(const OperatorData& P, const Field& u, const Field& v) {
    require_same_grid(P.grid(), u.grid(), "bilinear_form u");
    require_same_grid(P.grid(), v.grid(), "bilinear_form v");
    const GridSpec& g = u.grid();
    const double vol = g.cell_volume();
    const auto& ops = kernels::ops();
    double out = 0.0;
    const auto gu = gradient(u);
    const auto gv = gradient(v);
    for (int axis = 0; axis < g.dim; ++axis) {
        const std::size_t a = static_cast<std::size_t>(axis);
        out += vol * ops.weighted_dot(P.a().values().data(), gu[a].values().data(),
                                      gv[a].values().data(), u.size());
    }
    const Field lu = fractional_laplacian_half(u, P.s());
    const Field lv = fractional_laplacian_half(v, P.s());
    out += vol * ops.weighted_dot(P.b().values().data(), lu.values().data(),
                                  lv.values().data(), u.size());
    out += vol * ops.weighted_dot(P.c().values().data(), u.values().data(),
                                  v.values().data(), u.size());
    return out;
}

EnergyBreakdown energy(const OperatorData& P, const Field& u) {
    require_same_grid(P.grid(), u.grid(), "energy");
    const QuadraticParts q = quadratic_parts(P, u);
    EnergyBreakdown e;
    e.l2_sq = u.grid().cell_volume() * kernels::ops().sum_sq(u.values().data(), u.size());
    e.grad_w_sq = q.grad_w;
    e.frac_w_sq = q.frac_w;
    e.mass_w_sq = q.mass_w;
    e.total = e.l2_sq + e.grad_w_sq + e.frac_w_sq + e.mass_w_sq;
    return e;
}

double coercivity_margin(const OperatorData& P, const Field& u) {
    require_same_grid(P.grid(), u.grid(), "coercivity_margin");
    const QuadraticParts q = quadratic_parts(P, u);
    const double b_form = q.grad_w + q.frac_w + q.mass_w;
    return b_form - (P.a0() * q.grad + P.b0() * q.frac + P.c0() * q.mass);
}

double apriori_constant(const OperatorData& P) {
    const auto& ops = kernels::ops();
    const double sup_a = ops.max_abs(P.a().values().data(), P.a().size());
    const double sup_b = ops.max_abs(P.b().values().data(), P.b().size());
    const double sup_c = ops.max_abs(P.c().values().data(), P.c().size());
    return 2.0 * (1.0 + 1.0 / P.a0() + 1.0 / P.b0()) * (1.0 + sup_a + sup_b + sup_c);
}

GagliardoResult gagliardo_seminorm_bruteforce(const Field& u, double s,
                                              double truncation_radius) {
    const GridSpec& g = u.grid();
    if (!(s > 0.0 && s < 1.0)) throw InvalidOrder(s);
    if (static_cast<double>(g.dim) * static_cast<double>(g.points()) > 65536.0)
        throw CostGuard("grid too large for the pair sum (d * n^d <= 2^16)");
    if (!(truncation_radius > 0.0 && truncation_radius <= 0.5 * g.box))
        throw ValidationError("truncation_radius", "must lie in (0, box/2]");

    const double sup = kernels::ops().max_abs(u.values().data(), u.size());
    const double shell = g.box / 16.0;
    double shell_max = 0.0;
    if (g.dim == 1) {
        for (int i = 0; i < g.n; ++i) {
            const double x = g.coord(i);
            if (x < shell || x > g.box - shell)
                shell_max = std::max(shell_max, std::fabs(u[static_cast<std::size_t>(i)]));
        }
    } else {
        std::size_t idx = 0;
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j, ++idx) {
                const double x = g.coord(i), y = g.coord(j);
                if (x < shell || x > g.box - shell || y < shell || y > g.box - shell)
                    shell_max = std::max(shell_max, std::fabs(u[idx]));
            }
    }
    if (sup > 0.0 && shell_max >= 1e-8 * sup)
        throw SupportViolation("field does not vanish on the boundary shell (outermost box/16)");

    const double h = g.spacing();
    const double vol = g.cell_volume();
    double sum = 0.0;
    if (g.dim == 1) {
        for (int off = 1; off < g.n; ++off) {
            const int img = std::min(off, g.n - off);
            const double dist = img * h;
            if (dist > truncation_radius) continue;
            const double w = 1.0 / std::pow(dist, 1.0 + 2.0 * s);
            double acc = 0.0;
            for (int i = 0; i < g.n; ++i) {
                const double d = u[static_cast<std::size_t>(i)] -
                                 u[static_cast<std::size_t>((i + off) % g.n)];
                acc += d * d;
            }
            sum += w * acc;
        }
    } else {
        for (int ox = 0; ox < g.n; ++ox) {
            const int ix = std::min(ox, g.n - ox);
            for (int oy = 0; oy < g.n; ++oy) {
                if (ox == 0 && oy == 0) continue;
                const int iy = std::min(oy, g.n - oy);
                const double dist = h * std::sqrt(double(ix) * ix + double(iy) * iy);
                if (dist > truncation_radius) continue;
                const double w = 1.0 / std::pow(dist, 2.0 + 2.0 * s);
                double acc = 0.0;
                for (int i = 0; i < g.n; ++i) {
                    const int i2 = (i + ox) % g.n;
                    const std::size_t row = static_cast<std::size_t>(i) * g.n;
                    const std::size_t row2 = static_cast<std::size_t>(i2) * g.n;
                    for (int j = 0; j < g.n; ++j) {
                        const double d = u[row + j] - u[row2 + (j + oy) % g.n];
                        acc += d * d;
                    }
                }
                sum += w * acc;
            }
        }
    }

    GagliardoResult r;
    r.value = vol * vol * sum;
    const double surface = g.dim == 1 ? 2.0 : 2.0 * std::numbers::pi;
    const double l2_sq = vol * kernels::ops().sum_sq(u.values().data(), u.size());
    r.tail_bound = 4.0 * l2_sq * surface * std::pow(truncation_radius, -2.0 * s) / (2.0 * s);
    return r;
}

} // namespace mlnheat
