#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mlnheat {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {
inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}
} // namespace detail

// A Spectrum fed to the inverse transform is not conjugate-symmetric.
class SymmetryViolation : public Error {
public:
    SymmetryViolation(double residual, double tol)
        : Error("inverse transform: relative imaginary residue " + detail::sci(residual) +
                " exceeds " + detail::sci(tol) + " (corrupted spectrum)"),
          residual(residual) {}
    double residual;
};

class InvalidOrder : public Error {
public:
    explicit InvalidOrder(double s)
        : Error("fractional order s = " + std::to_string(s) + " outside (0,1)") {}
};

class GridMismatch : public Error {
public:
    explicit GridMismatch(const std::string& what) : Error("grid mismatch: " + what) {}
};

// Mollifier scale too small for the grid: the kernel cannot be resolved.
class UnresolvedKernel : public Error {
public:
    UnresolvedKernel(double omega, double h)
        : Error("UnresolvedKernel: scale omega = " + std::to_string(omega) +
                " below resolution bound 2h = " + std::to_string(2.0 * h)) {}
};

class KernelTooWide : public Error {
public:
    KernelTooWide(double radius, double box)
        : Error("KernelTooWide: support radius " + std::to_string(radius) +
                " exceeds half the box " + std::to_string(0.5 * box)) {}
};

class PositivityViolation : public Error {
public:
    PositivityViolation(double minimum, double floor)
        : Error("PositivityViolation: sampled minimum " + std::to_string(minimum) +
                " dips below floor " + std::to_string(floor)) {}
};

class InsufficientSamples : public Error {
public:
    explicit InsufficientSamples(std::size_t got)
        : Error("need at least 4 (epsilon, norm) samples, got " + std::to_string(got)) {}
};

class CgDivergence : public Error {
public:
    CgDivergence(int iterations, double residual, long step = -1)
        : Error("CG failed to converge in " + std::to_string(iterations) +
                " iterations (relative residual " + std::to_string(residual) + ")" +
                (step >= 0 ? " at time step " + std::to_string(step) : "")),
          iterations(iterations), residual(residual), step(step) {}
    int iterations;
    double residual;
    long step;
};

class CostGuard : public Error {
public:
    explicit CostGuard(const std::string& what) : Error("cost guard: " + what) {}
};

class SupportViolation : public Error {
public:
    explicit SupportViolation(const std::string& what) : Error("support violation: " + what) {}
};

class TraceMismatch : public Error {
public:
    explicit TraceMismatch(const std::string& what) : Error("trace mismatch: " + what) {}
};

class NotRegularData : public Error {
public:
    NotRegularData() : Error("consistency experiment requires regular data (no singular parts)") {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};

// One failed constraint, addressed by the path of the offending field.
struct ValidationIssue {
    std::string path;
    std::string message;
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<ValidationIssue> issues_)
        : Error(join(issues_)), issues(std::move(issues_)) {}
    ValidationError(std::string path, std::string message)
        : ValidationError({ValidationIssue{std::move(path), std::move(message)}}) {}

    std::vector<ValidationIssue> issues;

private:
    static std::string join(const std::vector<ValidationIssue>& issues) {
        std::string out = "invalid configuration:";
        for (const auto& i : issues) out += "\n  " + i.path + ": " + i.message;
        return out;
    }
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error("i/o error: " + what) {}
};

} // namespace mlnheat
