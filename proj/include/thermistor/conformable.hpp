#pragma once

// Conformable fractional derivative and integral on uniform grids.
//
// For differentiable u and t > 0 the conformable derivative of order alpha is
// T_alpha(u)(t) = t^(1-alpha) u'(t), and the conformable integral from a is
// I_alpha^a(u)(t) = int_a^t u(s) s^(alpha-1) ds. Both are discretized to
// second order: central differences inside, three-point one-sided stencils at
// the ends, trapezoidal quadrature for the integral.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "thermistor/error.hpp"
#include "thermistor/grid.hpp"

namespace thermistor {

/// Second-order finite-difference derivative du/dt at every node.
inline GridFunction classical_derivative(const GridFunction& u) {
    const auto& grid = u.grid();
    const std::size_t n = u.size();
    if (n < 3) throw InvalidArgument("derivative needs at least 3 nodes");
    const double inv2h = 1.0 / (2.0 * grid.h());
    std::vector<double> d(n);
    d[0] = (4.0 * (u[1] - u[0]) - (u[2] - u[0])) * inv2h;
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (u[i + 1] - u[i - 1]) * inv2h;
    d[n - 1] = (4.0 * (u[n - 1] - u[n - 2]) - (u[n - 1] - u[n - 3])) * inv2h;
    return GridFunction(grid, std::move(d));
}

/// t_i^(1-alpha) times the finite-difference derivative. At alpha = 1 the
/// factor is exactly 1, so the result equals classical_derivative bit for bit.
inline GridFunction conformable_derivative(const GridFunction& u, Alpha alpha) {
    GridFunction d = classical_derivative(u);
    const double p = 1.0 - alpha.value();
    return transform(d, [p](double t, double v) { return std::pow(t, p) * v; });
}

/// Difference quotient (f(t + eps t^(1-alpha)) - f(t)) / eps of the limit definition.
template <typename F>
double conformable_derivative_limit(F&& f, double t, Alpha alpha, double eps) {
    if (!(t > 0.0)) throw InvalidArgument("conformable derivative needs t > 0");
    if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
    const double f0 = f(t);
    const double f1 = f(t + eps * std::pow(t, 1.0 - alpha.value()));
    if (!std::isfinite(f0) || !std::isfinite(f1)) {
        throw RangeError("non-finite function value in difference quotient", 0);
    }
    return (f1 - f0) / eps;
}

/// Trapezoidal int_{t_lo}^{t_hi} u(s) s^(alpha-1) ds between node indices lo <= hi.
inline double conformable_integral(const GridFunction& u, Alpha alpha, std::size_t lo, std::size_t hi) {
    if (lo > hi) throw InvalidArgument("conformable_integral: lower limit exceeds upper limit");
    if (hi >= u.size()) throw InvalidArgument("conformable_integral: index out of range");
    const auto& grid = u.grid();
    const double p = alpha.value() - 1.0;
    double sum = 0.0;
    double prev = u[lo] * std::pow(grid.node(lo), p);
    for (std::size_t i = lo + 1; i <= hi; ++i) {
        const double cur = u[i] * std::pow(grid.node(i), p);
        sum += 0.5 * grid.h() * (prev + cur);
        prev = cur;
    }
    return sum;
}

/// Same as above with limits given as times; both must be grid nodes.
inline double conformable_integral(const GridFunction& u, Alpha alpha, double t_lo, double t_hi) {
    if (t_lo > t_hi) throw InvalidArgument("conformable_integral: t_lo > t_hi");
    const auto& grid = u.grid();
    return conformable_integral(u, alpha, grid.index_of(t_lo), grid.index_of(t_hi));
}

/// Running integral I_alpha^a(u)(t_i) for every node, accumulated in one pass.
inline GridFunction cumulative_conformable_integral(const GridFunction& u, Alpha alpha) {
    const auto& grid = u.grid();
    const double p = alpha.value() - 1.0;
    std::vector<double> out(u.size());
    out[0] = 0.0;
    double prev = u[0] * std::pow(grid.node(0), p);
    for (std::size_t i = 1; i < u.size(); ++i) {
        const double cur = u[i] * std::pow(grid.node(i), p);
        out[i] = out[i - 1] + 0.5 * grid.h() * (prev + cur);
        prev = cur;
    }
    return GridFunction(grid, std::move(out));
}

/// Exponent (1/alpha)(t/a)^alpha of the damping weight.
inline double weight_exponent(double t, Alpha alpha, double a) {
    return std::pow(t / a, alpha.value()) / alpha.value();
}

/// L(t) = exp(-(1/alpha)(t/a)^alpha); strictly decreasing on [a, inf), L(a) = exp(-1/alpha).
inline double exp_weight(double t, Alpha alpha, double a) {
    if (!(a > 0.0)) throw InvalidArgument("exp_weight requires a > 0");
    if (!(t > 0.0)) throw InvalidArgument("exp_weight requires t > 0");
    return std::exp(-weight_exponent(t, alpha, a));
}

/// |u|^(alpha) = u u^(alpha) / |u|, defined where u has no zeros.
inline GridFunction abs_alpha_derivative(const GridFunction& u, Alpha alpha) {
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] == 0.0) throw SignDegenerate(i);
    }
    const GridFunction d = conformable_derivative(u, alpha);
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = u[i] * d[i] / std::abs(u[i]);
    return GridFunction(u.grid(), std::move(out));
}

}  // namespace thermistor
