#pragma once

// Closed-form solution of the damped linear conformable problem
//
//     x^(alpha)(t) + x(t) / a^alpha = g(t),   x(a) = x0,   t in [a, T],
//
// namely x(t) = L(t) (e^(1/alpha) x0 + I_alpha^a[g / L](t)) with
// L(t) = exp(-w(t)), w(t) = (1/alpha)(t/a)^alpha.
//
// In the variable w the weighted integral becomes
//     L(t) I_alpha^a[g / L](t) = a^alpha int_{w(a)}^{w(t)} g e^(w' - w(t)) dw'.
// On each cell g is interpolated linearly in w and integrated exactly against
// the exponential. The rule is second order, exact for constant g, and only
// ever forms exp of non-positive exponent differences, so nothing overflows
// for large T/a.

#include <cmath>
#include <cstddef>
#include <vector>

#include "thermistor/conformable.hpp"
#include "thermistor/error.hpp"
#include "thermistor/grid.hpp"

namespace thermistor {

namespace detail {

/// int_0^d s e^{-s} ds / d = (1 - e^{-d}(1 + d)) / d, accurate for small d.
inline double left_cell_weight(double d) {
    if (d < 0.05) {
        // sum_{m>=2} (-1)^m (m-1)/m! d^(m-1)
        double power = d;   // d^(m-1)
        double fact = 2.0;  // m!
        double sum = 0.0;
        for (int m = 2; m <= 12; ++m) {
            const double term = static_cast<double>(m - 1) * power / fact;
            sum += (m % 2 == 0) ? term : -term;
            power *= d;
            fact *= static_cast<double>(m + 1);
        }
        return sum;
    }
    return (-std::expm1(-d) - d * std::exp(-d)) / d;
}

}  // namespace detail

/// Samples the closed-form solution on g's grid; x(a) = x0 exactly.
inline GridFunction solve_linear(const GridFunction& g, double x0, Alpha alpha) {
    const Grid& grid = g.grid();
    if (!std::isfinite(x0)) throw InvalidArgument("solve_linear: x0 must be finite");
    const double a = grid.a();
    const double scale = std::pow(a, alpha.value());
    const double w0 = 1.0 / alpha.value();

    std::vector<double> x(grid.size());
    x[0] = x0;
    double running = 0.0;  // a^alpha int_{w(a)}^{w(t_k)} g e^{w - w(t_k)} dw
    double w_prev = w0;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const double w_next = weight_exponent(grid.node(k + 1), alpha, a);
        const double d = w_next - w_prev;
        const double decay = std::exp(-d);
        const double total = -std::expm1(-d);
        const double left = detail::left_cell_weight(d);
        const double right = total - left;
        running = decay * running + scale * (left * g[k] + right * g[k + 1]);
        x[k + 1] = x0 * std::exp(w0 - w_next) + running;
        if (!std::isfinite(x[k + 1])) throw RangeError("solve_linear: weight ratio overflow", k + 1);
        w_prev = w_next;
    }
    return GridFunction(grid, std::move(x));
}

/// Pointwise x^(alpha) + x / a^alpha - g.
inline GridFunction linear_defect(const GridFunction& x, const GridFunction& g, Alpha alpha) {
    require_same_grid(x, g, "linear_residual");
    const GridFunction dx = conformable_derivative(x, alpha);
    const double damping = 1.0 / std::pow(x.grid().a(), alpha.value());
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = dx[i] + damping * x[i] - g[i];
    return GridFunction(x.grid(), std::move(r));
}

/// Sup over interior nodes of |x^(alpha) + x / a^alpha - g|.
inline double linear_residual(const GridFunction& x, const GridFunction& g, Alpha alpha) {
    const GridFunction r = linear_defect(x, g, alpha);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < r.size(); ++i) worst = std::max(worst, std::abs(r[i]));
    return worst;
}

}  // namespace thermistor
