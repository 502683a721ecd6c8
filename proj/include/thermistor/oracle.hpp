#pragma once

// Reference solver that shares no numerics with the fixed-point path.
//
// For differentiable u, u^(alpha) = t^(1-alpha) u', so the nonlocal problem is the
// classical ODE u' = lambda t^(alpha-1) f(t, u) / D with D = (int_a^T f(x, u(x)) dx)^2.
// D is frozen, the ODE is integrated with classical RK4, D is recomputed with
// Simpson's rule, and the loop repeats until D settles.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "thermistor/error.hpp"
#include "thermistor/grid.hpp"
#include "thermistor/model.hpp"
#include "thermistor/options.hpp"

namespace thermistor {

struct OracleResult {
    explicit OracleResult(GridFunction start) : u(std::move(start)) {}

    GridFunction u;
    bool converged = false;
    std::size_t outer_iterations = 0;
    double denominator = 0.0;
};

namespace detail {

/// Composite Simpson on a uniform grid; Simpson 3/8 closes an odd interval count.
inline double simpson(double h, const std::vector<double>& y) {
    const std::size_t intervals = y.size() - 1;
    std::size_t simpson_end = intervals;
    double tail = 0.0;
    if (intervals % 2 == 1) {
        simpson_end = intervals - 3;
        const std::size_t j = simpson_end;
        tail = 3.0 * h / 8.0 * (y[j] + 3.0 * y[j + 1] + 3.0 * y[j + 2] + y[j + 3]);
    }
    double s = 0.0;
    for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) s += y[i] + 4.0 * y[i + 1] + y[i + 2];
    return h / 3.0 * s + tail;
}

}  // namespace detail

inline OracleResult oracle_solve(const ThermistorProblem& p, const SolveOptions& opts) {
    opts.validate();
    const std::size_t n = opts.grid_n;
    const double a = p.a();
    const double h = (p.T() - a) / static_cast<double>(n - 1);
    const double beta = p.alpha().value() - 1.0;

    auto time = [&](std::size_t i) { return i + 1 == n ? p.T() : a + static_cast<double>(i) * h; };
    auto f = [&](double t, double u, std::size_t i) {
        const double v = p.source()(t, u);
        if (!(v > 0.0) || !std::isfinite(v)) throw H1Violation(i, t, u, v);
        return v;
    };
    auto denominator = [&](const std::vector<double>& u) {
        std::vector<double> fv(n);
        for (std::size_t i = 0; i < n; ++i) fv[i] = f(time(i), u[i], i);
        const double integral = detail::simpson(h, fv);
        return integral * integral;
    };
    auto integrate = [&](double D) {
        std::vector<double> u(n);
        u[0] = p.u_a();
        const double c = p.lambda() / D;
        auto rhs = [&](double t, double y, std::size_t i) { return c * std::pow(t, beta) * f(t, y, i); };
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double t = time(i);
            const double dt = time(i + 1) - t;
            const double k1 = rhs(t, u[i], i);
            const double k2 = rhs(t + 0.5 * dt, u[i] + 0.5 * dt * k1, i);
            const double k3 = rhs(t + 0.5 * dt, u[i] + 0.5 * dt * k2, i);
            const double k4 = rhs(t + dt, u[i] + dt * k3, i + 1);
            u[i + 1] = u[i] + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return u;
    };

    double D = denominator(std::vector<double>(n, p.u_a()));
    OracleResult out(GridFunction::constant(p.grid(n), p.u_a()));
    std::vector<double> u;
    for (std::size_t k = 1; k <= opts.max_iter; ++k) {
        u = integrate(D);
        const double next = denominator(u);
        out.outer_iterations = k;
        const bool settled = std::abs(next - D) <= opts.tol_fp * D;
        D = next;
        if (settled) {
            u = integrate(D);
            out.converged = true;
            break;
        }
    }
    out.denominator = D;
    out.u = GridFunction(p.grid(n), std::move(u));
    return out;
}

}  // namespace thermistor
