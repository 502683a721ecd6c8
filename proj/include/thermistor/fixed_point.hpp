#pragma once

// Fixed-point formulation of the nonlocal problem restricted to a tube:
//
//   K(u) = solution x of  x^(alpha) + x / a^alpha = g(t, u~) + u~ / a^alpha,  x(a) = u_a,
//
// where u~ = truncate(u, tube). A fixed point of K solves the truncated problem, and
// when (v, M) is a tube solution that fixed point lies in the tube and therefore solves
// the original problem. picard_solve iterates K from the tube center.

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "thermistor/conformable.hpp"
#include "thermistor/error.hpp"
#include "thermistor/grid.hpp"
#include "thermistor/linear.hpp"
#include "thermistor/model.hpp"
#include "thermistor/options.hpp"
#include "thermistor/tube.hpp"

namespace thermistor {

struct SolveReport {
    explicit SolveReport(GridFunction start) : u(std::move(start)) {}

    GridFunction u;
    std::size_t iterations = 0;
    std::vector<double> fp_residuals;  // sup |u^{k+1} - u^k| per iteration
    bool converged = false;
    double ode_residual = 0.0;         // sup interior |u^(alpha) - g(t, u)|
    double modified_residual = 0.0;    // linear residual of the truncated problem at u
    bool member_of_tube = false;       // membership with slack 10 h^2
    double tube_excess = 0.0;          // max (|u - v| - M)
    Bounds bounds;
    TubeReport tube;
    std::vector<std::string> warnings;

    [[nodiscard]] double final_fp_residual() const { return fp_residuals.empty() ? 0.0 : fp_residuals.back(); }
};

/// Right-hand side g(t, u~) + u~ / a^alpha of the truncated linear problem, u~ already truncated.
inline GridFunction truncated_rhs(const GridFunction& u_trunc, const ThermistorProblem& p) {
    const GridFunction g = evaluate_g(p, u_trunc);
    const double damping = 1.0 / std::pow(p.a(), p.alpha().value());
    std::vector<double> rhs(g.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = g[i] + damping * u_trunc[i];
    return GridFunction(g.grid(), std::move(rhs));
}

inline GridFunction apply_k(const GridFunction& u, const Tube& tube, const ThermistorProblem& p) {
    const GridFunction u_trunc = truncate(u, tube);
    return solve_linear(truncated_rhs(u_trunc, p), p.u_a(), p.alpha());
}

/// Sup over interior nodes of |u^(alpha) - g(t, u)|.
inline double ode_residual(const GridFunction& u, const ThermistorProblem& p) {
    const GridFunction du = conformable_derivative(u, p.alpha());
    const GridFunction g = evaluate_g(p, u);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < u.size(); ++i) worst = std::max(worst, std::abs(du[i] - g[i]));
    return worst;
}

inline SolveReport picard_solve(const ThermistorProblem& p, const Tube& tube, const SolveOptions& opts) {
    opts.validate();
    const Grid& grid = tube.grid();
    require_problem_grid(p, grid);

    SolveReport rep(tube.center());
    rep.tube = verify_tube(tube, p);
    if (!rep.tube.valid) rep.warnings.emplace_back("tube fails verification; containment is not guaranteed");

    const double reach = tube.reach();
    try {
        rep.bounds = bounds_estimate(p, reach > 0.0 ? reach : 1.0, 64);
    } catch (const H1Violation& e) {
        // the source may only be positive along the actual iterates, so this is not fatal
        rep.warnings.push_back(std::string("bounds unavailable: ") + e.what());
    }

    GridFunction u = tube.center();
    for (std::size_t k = 1; k <= opts.max_iter; ++k) {
        GridFunction next = [&] {
            try {
                return apply_k(u, tube, p);
            } catch (const H1Violation& e) {
                throw e.at_iteration(k);
            }
        }();
        std::vector<double> mixed(next.size());
        mixed[0] = p.u_a();
        for (std::size_t i = 1; i < mixed.size(); ++i) {
            mixed[i] = opts.damping == 1.0 ? next[i] : (1.0 - opts.damping) * u[i] + opts.damping * next[i];
        }
        GridFunction stepped(grid, std::move(mixed));
        const double step = sup_distance(stepped, u);
        rep.fp_residuals.push_back(step);
        rep.iterations = k;
        u = std::move(stepped);
        if (step <= opts.tol_fp) {
            rep.converged = true;
            break;
        }
    }

    rep.ode_residual = ode_residual(u, p);
    rep.modified_residual = linear_residual(u, truncated_rhs(truncate(u, tube), p), p.alpha());
    rep.member_of_tube = membership(u, tube, default_tube_tol(grid));
    rep.tube_excess = tube_excess(u, tube);
    rep.u = std::move(u);
    return rep;
}

}  // namespace thermistor
