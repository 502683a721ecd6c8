#pragma once

// Refinement study of the discrete conformable operators.
//
//   constant         sup |T_alpha(c)|                             must be <= 1e-12
//   roundtrip        sup |T_alpha(I_alpha^a sin) - sin| on [1, 4]    order >= 1.8
//   linear_residual  residual of solve_linear, g = sin, [1, 2]       order >= 1.8
//   linear_constant  residual of solve_linear, g = c / a^alpha, x0 = c  <= 1e-10
//   classical_limit  alpha = 1 only: conformable minus classical stencil, must be 0

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thermistor/conformable.hpp"
#include "thermistor/grid.hpp"
#include "thermistor/linear.hpp"

namespace thermistor {

struct IdentityRow {
    std::string check;
    double alpha = 0.0;
    std::size_t n = 0;
    double error = 0.0;
    std::optional<double> order;  // against the previous n of the same check and alpha
    bool pass = true;
};

struct IdentityThresholds {
    double min_order = 1.8;
    double constant_tol = 1e-12;
    double linear_constant_tol = 1e-10;
};

inline IdentityRow make_row(std::string check, double alpha, std::size_t n, double error) {
    IdentityRow row;
    row.check = std::move(check);
    row.alpha = alpha;
    row.n = n;
    row.error = error;
    return row;
}

/// log(e_prev / e) / log(h_prev / h)
inline double empirical_order(double e_prev, double e, double h_prev, double h) {
    return std::log(e_prev / e) / std::log(h_prev / h);
}

inline double roundtrip_error(Alpha alpha, std::size_t n) {
    const Grid grid(1.0, 4.0, n);
    const auto f = GridFunction::sample(grid, [](double t) { return std::sin(t); });
    const auto back = conformable_derivative(cumulative_conformable_integral(f, alpha), alpha);
    return sup_distance(back, f);
}

inline double constant_rule_error(Alpha alpha, std::size_t n) {
    const Grid grid(1.0, 4.0, n);
    return sup_norm(conformable_derivative(GridFunction::constant(grid, 7.0), alpha));
}

inline double linear_sine_residual(Alpha alpha, std::size_t n) {
    const Grid grid(1.0, 2.0, n);
    const auto g = GridFunction::sample(grid, [](double t) { return std::sin(t); });
    return linear_residual(solve_linear(g, 1.0, alpha), g, alpha);
}

inline double linear_constant_residual(Alpha alpha, std::size_t n) {
    const Grid grid(1.0, 2.0, n);
    const double c = 3.0;
    const auto g = GridFunction::constant(grid, c / std::pow(grid.a(), alpha.value()));
    return linear_residual(solve_linear(g, c, alpha), g, alpha);
}

inline double classical_limit_difference(std::size_t n) {
    const Grid grid(1.0, 4.0, n);
    const auto f = GridFunction::sample(grid, [](double t) { return std::sin(t); });
    return sup_distance(conformable_derivative(f, Alpha(1.0)), classical_derivative(f));
}

inline std::vector<IdentityRow> run_identity_suite(const std::vector<double>& alphas,
                                                   const std::vector<std::size_t>& sizes,
                                                   const IdentityThresholds& thr = {}) {
    std::vector<IdentityRow> rows;
    auto refine = [&](const std::string& name, double alpha_value, auto&& error_at) {
        double prev_err = 0.0;
        double prev_h = 0.0;
        for (std::size_t k = 0; k < sizes.size(); ++k) {
            const std::size_t n = sizes[k];
            const double h = 1.0 / static_cast<double>(n - 1);  // interval length cancels in ratios
            IdentityRow row = make_row(name, alpha_value, n, error_at(n));
            if (k > 0) {
                row.order = empirical_order(prev_err, row.error, prev_h, h);
                row.pass = *row.order >= thr.min_order;
            }
            prev_err = row.error;
            prev_h = h;
            rows.push_back(row);
        }
    };

    for (double av : alphas) {
        const Alpha alpha(av);
        for (std::size_t n : sizes) {
            IdentityRow row = make_row("constant", av, n, constant_rule_error(alpha, n));
            row.pass = row.error <= thr.constant_tol;
            rows.push_back(row);
        }
        refine("roundtrip", av, [&](std::size_t n) { return roundtrip_error(alpha, n); });
        refine("linear_residual", av, [&](std::size_t n) { return linear_sine_residual(alpha, n); });
        for (std::size_t n : sizes) {
            IdentityRow row = make_row("linear_constant", av, n, linear_constant_residual(alpha, n));
            row.pass = row.error <= thr.linear_constant_tol;
            rows.push_back(row);
        }
        if (av == 1.0) {
            for (std::size_t n : sizes) {
                IdentityRow row = make_row("classical_limit", av, n, classical_limit_difference(n));
                row.pass = row.error == 0.0;
                rows.push_back(row);
            }
        }
    }
    return rows;
}

inline bool all_pass(const std::vector<IdentityRow>& rows) {
    for (const auto& r : rows)
        if (!r.pass) return false;
    return true;
}

}  // namespace thermistor
