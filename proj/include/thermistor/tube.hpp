#pragma once

// Tube solutions: a center v and radius M >= 0 with
//   (i)   (y - v(t)) (g(t, y) - v^(alpha)(t)) <= M(t) M^(alpha)(t)  whenever |y - v(t)| = M(t),
//   (ii)  v^(alpha)(t) = g(t, v(t)) and M^(alpha)(t) = 0            wherever M(t) = 0,
//   (iii) |u_a - v(a)| <= M(a).
// A valid tube traps a solution of the nonlocal problem inside |u - v| <= M.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thermistor/conformable.hpp"
#include "thermistor/error.hpp"
#include "thermistor/grid.hpp"
#include "thermistor/model.hpp"

namespace thermistor {

class Tube {
public:
    Tube(GridFunction center, GridFunction radius) : v_(std::move(center)), M_(std::move(radius)) {
        require_same_grid(v_, M_, "Tube");
        for (std::size_t i = 0; i < M_.size(); ++i) {
            if (M_[i] < 0.0) throw InvalidArgument("tube radius is negative at node " + std::to_string(i));
        }
    }

    [[nodiscard]] const GridFunction& center() const noexcept { return v_; }
    [[nodiscard]] const GridFunction& radius() const noexcept { return M_; }
    [[nodiscard]] const Grid& grid() const noexcept { return v_.grid(); }

    /// max_i |v_i| + M_i, a radius containing every truncated iterate.
    [[nodiscard]] double reach() const {
        double r = 0.0;
        for (std::size_t i = 0; i < v_.size(); ++i) r = std::max(r, std::abs(v_[i]) + M_[i]);
        return r;
    }

private:
    GridFunction v_;
    GridFunction M_;
};

/// Radial projection of u onto the tube; identity where |u - v| <= M.
inline GridFunction truncate(const GridFunction& u, const Tube& tube) {
    require_same_grid(u, tube.center(), "truncate");
    const auto& v = tube.center();
    const auto& M = tube.radius();
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double d = u[i] - v[i];
        if (!(std::abs(d) > M[i])) {
            out[i] = u[i];
            continue;
        }
        // v + M can round outward; step back until the computed distance is at most M, so
        // the result passes the identity branch above and truncation is idempotent bit for bit.
        double x = v[i] + std::copysign(M[i], d);
        while (std::abs(x - v[i]) > M[i]) x = std::nextafter(x, v[i]);
        out[i] = x;
    }
    return GridFunction(u.grid(), std::move(out));
}

/// max_i (|u_i - v_i| - M_i); non-positive iff u lies in the tube.
inline double tube_excess(const GridFunction& u, const Tube& tube) {
    require_same_grid(u, tube.center(), "tube_excess");
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.size(); ++i) {
        worst = std::max(worst, std::abs(u[i] - tube.center()[i]) - tube.radius()[i]);
    }
    return worst;
}

inline bool membership(const GridFunction& u, const Tube& tube, double slack) {
    if (!(slack >= 0.0)) throw InvalidArgument("membership slack must be non-negative");
    require_same_grid(u, tube.center(), "membership");
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!(std::abs(u[i] - tube.center()[i]) <= tube.radius()[i] + slack)) return false;
    }
    return true;
}

/// Worst margin of one tube condition. A condition holds when margin <= tol.
struct ConditionMargin {
    std::string name;
    double margin = -std::numeric_limits<double>::infinity();
    std::size_t node = 0;
    bool applicable = true;  // false for (ii) when no node has M <= tol
    bool ok = true;
};

struct TubeReport {
    double tol = 0.0;
    /// (i) with g(t_i, y) evaluated on v perturbed to y at node i only (denominator recomputed).
    ConditionMargin boundary;
    /// (i) with the denominator frozen at v; informational, not part of the verdict.
    ConditionMargin boundary_frozen;
    ConditionMargin degenerate;  // (ii)
    ConditionMargin initial;     // (iii)
    bool valid = false;

    [[nodiscard]] std::vector<ConditionMargin> records() const {
        return {boundary, boundary_frozen, degenerate, initial};
    }
};

inline double default_tube_tol(const Grid& grid) { return 10.0 * grid.h() * grid.h(); }

inline TubeReport verify_tube(const Tube& tube, const ThermistorProblem& p, std::optional<double> tol_opt = {}) {
    const Grid& grid = tube.grid();
    require_problem_grid(p, grid);
    const double tol = tol_opt.value_or(default_tube_tol(grid));
    if (!(tol > 0.0)) throw InvalidArgument("verify_tube tolerance must be positive");

    const auto& v = tube.center();
    const auto& M = tube.radius();
    const Alpha alpha = p.alpha();
    const GridFunction dv = conformable_derivative(v, alpha);
    const GridFunction dM = conformable_derivative(M, alpha);

    const auto f = source_samples(p, v);
    const double base = trapezoid(grid, f);
    const double frozen_den = base * base;

    TubeReport rep;
    rep.tol = tol;
    rep.boundary.name = "(i) boundary";
    rep.boundary_frozen.name = "(i) boundary, frozen denominator";
    rep.degenerate.name = "(ii) zero radius";
    rep.initial.name = "(iii) initial value";
    rep.degenerate.applicable = false;

    auto raise = [](ConditionMargin& c, double m, std::size_t i) {
        if (m > c.margin) {
            c.margin = m;
            c.node = i;
        }
    };

    const std::size_t n = grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double t = grid.node(i);
        const double weight = (i == 0 || i + 1 == n) ? 0.5 * grid.h() : grid.h();
        const double rhs = M[i] * dM[i];
        for (double sign : {1.0, -1.0}) {
            const double y = v[i] + sign * M[i];
            const double fy = p.sample(t, y, i);
            const double perturbed = base + weight * (fy - f[i]);
            const double g_local = p.lambda() * fy / (perturbed * perturbed);
            const double g_frozen = p.lambda() * fy / frozen_den;
            raise(rep.boundary, (y - v[i]) * (g_local - dv[i]) - rhs, i);
            raise(rep.boundary_frozen, (y - v[i]) * (g_frozen - dv[i]) - rhs, i);
        }
        if (M[i] <= tol) {
            rep.degenerate.applicable = true;
            const double g_center = p.lambda() * f[i] / frozen_den;
            raise(rep.degenerate, std::max(std::abs(dv[i] - g_center), std::abs(dM[i])), i);
        }
    }
    raise(rep.initial, std::abs(p.u_a() - v[0]) - M[0], 0);

    rep.boundary.ok = rep.boundary.margin <= tol;
    rep.boundary_frozen.ok = rep.boundary_frozen.margin <= tol;
    rep.degenerate.ok = !rep.degenerate.applicable || rep.degenerate.margin <= tol;
    rep.initial.ok = rep.initial.margin <= tol;
    rep.valid = rep.boundary.ok && rep.degenerate.ok && rep.initial.ok;
    return rep;
}

/// Outcome of checking the sign lemma: if r(a) <= 0 and r^(alpha) < 0 wherever r > 0,
/// then r <= 0 everywhere.
struct DecayLemmaCheck {
    bool hypothesis = false;
    bool conclusion = false;
    std::size_t hypothesis_failure_node = 0;  // meaningful when !hypothesis
    [[nodiscard]] bool consistent() const noexcept { return !hypothesis || conclusion; }
};

inline DecayLemmaCheck check_decay_lemma(const GridFunction& r, Alpha alpha, double tol) {
    const GridFunction dr = conformable_derivative(r, alpha);
    DecayLemmaCheck out;
    out.hypothesis = r[0] <= tol;
    if (!out.hypothesis) out.hypothesis_failure_node = 0;
    out.conclusion = true;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] > tol) {
            out.conclusion = false;
            if (out.hypothesis && dr[i] >= 0.0) {
                out.hypothesis = false;
                out.hypothesis_failure_node = i;
            }
        }
    }
    return out;
}

/// Center v = u_a + I_alpha^a[g] for a source that does not depend on u, where g is
/// evaluated along u = u_a. The conformable antiderivative is taken by the trapezoidal
/// rule in the variable w = (t/a)^alpha / alpha, which is exact for constant g.
inline GridFunction closed_form_center(const ThermistorProblem& p, const Grid& grid) {
    require_problem_grid(p, grid);
    const GridFunction g = evaluate_g(p, GridFunction::constant(grid, p.u_a()));
    const Alpha alpha = p.alpha();
    const double scale = std::pow(p.a(), alpha.value());
    std::vector<double> v(grid.size());
    v[0] = p.u_a();
    double acc = 0.0;
    double w_prev = weight_exponent(grid.node(0), alpha, p.a());
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const double w_next = weight_exponent(grid.node(k + 1), alpha, p.a());
        acc += scale * (w_next - w_prev) * 0.5 * (g[k] + g[k + 1]);
        v[k + 1] = p.u_a() + acc;
        w_prev = w_next;
    }
    return GridFunction(grid, std::move(v));
}

/// M(t) = m0 exp(k ((t/a)^alpha - 1) / alpha), whose conformable derivative is (k / a^alpha) M.
inline GridFunction exponential_radius(const Grid& grid, Alpha alpha, double m0, double k) {
    if (!(m0 >= 0.0)) throw InvalidArgument("radius scale must be non-negative");
    const double w0 = 1.0 / alpha.value();
    return GridFunction::sample(grid, [&](double t) {
        return m0 * std::exp(k * (weight_exponent(t, alpha, grid.a()) - w0));
    });
}

}  // namespace thermistor
