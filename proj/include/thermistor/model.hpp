#pragma once

// Nonlocal thermistor right-hand side
//
//     u^(alpha)(t) = g(t, u) = lambda f(t, u(t)) / (int_a^T f(x, u(x)) dx)^2,   u(a) = u_a,
//
// with f continuous and strictly positive (hypothesis H1).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "thermistor/error.hpp"
#include "thermistor/grid.hpp"

namespace thermistor {

using Source = std::function<double(double t, double u)>;

class ThermistorProblem {
public:
    ThermistorProblem(double a, double T, double lambda, Alpha alpha, double u_a, Source f,
                      std::string description = {})
        : a_(a), T_(T), lambda_(lambda), alpha_(alpha), u_a_(u_a), f_(std::move(f)),
          description_(std::move(description)) {
        if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("problem requires finite a > 0");
        if (!(T > a) || !std::isfinite(T)) throw InvalidArgument("problem requires finite T > a");
        if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("problem requires finite lambda > 0");
        if (!std::isfinite(u_a)) throw InvalidArgument("problem requires a finite initial value");
        if (!f_) throw InvalidArgument("problem requires a source function");
    }

    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double T() const noexcept { return T_; }
    [[nodiscard]] double lambda() const noexcept { return lambda_; }
    [[nodiscard]] Alpha alpha() const noexcept { return alpha_; }
    [[nodiscard]] double u_a() const noexcept { return u_a_; }
    [[nodiscard]] const Source& source() const noexcept { return f_; }
    [[nodiscard]] const std::string& description() const noexcept { return description_; }

    [[nodiscard]] Grid grid(std::size_t n) const { return Grid(a_, T_, n); }

    /// f(t, u), rejecting non-positive or non-finite samples. `index` only labels the error.
    [[nodiscard]] double sample(double t, double u, std::size_t index) const {
        const double v = f_(t, u);
        if (!(v > 0.0) || !std::isfinite(v)) throw H1Violation(index, t, u, v);
        return v;
    }

    [[nodiscard]] ThermistorProblem with_lambda(double lambda) const {
        return ThermistorProblem(a_, T_, lambda, alpha_, u_a_, f_, description_);
    }
    [[nodiscard]] ThermistorProblem with_alpha(Alpha alpha) const {
        return ThermistorProblem(a_, T_, lambda_, alpha, u_a_, f_, description_);
    }
    /// Source c * f.
    [[nodiscard]] ThermistorProblem with_scaled_source(double c) const {
        Source f = f_;
        return ThermistorProblem(a_, T_, lambda_, alpha_, u_a_, [f, c](double t, double u) { return c * f(t, u); },
                                 description_);
    }

private:
    double a_;
    double T_;
    double lambda_;
    Alpha alpha_;
    double u_a_;
    Source f_;
    std::string description_;
};

/// Composite trapezoid over all nodes of a uniform grid.
inline double trapezoid(const Grid& grid, std::span<const double> y) {
    double interior = 0.0;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) interior += y[i];
    return grid.h() * (0.5 * (y.front() + y.back()) + interior);
}

inline void require_problem_grid(const ThermistorProblem& p, const Grid& grid) {
    if (grid.a() != p.a() || grid.T() != p.T()) {
        throw InvalidArgument("grid does not span the problem interval [a, T]");
    }
}

/// f(t_i, u_i) at every node, H1-checked.
inline std::vector<double> source_samples(const ThermistorProblem& p, const GridFunction& u) {
    require_problem_grid(p, u.grid());
    std::vector<double> f(u.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = p.sample(u.grid().node(i), u[i], i);
    return f;
}

/// (int_a^T f(x, u(x)) dx)^2 by the trapezoidal rule; strictly positive under H1.
inline double nonlocal_denominator(const ThermistorProblem& p, const GridFunction& u) {
    const auto f = source_samples(p, u);
    const double integral = trapezoid(u.grid(), f);
    return integral * integral;
}

/// g_i = lambda f(t_i, u_i) / (int_a^T f(x, u(x)) dx)^2.
inline GridFunction evaluate_g(const ThermistorProblem& p, const GridFunction& u) {
    auto f = source_samples(p, u);
    const double integral = trapezoid(u.grid(), f);
    const double scale = p.lambda() / (integral * integral);
    for (double& v : f) v *= scale;
    return GridFunction(u.grid(), std::move(f));
}

/// Lattice estimates of the constants bounding f and g on [a, T] x [-R, R].
struct Bounds {
    double A = 0.0;  // min f
    double B = 0.0;  // max f
    double G = 0.0;  // lambda B / (A^2 (T - a)^2), a bound on g along any |u| <= R
    double R = 0.0;
};

inline Bounds bounds_estimate(const ThermistorProblem& p, double R, std::size_t samples) {
    if (!(R > 0.0) || !std::isfinite(R)) throw InvalidArgument("bounds_estimate requires finite R > 0");
    if (samples < 2) throw InvalidArgument("bounds_estimate requires at least 2 samples per axis");
    Bounds b;
    b.R = R;
    b.A = std::numeric_limits<double>::infinity();
    b.B = 0.0;
    const double last = static_cast<double>(samples - 1);
    for (std::size_t j = 0; j < samples; ++j) {
        const double t = j + 1 == samples ? p.T() : p.a() + (p.T() - p.a()) * static_cast<double>(j) / last;
        for (std::size_t k = 0; k < samples; ++k) {
            const double u = k + 1 == samples ? R : -R + 2.0 * R * static_cast<double>(k) / last;
            const double f = p.sample(t, u, j * samples + k);
            b.A = std::min(b.A, f);
            b.B = std::max(b.B, f);
        }
    }
    const double len = p.T() - p.a();
    b.G = p.lambda() * b.B / (b.A * b.A * len * len);
    return b;
}

}  // namespace thermistor
