#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "thermistor/error.hpp"

namespace thermistor {

/// Uniform grid on [a, T] with n nodes, a > 0.
///
/// Nodes are t_i = a + i*h for i < n-1 and t_{n-1} = T exactly, so both
/// endpoints are representable without rounding drift.
class Grid {
public:
    Grid(double a, double T, std::size_t n) : a_(a), T_(T), n_(n) {
        if (!std::isfinite(a) || !std::isfinite(T)) throw InvalidArgument("grid endpoints must be finite");
        if (!(a > 0.0)) throw InvalidArgument("grid requires a > 0");
        if (!(T > a)) throw InvalidArgument("grid requires T > a");
        if (n < 3) throw InvalidArgument("grid requires at least 3 nodes for second-order stencils");
        h_ = (T - a) / static_cast<double>(n - 1);
    }

    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double T() const noexcept { return T_; }
    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] double h() const noexcept { return h_; }

    [[nodiscard]] double node(std::size_t i) const noexcept {
        return i + 1 == n_ ? T_ : a_ + static_cast<double>(i) * h_;
    }

    [[nodiscard]] std::vector<double> nodes() const {
        std::vector<double> t(n_);
        for (std::size_t i = 0; i < n_; ++i) t[i] = node(i);
        return t;
    }

    /// Index of the node equal to t (to within a millionth of a cell); throws otherwise.
    [[nodiscard]] std::size_t index_of(double t) const {
        const double pos = (t - a_) / h_;
        const double rounded = std::round(pos);
        if (!std::isfinite(pos) || rounded < 0.0 || rounded > static_cast<double>(n_ - 1) ||
            std::abs(pos - rounded) > 1e-6) {
            throw InvalidArgument("t = " + std::to_string(t) + " is not a grid node");
        }
        return static_cast<std::size_t>(rounded);
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double a_;
    double T_;
    std::size_t n_;
    double h_ = 0.0;
};

/// Order of a conformable derivative, 0 < alpha <= 1.
class Alpha {
public:
    explicit Alpha(double value) : value_(value) {
        if (!(value > 0.0 && value <= 1.0)) {
            throw InvalidArgument("alpha must lie in (0, 1], got " + std::to_string(value));
        }
    }
    [[nodiscard]] double value() const noexcept { return value_; }
    friend bool operator==(const Alpha&, const Alpha&) = default;

private:
    double value_;
};

/// Finite real samples on a grid.
class GridFunction {
public:
    GridFunction(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.size()) {
            throw InvalidArgument("grid function has " + std::to_string(values_.size()) +
                                  " values for " + std::to_string(grid_.size()) + " nodes");
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i])) throw RangeError("non-finite grid function value", i);
        }
    }

    /// Samples fn(t) at every node.
    template <typename F>
    static GridFunction sample(const Grid& grid, F&& fn) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.node(i));
        return GridFunction(grid, std::move(v));
    }

    static GridFunction constant(const Grid& grid, double c) {
        return GridFunction(grid, std::vector<double>(grid.size(), c));
    }

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }
    [[nodiscard]] double front() const noexcept { return values_.front(); }
    [[nodiscard]] double back() const noexcept { return values_.back(); }

    friend bool operator==(const GridFunction&, const GridFunction&) = default;

private:
    Grid grid_;
    std::vector<double> values_;
};

inline void require_same_grid(const GridFunction& x, const GridFunction& y, const char* what) {
    if (!(x.grid() == y.grid())) throw InvalidArgument(std::string(what) + ": grid functions live on different grids");
}

/// max_i |x_i - y_i|
inline double sup_distance(const GridFunction& x, const GridFunction& y) {
    require_same_grid(x, y, "sup_distance");
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
    return d;
}

inline double sup_norm(const GridFunction& x) {
    double d = 0.0;
    for (double v : x.values()) d = std::max(d, std::abs(v));
    return d;
}

/// Node-wise c1*x + c2*y.
inline GridFunction linear_combination(double c1, const GridFunction& x, double c2, const GridFunction& y) {
    require_same_grid(x, y, "linear_combination");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = c1 * x[i] + c2 * y[i];
    return GridFunction(x.grid(), std::move(out));
}

/// Node-wise map of a grid function.
template <typename F>
GridFunction transform(const GridFunction& x, F&& fn) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(x.grid().node(i), x[i]);
    return GridFunction(x.grid(), std::move(out));
}

}  // namespace thermistor
