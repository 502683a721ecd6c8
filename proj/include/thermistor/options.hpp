#pragma once

#include <cstddef>

#include "thermistor/error.hpp"

namespace thermistor {

struct SolveOptions {
    double damping = 1.0;     // u <- (1 - damping) u + damping K(u)
    double tol_fp = 1e-10;    // sup-norm step tolerance
    std::size_t max_iter = 200;
    std::size_t grid_n = 1001;

    void validate() const {
        if (!(damping > 0.0 && damping <= 1.0)) throw InvalidArgument("damping must lie in (0, 1]");
        if (!(tol_fp > 0.0)) throw InvalidArgument("tol_fp must be positive");
        if (max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
        if (grid_n < 3) throw InvalidArgument("grid_n must be at least 3");
    }
};

}  // namespace thermistor
