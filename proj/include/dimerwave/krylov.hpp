#pragma once

#include "dimerwave/fft.hpp"

#include <functional>

namespace dimerwave {

using LinearMap = std::function<Vec(const Vec&)>;

struct GmresOptions {
    double rel_tol = 1e-12;
    int restart = 60;
    int max_iter = 600;
};

struct GmresResult {
    Vec x;
    double rel_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Restarted GMRES for A x = b with right preconditioner M (x = M y).
GmresResult gmres(const LinearMap& A, const Vec& b, const LinearMap& M, const GmresOptions& opts = {},
                  const Vec& x0 = {});

}  // namespace dimerwave
