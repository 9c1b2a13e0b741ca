#pragma once

#include <functional>
#include <vector>

namespace prbshare {

struct MinimizeResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
};

/// Derivative-free Nelder-Mead simplex minimizer. Deterministic: the initial
/// simplex is x0 plus one vertex per coordinate offset by `step`, and ties
/// never depend on iteration order. Stops when the simplex's value spread
/// falls below tol or after max_iter reflections.
MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                           std::vector<double> x0, double step = 0.1,
                           int max_iter = 500, double tol = 1e-10);

}  // namespace prbshare
