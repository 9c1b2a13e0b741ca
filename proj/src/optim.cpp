#include "prbshare/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace prbshare {

MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                           std::vector<double> x0, double step, int max_iter, double tol) {
    const std::size_t n = x0.size();
    if (n == 0) throw std::invalid_argument("nelder_mead: empty start point");

    // Standard coefficients: reflection 1, expansion 2, contraction 1/2, shrink 1/2.
    constexpr double kAlpha = 1.0, kGamma = 2.0, kRho = 0.5, kSigma = 0.5;

    std::vector<std::vector<double>> simplex(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

    std::vector<std::size_t> order(n + 1);
    MinimizeResult result;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order[0], worst = order[n], second_worst = order[n - 1];

        if (std::abs(fv[worst] - fv[best]) <= tol * (std::abs(fv[best]) + tol)) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[i][d];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        auto blend = [&](double coef) {
            std::vector<double> x(n);
            for (std::size_t d = 0; d < n; ++d) {
                x[d] = centroid[d] + coef * (centroid[d] - simplex[worst][d]);
            }
            return x;
        };

        std::vector<double> xr = blend(kAlpha);
        const double fr = f(xr);
        if (fr < fv[order[0]]) {
            std::vector<double> xe = blend(kGamma);
            const double fe = f(xe);
            if (fe < fr) {
                simplex[worst] = std::move(xe);
                fv[worst] = fe;
            } else {
                simplex[worst] = std::move(xr);
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second_worst]) {
            simplex[worst] = std::move(xr);
            fv[worst] = fr;
            continue;
        }
        std::vector<double> xc = blend(fr < fv[worst] ? kRho : -kRho);
        const double fc = f(xc);
        if (fc < std::min(fr, fv[worst])) {
            simplex[worst] = std::move(xc);
            fv[worst] = fc;
            continue;
        }
        // Shrink toward the best vertex.
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t d = 0; d < n; ++d) {
                simplex[i][d] = simplex[best][d] + kSigma * (simplex[i][d] - simplex[best][d]);
            }
            fv[i] = f(simplex[i]);
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        if (fv[i] < fv[best]) best = i;
    }
    result.x = simplex[best];
    result.value = fv[best];
    result.iterations = iter;
    return result;
}

}  // namespace prbshare
