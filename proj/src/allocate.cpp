#include "prbshare/allocate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "prbshare/rng.hpp"

namespace prbshare {

namespace {

void validate_problem(const AllocationProblem& problem) {
    if (!(problem.pool_size > 0.0)) throw std::invalid_argument("pool_size must be positive");
    if (!(problem.gamma > 0.0 && problem.gamma < 1.0)) {
        throw std::invalid_argument("gamma must lie strictly inside (0,1)");
    }
    validate_stats(problem.stats_a, "stats_a");
    validate_stats(problem.stats_b, "stats_b");
}

/// Per-network quadratic coefficients: the objective contribution of network
/// X is weight * (n*(n*k - 2m) + const). Max variant uses m=1/M, k=1/M^2.
struct QuadCoef {
    double m = 0.0;
    double k = 0.0;
};

QuadCoef coef_for(const DemandStats& stats, Variant variant) {
    if (variant == Variant::Max) {
        return {1.0 / stats.maximum, 1.0 / (stats.maximum * stats.maximum)};
    }
    const InvMoments mom = inv_moments(stats);
    return {mom.m, mom.k};
}

}  // namespace

DemandStats stats_from_values(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("stats_from_values: empty series");
    double sum = 0.0;
    double mx = values.front();
    for (double v : values) {
        if (!(v > 0.0)) {
            throw std::invalid_argument("stats_from_values: demand values must be strictly positive");
        }
        sum += v;
        mx = std::max(mx, v);
    }
    const double mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, ss / static_cast<double>(values.size()), mx};
}

DemandStats stats_from_series(const PrbSeries& series) { return stats_from_values(series.values); }

void validate_stats(const DemandStats& stats, const std::string& who) {
    if (!(stats.mean > 0.0)) throw std::invalid_argument(who + ": mean must be positive");
    if (!(stats.variance >= 0.0)) throw std::invalid_argument(who + ": variance must be non-negative");
    if (!(stats.maximum >= stats.mean)) {
        throw std::invalid_argument(who + ": maximum must be >= mean");
    }
}

InvMoments inv_moments(const DemandStats& stats) {
    if (!(stats.mean > 0.0)) throw std::invalid_argument("inv_moments: mean must be positive");
    const double mu = stats.mean;
    const double var = stats.variance;
    return {1.0 / mu + var / (mu * mu * mu), 1.0 / (mu * mu) + 3.0 * var / (mu * mu * mu * mu)};
}

Variant variant_from_string(const std::string& s) {
    if (s == "max" || s == "Max" || s == "MAX") return Variant::Max;
    if (s == "avg" || s == "Avg" || s == "AVG") return Variant::Avg;
    throw std::invalid_argument("unknown variant: " + s);
}

std::string to_string(Variant v) { return v == Variant::Max ? "max" : "avg"; }

double objective(const AllocationProblem& problem, double n_a, double n_b) {
    if (n_a < 0.0 || n_b < 0.0) throw std::invalid_argument("objective: allocations must be >= 0");
    const double g = problem.gamma;
    if (problem.variant == Variant::Max) {
        const double fa = (n_a - problem.stats_a.maximum) / problem.stats_a.maximum;
        const double fb = (n_b - problem.stats_b.maximum) / problem.stats_b.maximum;
        return g * fa * fa + (1.0 - g) * fb * fb;
    }
    const QuadCoef ca = coef_for(problem.stats_a, Variant::Avg);
    const QuadCoef cb = coef_for(problem.stats_b, Variant::Avg);
    return 1.0 + g * n_a * (n_a * ca.k - 2.0 * ca.m) + (1.0 - g) * n_b * (n_b * cb.k - 2.0 * cb.m);
}

AllocationResult solve(const AllocationProblem& problem) {
    validate_problem(problem);
    const double pool = problem.pool_size;
    const double g = problem.gamma;
    const QuadCoef ca = coef_for(problem.stats_a, problem.variant);
    const QuadCoef cb = coef_for(problem.stats_b, problem.variant);

    // Unconstrained per-network targets, clipped into the box.
    const double target_a = std::min(ca.m / ca.k, pool);
    const double target_b = std::min(cb.m / cb.k, pool);

    AllocationResult result;
    if (target_a + target_b <= pool) {
        result.n_a = target_a;
        result.n_b = target_b;
        result.constraint_active = false;
    } else {
        // Restrict to n_a + n_b = pool and take the 1-D quadratic's vertex.
        const double vertex =
            (g * ca.m + (1.0 - g) * (cb.k * pool - cb.m)) / (g * ca.k + (1.0 - g) * cb.k);
        result.n_a = std::clamp(vertex, 0.0, pool);
        result.n_b = pool - result.n_a;
        result.constraint_active = true;
    }

    if (problem.integer_mode) {
        // Evaluate the lattice points around the continuous optimum, plus the
        // diagonal cells along the active constraint line; convexity keeps
        // the integer optimum within this neighborhood.
        const auto line_budget = static_cast<long long>(std::floor(pool));
        const double ca_cont = result.n_a;
        const double cb_cont = result.n_b;
        double best_obj = std::numeric_limits<double>::infinity();
        long long best_a = -1, best_b = -1;
        auto consider = [&](long long a, long long b) {
            if (a < 0 || b < 0) return;
            if (static_cast<double>(a) > pool || static_cast<double>(b) > pool) return;
            if (a + b > line_budget) return;
            const double obj = objective(problem, static_cast<double>(a), static_cast<double>(b));
            if (obj < best_obj || (obj == best_obj && a > best_a)) {
                best_obj = obj;
                best_a = a;
                best_b = b;
            }
        };
        const auto lo_a = static_cast<long long>(std::floor(ca_cont)) - 2;
        const auto lo_b = static_cast<long long>(std::floor(cb_cont)) - 2;
        for (long long a = lo_a; a <= lo_a + 5; ++a) {
            for (long long b = lo_b; b <= lo_b + 5; ++b) consider(a, b);
            consider(a, line_budget - a);
        }
        for (long long b = lo_b; b <= lo_b + 5; ++b) consider(line_budget - b, b);

        result.n_a = static_cast<double>(best_a);
        result.n_b = static_cast<double>(best_b);
    }

    result.objective = objective(problem, result.n_a, result.n_b);
    result.fairness =
        (result.n_a == 0.0 && result.n_b == 0.0) ? 0.0 : jain_index(result.n_a, result.n_b);
    return result;
}

double surplus_deficit(double n_star, std::span<const double> demands) {
    if (demands.empty()) throw std::invalid_argument("surplus_deficit: empty demand sequence");
    double sum = 0.0;
    for (double d : demands) {
        if (!(d > 0.0)) throw std::invalid_argument("surplus_deficit: demands must be strictly positive");
        sum += (n_star - d) / d;
    }
    return sum / static_cast<double>(demands.size());
}

double jain_index(double n_a, double n_b) {
    if (n_a == 0.0 && n_b == 0.0) throw std::invalid_argument("jain_index: undefined at (0,0)");
    const double s = n_a + n_b;
    return s * s / (2.0 * (n_a * n_a + n_b * n_b));
}

std::vector<SweepRecord> gamma_sweep(const DemandStats& stats_a, const DemandStats& stats_b,
                                     double pool_size, Variant variant, bool integer_mode,
                                     std::span<const double> gammas,
                                     std::span<const double> demands_a,
                                     std::span<const double> demands_b) {
    if (gammas.empty()) throw std::invalid_argument("gamma_sweep: no gamma values");
    std::vector<SweepRecord> records;
    records.reserve(gammas.size());
    for (double gamma : gammas) {
        AllocationProblem problem{pool_size, gamma, stats_a, stats_b, variant, integer_mode};
        SweepRecord rec;
        rec.gamma = gamma;
        rec.pool_size = pool_size;
        rec.alloc = solve(problem);
        rec.surplus_a = surplus_deficit(rec.alloc.n_a, demands_a);
        rec.surplus_b = surplus_deficit(rec.alloc.n_b, demands_b);
        records.push_back(rec);
    }
    return records;
}

ConvexityReport convexity_check(const AllocationProblem& problem, std::uint64_t seed, int segments) {
    validate_problem(problem);
    ConvexityReport report;
    const QuadCoef ca = coef_for(problem.stats_a, problem.variant);
    const QuadCoef cb = coef_for(problem.stats_b, problem.variant);
    report.hessian_aa = 2.0 * problem.gamma * ca.k;
    report.hessian_bb = 2.0 * (1.0 - problem.gamma) * cb.k;
    report.diagonals_positive = report.hessian_aa > 0.0 && report.hessian_bb > 0.0;

    rng::Engine rng(seed);
    auto random_feasible = [&]() {
        // Uniform over the triangle n_a + n_b <= pool via rejection.
        while (true) {
            const double a = rng.uniform(0.0, problem.pool_size);
            const double b = rng.uniform(0.0, problem.pool_size);
            if (a + b <= problem.pool_size) return std::pair{a, b};
        }
    };
    report.max_midpoint_violation = 0.0;
    for (int s = 0; s < segments; ++s) {
        const auto [pa, pb] = random_feasible();
        const auto [qa, qb] = random_feasible();
        const double j_mid = objective(problem, 0.5 * (pa + qa), 0.5 * (pb + qb));
        const double j_avg = 0.5 * (objective(problem, pa, pb) + objective(problem, qa, qb));
        report.max_midpoint_violation = std::max(report.max_midpoint_violation, j_mid - j_avg);
    }
    report.midpoint_ok = report.max_midpoint_violation <= 1e-9;
    return report;
}

}  // namespace prbshare
