#include <stdexcept>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "prbshare/allocate.hpp"
#include "prbshare/rng.hpp"

using namespace prbshare;

namespace {

const DemandStats kPaperA{21.52, 12.37, 26.31};
const DemandStats kPaperB{22.80, 8.33, 25.80};

AllocationProblem make_problem(double pool, double gamma, Variant variant, bool integer_mode,
                               DemandStats a = kPaperA, DemandStats b = kPaperB) {
    return AllocationProblem{pool, gamma, a, b, variant, integer_mode};
}

// Independent oracle: exhaustive integer enumeration with the same
// larger-n_a tie-break the solver documents.
std::pair<double, double> enumerate_integer(const AllocationProblem& problem) {
    const long long budget = static_cast<long long>(std::floor(problem.pool_size));
    double best_obj = std::numeric_limits<double>::infinity();
    long long best_a = -1, best_b = -1;
    for (long long a = 0; a <= budget; ++a) {
        for (long long b = 0; a + b <= budget; ++b) {
            const double obj =
                objective(problem, static_cast<double>(a), static_cast<double>(b));
            if (obj < best_obj || (obj == best_obj && a > best_a)) {
                best_obj = obj;
                best_a = a;
                best_b = b;
            }
        }
    }
    return {static_cast<double>(best_a), static_cast<double>(best_b)};
}

// Independent oracle: brute-force minimum over the 0.01-step feasible grid.
double grid_minimum(const AllocationProblem& problem, double step = 0.01) {
    double best = std::numeric_limits<double>::infinity();
    const auto n_steps = static_cast<long long>(std::floor(problem.pool_size / step));
    for (long long i = 0; i <= n_steps; ++i) {
        const double a = static_cast<double>(i) * step;
        for (long long j = 0; j <= n_steps - i; ++j) {
            best = std::min(best, objective(problem, a, static_cast<double>(j) * step));
        }
    }
    return best;
}

DemandStats random_stats(rng::Engine& rng) {
    const double mean = rng.uniform(5, 50);
    const double variance = rng.uniform(0, mean);
    const double maximum = mean * rng.uniform(1.0, 2.0);
    return {mean, variance, maximum};
}

}  // namespace

TEST_CASE("stats_from_values hand cases") {
    const DemandStats flat = stats_from_values(std::vector<double>{2, 2, 2});
    CHECK(flat.mean == 2.0);
    CHECK(flat.variance == 0.0);
    CHECK(flat.maximum == 2.0);

    const DemandStats two = stats_from_values(std::vector<double>{1, 3});
    CHECK(two.mean == 2.0);
    CHECK(two.variance == 1.0);
    CHECK(two.maximum == 3.0);
}

TEST_CASE("stats_from_values rejects non-positive demand") {
    CHECK_THROWS_AS(stats_from_values(std::vector<double>{1, 0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(stats_from_values(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("inv_moments is exact for a degenerate distribution") {
    const InvMoments mom = inv_moments({2.0, 0.0, 2.0});
    CHECK(mom.m == 0.5);
    CHECK(mom.k == 0.25);
}

TEST_CASE("inv_moments matches the Taylor formulas on the paper statistics") {
    const InvMoments a = inv_moments(kPaperA);
    CHECK(a.m == doctest::Approx(0.04770960472145314).epsilon(1e-14));
    CHECK(a.k == doctest::Approx(0.002332342527434095).epsilon(1e-14));
    CHECK(a.m == doctest::Approx(0.047709).epsilon(1e-4));
    CHECK(a.k == doctest::Approx(0.0023323).epsilon(1e-4));

    const InvMoments b = inv_moments(kPaperB);
    CHECK(b.m == doctest::Approx(0.04456246321405236).epsilon(1e-14));
    CHECK(b.k == doctest::Approx(0.0020161443594975026).epsilon(1e-14));
    CHECK(b.m == doctest::Approx(0.044563).epsilon(1e-4));
    CHECK(b.k == doctest::Approx(0.0020161).epsilon(1e-4));
}

TEST_CASE("objective hand cases") {
    const AllocationProblem max10 = make_problem(40, 0.5, Variant::Max, false, {8, 0, 10}, {8, 0, 10});
    CHECK(objective(max10, 10, 10) == 0.0);
    CHECK(objective(max10, 0, 0) == 1.0);

    // Constant demand: matching the mean exactly zeroes the expected objective.
    const AllocationProblem avg = make_problem(40, 0.3, Variant::Avg, false, {12, 0, 12}, {7, 0, 7});
    CHECK(objective(avg, 12, 7) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("solve returns the targets when the pool is abundant") {
    for (double gamma : {0.1, 0.5, 0.9}) {
        const AllocationResult res = solve(make_problem(60, gamma, Variant::Max, false));
        CHECK(res.n_a == doctest::Approx(26.31).epsilon(1e-12));
        CHECK(res.n_b == doctest::Approx(25.80).epsilon(1e-12));
        CHECK(res.objective == doctest::Approx(0.0).epsilon(1e-12));
        CHECK_FALSE(res.constraint_active);
    }
}

TEST_CASE("solve integer mode reproduces the fair split at gamma 0.80") {
    const AllocationResult res = solve(make_problem(40, 0.80, Variant::Avg, true));
    CHECK(res.n_a == 20.0);
    CHECK(res.n_b == 20.0);
    CHECK(res.fairness == 1.0);
    CHECK(res.constraint_active);
}

TEST_CASE("solve starves the deprioritized network under scarcity") {
    const AllocationResult integer = solve(make_problem(10, 0.99, Variant::Max, true));
    CHECK(integer.n_a == 10.0);
    CHECK(integer.n_b == 0.0);
    const AllocationResult continuous = solve(make_problem(10, 0.99, Variant::Max, false));
    CHECK(continuous.n_a == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(continuous.n_b == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("solver matches the integer-enumeration oracle exactly") {
    rng::Engine rng(2024);
    for (int rep = 0; rep < 60; ++rep) {
        AllocationProblem problem;
        problem.stats_a = random_stats(rng);
        problem.stats_b = random_stats(rng);
        problem.pool_size = rng.uniform(5, 100);
        problem.gamma = 0.05 + 0.05 * static_cast<double>(rng.index(19));
        problem.variant = rep % 2 == 0 ? Variant::Max : Variant::Avg;
        problem.integer_mode = true;
        const AllocationResult res = solve(problem);
        const auto [oracle_a, oracle_b] = enumerate_integer(problem);
        CHECK(res.n_a == oracle_a);
        CHECK(res.n_b == oracle_b);
    }
}

TEST_CASE("continuous solution is never worse than the 0.01-step grid") {
    rng::Engine rng(2025);
    for (int rep = 0; rep < 12; ++rep) {
        AllocationProblem problem;
        problem.stats_a = random_stats(rng);
        problem.stats_b = random_stats(rng);
        problem.pool_size = rng.uniform(5, 40);  // keeps the grid scan quick
        problem.gamma = 0.05 + 0.05 * static_cast<double>(rng.index(19));
        problem.variant = rep % 2 == 0 ? Variant::Max : Variant::Avg;
        problem.integer_mode = false;
        const AllocationResult res = solve(problem);
        CHECK(res.objective <= grid_minimum(problem) + 1e-6);
        CHECK(res.n_a + res.n_b <= problem.pool_size + 1e-9);
    }
}

TEST_CASE("OPT_max allocations scale with the problem") {
    rng::Engine rng(2026);
    for (int rep = 0; rep < 20; ++rep) {
        AllocationProblem problem = make_problem(rng.uniform(5, 60), rng.uniform(0.05, 0.95),
                                                 Variant::Max, false, random_stats(rng),
                                                 random_stats(rng));
        const double c = rng.uniform(0.5, 4.0);
        AllocationProblem scaled = problem;
        scaled.pool_size *= c;
        scaled.stats_a.mean *= c;
        scaled.stats_a.maximum *= c;
        scaled.stats_b.mean *= c;
        scaled.stats_b.maximum *= c;
        const AllocationResult base = solve(problem);
        const AllocationResult big = solve(scaled);
        CHECK(big.n_a == doctest::Approx(c * base.n_a).epsilon(1e-9));
        CHECK(big.n_b == doctest::Approx(c * base.n_b).epsilon(1e-9));
    }
}

TEST_CASE("priority weight moves the split monotonically on the active constraint") {
    AllocationProblem problem = make_problem(40, 0.5, Variant::Avg, false);
    double prev = -1.0;
    for (int i = 1; i <= 99; ++i) {
        problem.gamma = 0.01 * i;
        const AllocationResult res = solve(problem);
        REQUIRE(res.constraint_active);
        CHECK(res.n_a >= prev - 1e-12);
        prev = res.n_a;
    }
}

TEST_CASE("Avg with zero variance agrees with Max at maximum == mean") {
    rng::Engine rng(2027);
    for (int rep = 0; rep < 20; ++rep) {
        const double mu_a = rng.uniform(5, 50), mu_b = rng.uniform(5, 50);
        const double pool = rng.uniform(5, 80);
        const double gamma = rng.uniform(0.05, 0.95);
        const AllocationProblem avg =
            make_problem(pool, gamma, Variant::Avg, false, {mu_a, 0, mu_a}, {mu_b, 0, mu_b});
        const AllocationProblem mx =
            make_problem(pool, gamma, Variant::Max, false, {mu_a, 0, mu_a}, {mu_b, 0, mu_b});
        const AllocationResult ra = solve(avg);
        const AllocationResult rm = solve(mx);
        CHECK(ra.n_a == doctest::Approx(rm.n_a).epsilon(1e-9));
        CHECK(ra.n_b == doctest::Approx(rm.n_b).epsilon(1e-9));
    }
}

TEST_CASE("surplus_deficit hand cases and monotonicity") {
    CHECK(surplus_deficit(20, std::vector<double>{20, 20}) == 0.0);
    CHECK(surplus_deficit(0, std::vector<double>{4, 9}) == -1.0);
    CHECK(surplus_deficit(30, std::vector<double>{20, 40}) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK_THROWS_AS(surplus_deficit(5, std::vector<double>{1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(surplus_deficit(5, std::vector<double>{}), std::invalid_argument);

    rng::Engine rng(2028);
    std::vector<double> demands(10);
    for (double& d : demands) d = rng.uniform(1, 40);
    double prev = -std::numeric_limits<double>::infinity();
    for (double n = 0; n <= 50; n += 2.5) {
        const double s = surplus_deficit(n, demands);
        CHECK(s >= prev);
        prev = s;
    }
}

TEST_CASE("jain_index hand cases and bounds") {
    CHECK(jain_index(20, 20) == 1.0);
    CHECK(jain_index(10, 0) == 0.5);
    CHECK(jain_index(30, 10) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK_THROWS_AS(jain_index(0, 0), std::invalid_argument);

    rng::Engine rng(2029);
    for (int rep = 0; rep < 100; ++rep) {
        const double a = rng.uniform(0, 50);
        const double b = rng.uniform(0, 50);
        if (a == 0 && b == 0) continue;
        const double f = jain_index(a, b);
        CHECK(f >= 0.5);
        CHECK(f <= 1.0 + 1e-12);
    }
}

TEST_CASE("gamma_sweep composes solve and scoring") {
    const std::vector<double> gammas{0.8};
    const std::vector<double> demands_a{20, 22, 24};
    const std::vector<double> demands_b{21, 23, 25};
    const auto records = gamma_sweep(kPaperA, kPaperB, 40, Variant::Avg, true, gammas, demands_a,
                                     demands_b);
    REQUIRE(records.size() == 1);
    const AllocationResult direct = solve(make_problem(40, 0.8, Variant::Avg, true));
    CHECK(records[0].alloc.n_a == direct.n_a);
    CHECK(records[0].surplus_a == surplus_deficit(direct.n_a, demands_a));
    CHECK(records[0].surplus_b == surplus_deficit(direct.n_b, demands_b));
}

TEST_CASE("gamma_sweep is symmetric for symmetric inputs at gamma one half") {
    const DemandStats stats{20, 5, 25};
    const std::vector<double> demands{18, 20, 22};
    const auto records =
        gamma_sweep(stats, stats, 30, Variant::Avg, true, std::vector<double>{0.5}, demands, demands);
    REQUIRE(records.size() == 1);
    CHECK(records[0].surplus_a == records[0].surplus_b);
    CHECK(records[0].alloc.fairness == 1.0);
}

TEST_CASE("gamma_sweep fair region is a contiguous interval containing 0.80") {
    std::vector<double> gammas;
    for (int i = 1; i <= 99; ++i) gammas.push_back(0.01 * i);
    const std::vector<double> demands{21, 22};
    const auto records =
        gamma_sweep(kPaperA, kPaperB, 40, Variant::Avg, true, gammas, demands, demands);
    std::vector<int> fair;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].alloc.fairness == 1.0) fair.push_back(static_cast<int>(i));
    }
    REQUIRE_FALSE(fair.empty());
    for (std::size_t k = 0; k + 1 < fair.size(); ++k) CHECK(fair[k + 1] == fair[k] + 1);
    const double lo = records[fair.front()].gamma;
    const double hi = records[fair.back()].gamma;
    CHECK(lo <= 0.80);
    CHECK(hi >= 0.80);
}

TEST_CASE("convexity_check reports the analytic Hessian diagonals") {
    const AllocationProblem mx = make_problem(40, 0.37, Variant::Max, false);
    const ConvexityReport rep_max = convexity_check(mx, 7);
    CHECK(rep_max.hessian_aa == doctest::Approx(2 * 0.37 / (26.31 * 26.31)).epsilon(1e-12));
    CHECK(rep_max.hessian_bb == doctest::Approx(2 * 0.63 / (25.80 * 25.80)).epsilon(1e-12));
    CHECK(rep_max.diagonals_positive);
    CHECK(rep_max.midpoint_ok);

    const AllocationProblem avg = make_problem(40, 0.5, Variant::Avg, false);
    const ConvexityReport rep_avg = convexity_check(avg, 11);
    CHECK(rep_avg.hessian_aa == doctest::Approx(2 * 0.5 * inv_moments(kPaperA).k).epsilon(1e-12));
    CHECK(rep_avg.hessian_bb == doctest::Approx(2 * 0.5 * inv_moments(kPaperB).k).epsilon(1e-12));
    CHECK(rep_avg.midpoint_ok);
}

TEST_CASE("solve validates the problem invariants") {
    CHECK_THROWS_AS(solve(make_problem(40, 0.0, Variant::Max, false)), std::invalid_argument);
    CHECK_THROWS_AS(solve(make_problem(40, 1.0, Variant::Max, false)), std::invalid_argument);
    CHECK_THROWS_AS(solve(make_problem(0, 0.5, Variant::Max, false)), std::invalid_argument);
    CHECK_THROWS_AS(solve(make_problem(40, 0.5, Variant::Max, false, {0, 0, 0}, kPaperB)),
                    std::invalid_argument);
}
