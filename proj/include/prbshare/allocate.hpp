#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "prbshare/series.hpp"

namespace prbshare {

/// Summary statistics of a demand profile, the only inputs the optimizers
/// need. Population (not sample) variance.
struct DemandStats {
    double mean = 0.0;      // > 0
    double variance = 0.0;  // >= 0
    double maximum = 0.0;   // >= mean
};

/// Population mean/variance and maximum of a strictly positive series.
/// Values <= 0 are rejected: the average-objective moments and the
/// surplus/deficit metric both divide by demand.
DemandStats stats_from_series(const PrbSeries& series);
DemandStats stats_from_values(std::span<const double> values);
void validate_stats(const DemandStats& stats, const std::string& who);

/// Second-order Taylor approximations of the inverse demand moments:
///   m = E[1/D]  ~ 1/mu + var/mu^3
///   k = E[1/D^2] ~ 1/mu^2 + 3 var/mu^4
struct InvMoments {
    double m = 0.0;
    double k = 0.0;
};
InvMoments inv_moments(const DemandStats& stats);

enum class Variant { Max, Avg };
Variant variant_from_string(const std::string& s);
std::string to_string(Variant v);

struct AllocationProblem {
    double pool_size = 0.0;  // > 0
    double gamma = 0.5;      // strictly inside (0,1)
    DemandStats stats_a;     // network A (LTE)
    DemandStats stats_b;     // network B (NR)
    Variant variant = Variant::Max;
    bool integer_mode = false;
};

struct AllocationResult {
    double n_a = 0.0;
    double n_b = 0.0;
    double objective = 0.0;
    double fairness = 0.0;  // Jain's index of (n_a, n_b)
    bool constraint_active = false;
};

/// Weighted sum of squared fractional surpluses/deficits at (n_a, n_b).
/// Max variant measures against each network's maximum demand; Avg variant
/// is the expected objective 1 + g*n_a*(n_a*k_a - 2*m_a) + (1-g)*n_b*(...)
/// built from the Taylor inverse moments.
double objective(const AllocationProblem& problem, double n_a, double n_b);

/// Exact minimizer of the objective over {n_a + n_b <= pool, 0 <= n <= pool}.
///
/// Both variants are separable convex quadratics, so the KKT solution is
/// closed-form: each network's unconstrained target is m/k (which reduces to
/// the maximum demand for the Max variant). If the targets fit in the pool
/// the constraint is inactive and they are returned as-is; otherwise the
/// optimum lies on n_a + n_b = pool and the 1-D quadratic's vertex
///   n_a = [g*m_a + (1-g)*(k_b*pool - m_b)] / [g*k_a + (1-g)*k_b]
/// is clipped into [0, pool]. In integer mode the objective is evaluated on
/// the feasible lattice points adjacent to the continuous optimum (plus the
/// ones along the active constraint line) and the best is returned, ties
/// broken toward larger n_a.
AllocationResult solve(const AllocationProblem& problem);

/// Average normalized surplus (+) or deficit (-) of an allocation against a
/// sequence of realized demands: mean of (n_star - D_i) / D_i.
double surplus_deficit(double n_star, std::span<const double> demands);

/// Jain's fairness index (n_a+n_b)^2 / (2 (n_a^2+n_b^2)); 1 iff equal.
double jain_index(double n_a, double n_b);

struct SweepRecord {
    double gamma = 0.0;
    double pool_size = 0.0;
    AllocationResult alloc;
    double surplus_a = 0.0;
    double surplus_b = 0.0;
};

/// Solve for each gamma and score the partition against the supplied actual
/// demand sequences. Records are returned in gamma order.
std::vector<SweepRecord> gamma_sweep(const DemandStats& stats_a, const DemandStats& stats_b,
                                     double pool_size, Variant variant, bool integer_mode,
                                     std::span<const double> gammas,
                                     std::span<const double> demands_a,
                                     std::span<const double> demands_b);

/// Self-check of the convexity argument: the analytic Hessian diagonals
/// (off-diagonals are identically zero) must be positive, and the objective
/// must satisfy midpoint convexity on random feasible segments.
struct ConvexityReport {
    double hessian_aa = 0.0;
    double hessian_bb = 0.0;
    bool diagonals_positive = false;
    double max_midpoint_violation = 0.0;
    bool midpoint_ok = false;
};
ConvexityReport convexity_check(const AllocationProblem& problem, std::uint64_t seed = 0,
                                int segments = 100);

}  // namespace prbshare
