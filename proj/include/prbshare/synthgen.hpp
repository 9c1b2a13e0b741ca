#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "prbshare/series.hpp"

namespace prbshare {

/// Parameters for the surrogate generator (seeded moving-block bootstrap
/// with additive Gaussian jitter, clamped at zero).
struct SynthConfig {
    std::uint64_t seed = 0;
    std::size_t block_len = 24;
    double jitter_std = 0.0;   // PRBs
    std::size_t target_len = 0;
};

/// Generate a series statistically similar to the reference: blocks of
/// block_len consecutive reference values are sampled uniformly with
/// replacement and concatenated until target_len values are produced, then
/// zero-mean Gaussian jitter of std jitter_std is added and the result is
/// clamped at 0. Deterministic for a fixed (reference, config).
PrbSeries generate_surrogate(const PrbSeries& reference, const SynthConfig& config);

/// Distributional comparison of two series: first two moments, maxima, the
/// exact two-sample Kolmogorov-Smirnov statistic, and an n_bins-point CDF
/// table for plotting.
struct SimilarityReport {
    double mean_a = 0, mean_b = 0;
    double variance_a = 0, variance_b = 0;
    double max_a = 0, max_b = 0;
    double ks_statistic = 0;
    // rows of {value, cdf_a(value), cdf_b(value)}
    std::vector<std::array<double, 3>> cdf;
};

SimilarityReport similarity_report(const PrbSeries& a, const PrbSeries& b, std::size_t n_bins);

}  // namespace prbshare
