#include "prbshare/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "prbshare/rng.hpp"

namespace prbshare {

PrbSeries generate_surrogate(const PrbSeries& reference, const SynthConfig& config) {
    const std::size_t n = reference.values.size();
    if (config.block_len < 1) throw std::invalid_argument("generate_surrogate: block_len must be >= 1");
    if (config.target_len < 1) throw std::invalid_argument("generate_surrogate: target_len must be >= 1");
    if (n < config.block_len) {
        throw std::invalid_argument("generate_surrogate: reference shorter than block_len");
    }

    rng::Engine rng(config.seed);
    const std::size_t n_starts = n - config.block_len + 1;

    PrbSeries out;
    out.start_time_ms = reference.start_time_ms;
    out.granularity_ms = reference.granularity_ms;
    out.label = reference.label;
    out.values.reserve(config.target_len);
    while (out.values.size() < config.target_len) {
        const std::size_t start = rng.index(n_starts);
        for (std::size_t k = 0; k < config.block_len && out.values.size() < config.target_len; ++k) {
            out.values.push_back(reference.values[start + k]);
        }
    }
    if (config.jitter_std > 0.0) {
        for (double& v : out.values) {
            v = std::max(0.0, v + rng.normal(0.0, config.jitter_std));
        }
    }
    return out;
}

SimilarityReport similarity_report(const PrbSeries& a, const PrbSeries& b, std::size_t n_bins) {
    if (a.values.empty() || b.values.empty()) {
        throw std::invalid_argument("similarity_report: series must be non-empty");
    }
    if (n_bins == 0) throw std::invalid_argument("similarity_report: n_bins must be >= 1");

    auto moments = [](const std::vector<double>& v, double& mean, double& var, double& mx) {
        double sum = 0;
        mx = v.front();
        for (double x : v) {
            sum += x;
            mx = std::max(mx, x);
        }
        mean = sum / static_cast<double>(v.size());
        double ss = 0;
        for (double x : v) ss += (x - mean) * (x - mean);
        var = ss / static_cast<double>(v.size());
    };

    SimilarityReport rep;
    moments(a.values, rep.mean_a, rep.variance_a, rep.max_a);
    moments(b.values, rep.mean_b, rep.variance_b, rep.max_b);

    std::vector<double> sa = a.values, sb = b.values;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    // Exact two-sample KS: sweep the merged order statistics and track the
    // largest gap between the two empirical CDFs.
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d_max = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= x) ++i;
        while (j < sb.size() && sb[j] <= x) ++j;
        d_max = std::max(d_max, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    d_max = std::max(d_max, std::abs(1.0 - static_cast<double>(j) / nb));
    d_max = std::max(d_max, std::abs(static_cast<double>(i) / na - 1.0));
    rep.ks_statistic = d_max;

    const double lo = std::min(sa.front(), sb.front());
    const double hi = std::max(sa.back(), sb.back());
    auto ecdf = [](const std::vector<double>& sorted, double x) {
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
        return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
    };
    rep.cdf.reserve(n_bins + 1);
    for (std::size_t k = 0; k <= n_bins; ++k) {
        const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n_bins);
        rep.cdf.push_back({x, ecdf(sa, x), ecdf(sb, x)});
    }
    return rep;
}

}  // namespace prbshare
