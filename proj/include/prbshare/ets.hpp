#pragma once

#include <span>
#include <string>

namespace prbshare {

enum class EtsTrend { None, Additive, Multiplicative };

EtsTrend ets_trend_from_string(const std::string& s);
std::string to_string(EtsTrend trend);

struct EtsParams {
    EtsTrend trend = EtsTrend::None;
    bool damped = false;
    double alpha = 0.5;
    double beta = 0.1;
    double phi = 1.0;
};

/// Holt-family exponential smoothing (level + optional additive or
/// multiplicative trend, optional damping, no seasonal component). Smoothing
/// parameters are fit by minimizing in-sample one-step SSE over a coarse
/// deterministic grid: alpha, beta in {0.01, 0.03, ..., 0.99} and phi in
/// {0.80, 0.82, ..., 0.98} when damped.
class EtsModel {
public:
    static EtsModel fit(std::span<const double> train, EtsTrend trend, bool damped);
    /// Run the recursion over `train` with fixed parameters (no fitting).
    static EtsModel with_params(std::span<const double> train, const EtsParams& params);

    /// One-step-ahead forecast from the current state.
    double forecast() const;
    /// Consume one observation and advance the state.
    void update(double y);

    const EtsParams& params() const { return params_; }
    double level() const { return level_; }
    double trend_state() const { return trend_state_; }

private:
    EtsModel() = default;
    void init_state(std::span<const double> train);
    static double sse_for(std::span<const double> train, const EtsParams& params);

    EtsParams params_;
    double level_ = 0.0;
    double trend_state_ = 0.0;  // additive: slope; multiplicative: growth ratio
};

}  // namespace prbshare
