#pragma once

#include <span>
#include <vector>

namespace prbshare {

/// ARIMA(p,d,q) with an optional constant, estimated by conditional sum of
/// squares: the series is differenced d times, one-step residuals are run
/// with zero-initialized innovations conditioning on the first p
/// observations, and the squared-residual sum is minimized with a
/// derivative-free simplex search.
class ArimaModel {
public:
    /// Fit on a training window. warm_start, when given, seeds the optimizer
    /// with a previous parameter vector (used by walk-forward refits).
    static ArimaModel fit(std::span<const double> train, int p, int d, int q,
                          bool with_constant,
                          const std::vector<double>* warm_start = nullptr);

    /// One-step-ahead forecast from a history window: difference, replay the
    /// residual recursion with the fitted coefficients, apply the AR/MA
    /// prediction, then invert the differencing.
    double forecast(std::span<const double> history) const;

    int p() const { return p_; }
    int d() const { return d_; }
    int q() const { return q_; }
    bool with_constant() const { return with_constant_; }
    double constant() const { return constant_; }
    const std::vector<double>& ar() const { return ar_; }
    const std::vector<double>& ma() const { return ma_; }
    /// Flat parameter vector as used by the optimizer ([c?, ar..., ma...]).
    std::vector<double> parameter_vector() const;

private:
    ArimaModel() = default;

    int p_ = 0, d_ = 0, q_ = 0;
    bool with_constant_ = false;
    double constant_ = 0.0;
    std::vector<double> ar_;
    std::vector<double> ma_;
};

/// d-fold first differencing (length shrinks by d).
std::vector<double> difference(std::span<const double> values, int d);

}  // namespace prbshare
