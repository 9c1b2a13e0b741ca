#include "prbshare/arima.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "prbshare/optim.hpp"

namespace prbshare {

namespace {

// Residuals are zero for t < p (conditioning window); lagged residuals that
// fall before the window are likewise treated as zero.
double css_objective(std::span<const double> w, int p, int q, bool with_constant,
                     const std::vector<double>& params, std::vector<double>* resid_out = nullptr) {
    const int m = static_cast<int>(w.size());
    int idx = 0;
    const double c = with_constant ? params[idx++] : 0.0;
    const double* ar = params.data() + idx;
    const double* ma = params.data() + idx + p;

    std::vector<double> e(static_cast<std::size_t>(m), 0.0);
    double sse = 0.0;
    for (int t = p; t < m; ++t) {
        double pred = c;
        for (int i = 1; i <= p; ++i) pred += ar[i - 1] * w[t - i];
        for (int j = 1; j <= q; ++j) {
            if (t - j >= p) pred += ma[j - 1] * e[t - j];
        }
        e[t] = w[t] - pred;
        sse += e[t] * e[t];
    }
    if (resid_out) *resid_out = std::move(e);
    return sse;
}

}  // namespace

std::vector<double> difference(std::span<const double> values, int d) {
    std::vector<double> w(values.begin(), values.end());
    for (int k = 0; k < d; ++k) {
        if (w.size() < 2) throw std::invalid_argument("difference: series too short");
        for (std::size_t i = 0; i + 1 < w.size(); ++i) w[i] = w[i + 1] - w[i];
        w.pop_back();
    }
    return w;
}

ArimaModel ArimaModel::fit(std::span<const double> train, int p, int d, int q,
                           bool with_constant, const std::vector<double>* warm_start) {
    if (p < 0 || d < 0 || q < 0) throw std::invalid_argument("ArimaModel::fit: orders must be >= 0");
    if (static_cast<int>(train.size()) <= p + d + q + 5) {
        throw std::invalid_argument("ArimaModel::fit: series too short for requested orders");
    }

    const std::vector<double> w = difference(train, d);
    const int n_params = (with_constant ? 1 : 0) + p + q;

    ArimaModel model;
    model.p_ = p;
    model.d_ = d;
    model.q_ = q;
    model.with_constant_ = with_constant;
    model.ar_.assign(p, 0.0);
    model.ma_.assign(q, 0.0);

    if (n_params == 0) return model;

    std::vector<double> x0(n_params, 0.0);
    if (with_constant) {
        double mean = 0.0;
        for (double v : w) mean += v;
        x0[0] = mean / static_cast<double>(w.size());
    }
    if (warm_start && static_cast<int>(warm_start->size()) == n_params) x0 = *warm_start;

    auto objective = [&](const std::vector<double>& params) {
        for (double v : params) {
            if (!std::isfinite(v) || std::abs(v) > 1e3) return 1e300;
        }
        const double sse = css_objective(w, p, q, with_constant, params);
        return std::isfinite(sse) ? sse : 1e300;
    };

    const MinimizeResult res = nelder_mead(objective, x0, 0.1, 200 * n_params + 400, 1e-12);
    if (!std::isfinite(res.value) || res.value >= 1e300) {
        throw std::runtime_error("ArimaModel::fit: non-finite objective during fit");
    }

    int idx = 0;
    if (with_constant) model.constant_ = res.x[idx++];
    for (int i = 0; i < p; ++i) model.ar_[i] = res.x[idx++];
    for (int j = 0; j < q; ++j) model.ma_[j] = res.x[idx++];
    return model;
}

double ArimaModel::forecast(std::span<const double> history) const {
    if (static_cast<int>(history.size()) < p_ + d_ + 1) {
        throw std::invalid_argument("ArimaModel::forecast: insufficient history");
    }
    const std::vector<double> w = difference(history, d_);
    const int m = static_cast<int>(w.size());

    std::vector<double> params = parameter_vector();
    std::vector<double> e;
    css_objective(w, p_, q_, with_constant_, params, &e);

    double pred = constant_;
    for (int i = 1; i <= p_; ++i) {
        if (m - i >= 0) pred += ar_[i - 1] * w[m - i];
    }
    for (int j = 1; j <= q_; ++j) {
        if (m - j >= p_) pred += ma_[j - 1] * e[m - j];
    }

    // Undo the differencing: add back the last value of each difference level.
    std::vector<double> level(history.begin(), history.end());
    double forecast_value = pred;
    for (int k = 0; k < d_; ++k) {
        forecast_value += level.back();
        for (std::size_t i = 0; i + 1 < level.size(); ++i) level[i] = level[i + 1] - level[i];
        level.pop_back();
    }
    return forecast_value;
}

std::vector<double> ArimaModel::parameter_vector() const {
    std::vector<double> params;
    if (with_constant_) params.push_back(constant_);
    params.insert(params.end(), ar_.begin(), ar_.end());
    params.insert(params.end(), ma_.begin(), ma_.end());
    return params;
}

}  // namespace prbshare
