#include "prbshare/ets.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace prbshare {

EtsTrend ets_trend_from_string(const std::string& s) {
    if (s == "none" || s.empty()) return EtsTrend::None;
    if (s == "add" || s == "additive") return EtsTrend::Additive;
    if (s == "mul" || s == "multiplicative") return EtsTrend::Multiplicative;
    throw std::invalid_argument("unknown ETS trend: " + s);
}

std::string to_string(EtsTrend trend) {
    switch (trend) {
        case EtsTrend::None: return "none";
        case EtsTrend::Additive: return "add";
        case EtsTrend::Multiplicative: return "mul";
    }
    return "none";
}

double EtsModel::forecast() const {
    switch (params_.trend) {
        case EtsTrend::None: return level_;
        case EtsTrend::Additive: return level_ + params_.phi * trend_state_;
        case EtsTrend::Multiplicative: return level_ * std::pow(trend_state_, params_.phi);
    }
    return level_;
}

void EtsModel::update(double y) {
    const double alpha = params_.alpha;
    const double beta = params_.beta;
    const double phi = params_.phi;
    switch (params_.trend) {
        case EtsTrend::None:
            level_ = alpha * y + (1.0 - alpha) * level_;
            break;
        case EtsTrend::Additive: {
            const double prev = level_;
            level_ = alpha * y + (1.0 - alpha) * (prev + phi * trend_state_);
            trend_state_ = beta * (level_ - prev) + (1.0 - beta) * phi * trend_state_;
            break;
        }
        case EtsTrend::Multiplicative: {
            const double prev = level_;
            const double damped_growth = std::pow(trend_state_, phi);
            level_ = alpha * y + (1.0 - alpha) * prev * damped_growth;
            trend_state_ = beta * (level_ / prev) + (1.0 - beta) * damped_growth;
            break;
        }
    }
}

void EtsModel::init_state(std::span<const double> train) {
    level_ = train[0];
    switch (params_.trend) {
        case EtsTrend::None:
            trend_state_ = 0.0;
            break;
        case EtsTrend::Additive:
            trend_state_ = train[1] - train[0];
            break;
        case EtsTrend::Multiplicative:
            trend_state_ = train[1] / train[0];
            break;
    }
}

double EtsModel::sse_for(std::span<const double> train, const EtsParams& params) {
    EtsModel m;
    m.params_ = params;
    m.init_state(train);
    double sse = 0.0;
    for (std::size_t t = 1; t < train.size(); ++t) {
        const double err = train[t] - m.forecast();
        m.update(train[t]);
        sse += err * err;
    }
    return std::isfinite(sse) ? sse : std::numeric_limits<double>::infinity();
}

EtsModel EtsModel::with_params(std::span<const double> train, const EtsParams& params) {
    if (train.size() < 2) throw std::invalid_argument("EtsModel: need at least 2 observations");
    if (params.trend == EtsTrend::Multiplicative) {
        for (double v : train) {
            if (v <= 0.0) {
                throw std::invalid_argument("EtsModel: multiplicative trend requires strictly positive data");
            }
        }
    }
    EtsModel m;
    m.params_ = params;
    m.init_state(train);
    for (std::size_t t = 1; t < train.size(); ++t) m.update(train[t]);
    return m;
}

EtsModel EtsModel::fit(std::span<const double> train, EtsTrend trend, bool damped) {
    if (train.size() < 10) throw std::invalid_argument("EtsModel::fit: need at least 10 observations");
    if (trend == EtsTrend::Multiplicative) {
        for (double v : train) {
            if (v <= 0.0) {
                throw std::invalid_argument("EtsModel::fit: multiplicative trend requires strictly positive data");
            }
        }
    }

    EtsParams best;
    best.trend = trend;
    best.damped = damped;
    double best_sse = std::numeric_limits<double>::infinity();

    const bool has_trend = trend != EtsTrend::None;
    for (int ai = 0; ai < 50; ++ai) {
        const double alpha = 0.01 + 0.02 * ai;
        const int beta_steps = has_trend ? 50 : 1;
        for (int bi = 0; bi < beta_steps; ++bi) {
            const double beta = has_trend ? 0.01 + 0.02 * bi : 0.0;
            const int phi_steps = (has_trend && damped) ? 10 : 1;
            for (int pi = 0; pi < phi_steps; ++pi) {
                const double phi = (has_trend && damped) ? 0.80 + 0.02 * pi : 1.0;
                EtsParams cand{trend, damped, alpha, beta, phi};
                const double sse = sse_for(train, cand);
                if (sse < best_sse) {
                    best_sse = sse;
                    best = cand;
                }
            }
        }
    }
    if (!std::isfinite(best_sse)) {
        throw std::runtime_error("EtsModel::fit: no finite-SSE parameter combination");
    }
    return with_params(train, best);
}

}  // namespace prbshare
