#include "prbshare/mlp.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "prbshare/rng.hpp"

namespace prbshare {

MlpRegressor::MlpRegressor(const MlpConfig& config) : config_(config) {
    if (config.n_inputs < 1 || config.n_nodes < 1 || config.epochs < 1 || config.batch_size < 1) {
        throw std::invalid_argument("MlpRegressor: all dimensions must be >= 1");
    }
    rng::Engine rng(config.seed);
    const double lim1 = std::sqrt(6.0 / config.n_inputs);
    const double lim2 = std::sqrt(6.0 / config.n_nodes);
    w1_.resize(static_cast<std::size_t>(config.n_nodes) * config.n_inputs);
    b1_.assign(config.n_nodes, 0.0);
    w2_.resize(config.n_nodes);
    for (double& w : w1_) w = rng.uniform(-lim1, lim1);
    for (double& w : w2_) w = rng.uniform(-lim2, lim2);
}

double MlpRegressor::predict(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != config_.n_inputs) {
        throw std::invalid_argument("MlpRegressor::predict: wrong input width");
    }
    double out = b2_;
    for (int h = 0; h < config_.n_nodes; ++h) {
        double z = b1_[h];
        const double* row = w1_.data() + static_cast<std::size_t>(h) * config_.n_inputs;
        for (int i = 0; i < config_.n_inputs; ++i) z += row[i] * x[i];
        if (z > 0.0) out += w2_[h] * z;
    }
    return out;
}

std::size_t MlpRegressor::parameter_count() const {
    return w1_.size() + b1_.size() + w2_.size() + 1;
}

std::vector<double> MlpRegressor::parameters() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    flat.insert(flat.end(), w1_.begin(), w1_.end());
    flat.insert(flat.end(), b1_.begin(), b1_.end());
    flat.insert(flat.end(), w2_.begin(), w2_.end());
    flat.push_back(b2_);
    return flat;
}

void MlpRegressor::set_parameters(std::span<const double> flat) {
    if (flat.size() != parameter_count()) {
        throw std::invalid_argument("MlpRegressor::set_parameters: wrong length");
    }
    std::size_t k = 0;
    for (double& w : w1_) w = flat[k++];
    for (double& b : b1_) b = flat[k++];
    for (double& w : w2_) w = flat[k++];
    b2_ = flat[k];
}

double MlpRegressor::loss(const std::vector<std::vector<double>>& inputs,
                          const std::vector<double>& targets) const {
    if (inputs.empty() || inputs.size() != targets.size()) {
        throw std::invalid_argument("MlpRegressor::loss: bad batch");
    }
    double sum = 0.0;
    for (std::size_t s = 0; s < inputs.size(); ++s) {
        const double err = predict(inputs[s]) - targets[s];
        sum += err * err;
    }
    return sum / static_cast<double>(inputs.size());
}

std::vector<double> MlpRegressor::gradient(const std::vector<std::vector<double>>& inputs,
                                           const std::vector<double>& targets) const {
    if (inputs.empty() || inputs.size() != targets.size()) {
        throw std::invalid_argument("MlpRegressor::gradient: bad batch");
    }
    const int n_in = config_.n_inputs;
    const int n_h = config_.n_nodes;
    std::vector<double> gw1(w1_.size(), 0.0), gb1(b1_.size(), 0.0), gw2(w2_.size(), 0.0);
    double gb2 = 0.0;
    std::vector<double> z(n_h), a(n_h);

    for (std::size_t s = 0; s < inputs.size(); ++s) {
        const std::vector<double>& x = inputs[s];
        double out = b2_;
        for (int h = 0; h < n_h; ++h) {
            double zh = b1_[h];
            const double* row = w1_.data() + static_cast<std::size_t>(h) * n_in;
            for (int i = 0; i < n_in; ++i) zh += row[i] * x[i];
            z[h] = zh;
            a[h] = zh > 0.0 ? zh : 0.0;
            out += w2_[h] * a[h];
        }
        const double dout = 2.0 * (out - targets[s]) / static_cast<double>(inputs.size());
        gb2 += dout;
        for (int h = 0; h < n_h; ++h) {
            gw2[h] += dout * a[h];
            if (z[h] > 0.0) {
                const double dz = dout * w2_[h];
                gb1[h] += dz;
                double* grow = gw1.data() + static_cast<std::size_t>(h) * n_in;
                for (int i = 0; i < n_in; ++i) grow[i] += dz * x[i];
            }
        }
    }

    std::vector<double> flat;
    flat.reserve(parameter_count());
    flat.insert(flat.end(), gw1.begin(), gw1.end());
    flat.insert(flat.end(), gb1.begin(), gb1.end());
    flat.insert(flat.end(), gw2.begin(), gw2.end());
    flat.push_back(gb2);
    return flat;
}

void MlpRegressor::train(const std::vector<std::vector<double>>& inputs,
                         const std::vector<double>& targets) {
    if (inputs.empty() || inputs.size() != targets.size()) {
        throw std::invalid_argument("MlpRegressor::train: bad training set");
    }
    constexpr double kStep = 0.001, kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;

    rng::Engine shuffler(rng::derive_seed(config_.seed, "shuffle"));
    std::vector<double> params = parameters();
    std::vector<double> m(params.size(), 0.0), v(params.size(), 0.0);
    long step = 0;

    std::vector<std::size_t> order(inputs.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<std::vector<double>> batch_x;
    std::vector<double> batch_y;
    for (int epoch = 0; epoch < config_.epochs; ++epoch) {
        shuffler.shuffle(order);
        for (std::size_t pos = 0; pos < order.size(); pos += config_.batch_size) {
            const std::size_t end = std::min(pos + config_.batch_size, order.size());
            batch_x.clear();
            batch_y.clear();
            for (std::size_t k = pos; k < end; ++k) {
                batch_x.push_back(inputs[order[k]]);
                batch_y.push_back(targets[order[k]]);
            }
            const std::vector<double> g = gradient(batch_x, batch_y);
            ++step;
            const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
            for (std::size_t i = 0; i < params.size(); ++i) {
                m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g[i];
                v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g[i] * g[i];
                params[i] -= kStep * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + kEps);
            }
            set_parameters(params);
        }
    }
}

void make_lag_pairs(std::span<const double> series, int n_inputs,
                    std::vector<std::vector<double>>& inputs, std::vector<double>& targets) {
    if (n_inputs < 1) throw std::invalid_argument("make_lag_pairs: n_inputs must be >= 1");
    if (static_cast<int>(series.size()) <= n_inputs) {
        throw std::invalid_argument("make_lag_pairs: series too short");
    }
    inputs.clear();
    targets.clear();
    for (std::size_t t = n_inputs; t < series.size(); ++t) {
        inputs.emplace_back(series.begin() + (t - n_inputs), series.begin() + t);
        targets.push_back(series[t]);
    }
}

MlpRegressor fit_mlp(std::span<const double> train, const MlpConfig& config) {
    std::vector<std::vector<double>> inputs;
    std::vector<double> targets;
    make_lag_pairs(train, config.n_inputs, inputs, targets);
    MlpRegressor model(config);
    model.train(inputs, targets);
    return model;
}

}  // namespace prbshare
