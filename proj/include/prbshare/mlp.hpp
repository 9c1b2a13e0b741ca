#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace prbshare {

struct MlpConfig {
    int n_inputs = 1;
    int n_nodes = 16;
    int epochs = 100;
    int batch_size = 32;
    std::uint64_t seed = 0;
};

/// One-hidden-layer perceptron with rectified-linear activation and a linear
/// output, trained on mean-squared error with the Adam update rule
/// (step 0.001, beta1 0.9, beta2 0.999, eps 1e-8). Weights start from a
/// seeded uniform He-style range and the sample order is reshuffled each
/// epoch with the same seeded generator, so training is fully deterministic.
class MlpRegressor {
public:
    explicit MlpRegressor(const MlpConfig& config);

    void train(const std::vector<std::vector<double>>& inputs, const std::vector<double>& targets);
    double predict(std::span<const double> x) const;

    // Flat-parameter access, used by the finite-difference gradient check.
    std::size_t parameter_count() const;
    std::vector<double> parameters() const;
    void set_parameters(std::span<const double> flat);
    double loss(const std::vector<std::vector<double>>& inputs, const std::vector<double>& targets) const;
    std::vector<double> gradient(const std::vector<std::vector<double>>& inputs,
                                 const std::vector<double>& targets) const;

    const MlpConfig& config() const { return config_; }

private:
    MlpConfig config_;
    // w1 is row-major [n_nodes][n_inputs].
    std::vector<double> w1_, b1_, w2_;
    double b2_ = 0.0;
};

/// Lag-window supervised pairs: x = previous n_inputs values, y = next value.
void make_lag_pairs(std::span<const double> series, int n_inputs,
                    std::vector<std::vector<double>>& inputs, std::vector<double>& targets);

/// Build lag pairs from a training window and train a regressor on them.
MlpRegressor fit_mlp(std::span<const double> train, const MlpConfig& config);

}  // namespace prbshare
