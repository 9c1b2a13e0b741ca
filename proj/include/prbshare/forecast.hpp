#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "prbshare/series.hpp"

namespace prbshare {

enum class ModelKind { Naive, MA, MM, Arima, Ets, Mlp };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

/// Identity plus hyperparameters of one forecaster. Numeric hyperparameters
/// live in params (window/offset, ARIMA p/d/q, MLP inputs/nodes/epochs/batch);
/// trend is "none"/"c" for ARIMA and "none"/"add"/"mul" for ETS; damped and
/// seed apply to ETS and MLP respectively.
struct ModelSpec {
    ModelKind kind = ModelKind::Naive;
    std::map<std::string, int> params;
    std::string trend = "none";
    bool damped = false;
    std::uint64_t seed = 0;

    int param(const std::string& name) const;
    int param_or(const std::string& name, int fallback) const;
    /// Canonical display/ordering string, e.g. "ARIMA(p=1,d=3,q=2,trend=c)".
    std::string canonical() const;
};

bool operator==(const ModelSpec& a, const ModelSpec& b);

nlohmann::ordered_json spec_to_json(const ModelSpec& spec);
ModelSpec spec_from_json(const nlohmann::json& j);
std::vector<ModelSpec> load_grid(const std::string& path);

struct SplitConfig {
    double train_fraction = 0.66;  // (0,1)
};

/// Outcome of walk-forward evaluation of one spec on one series.
struct FitReport {
    ModelSpec spec;
    double rmse = 0.0;
    std::vector<double> predictions;  // aligned to the test segment
    std::size_t train_len = 0;
    std::size_t test_len = 0;
};

struct FailedSpec {
    ModelSpec spec;
    std::string reason;
};

struct GridSearchResult {
    std::vector<FitReport> ranked;  // ascending RMSE, deterministic tie-break
    std::vector<FailedSpec> failures;
};

/// Root mean squared error between equal-length sequences.
double rmse(std::span<const double> observed, std::span<const double> predicted);

// One-step predictors over a history window.
double predict_naive(std::span<const double> history, std::size_t offset);
double predict_ma(std::span<const double> history, std::size_t window);
double predict_mm(std::span<const double> history, std::size_t window);

/// One-step walk-forward validation: split at floor(train_fraction * n),
/// then predict each test point from all data before it. Naive/MA/MM slide
/// their windows, ARIMA refits each step, ETS fits its smoothing parameters
/// on the train split and updates state through the test segment, and the
/// MLP trains once on the train split and is applied sliding.
FitReport walk_forward(const PrbSeries& series, const ModelSpec& spec,
                       const SplitConfig& split = {});

/// Evaluate every spec via walk_forward and rank ascending by RMSE; ties
/// break on kind enumeration order, then on the canonical parameter string.
/// Specs that raise are returned as failures rather than aborting the search.
GridSearchResult grid_search(const PrbSeries& series, const std::vector<ModelSpec>& grid,
                             const SplitConfig& split = {});

/// The spec of the first-ranked report. Throws if the ranking is empty.
ModelSpec select_model(const GridSearchResult& result);

}  // namespace prbshare
