#include "prbshare/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "prbshare/arima.hpp"
#include "prbshare/ets.hpp"
#include "prbshare/mlp.hpp"

namespace prbshare {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Naive: return "Naive";
        case ModelKind::MA: return "MA";
        case ModelKind::MM: return "MM";
        case ModelKind::Arima: return "ARIMA";
        case ModelKind::Ets: return "ETS";
        case ModelKind::Mlp: return "MLP";
    }
    return "Naive";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "Naive" || s == "naive") return ModelKind::Naive;
    if (s == "MA" || s == "ma") return ModelKind::MA;
    if (s == "MM" || s == "mm") return ModelKind::MM;
    if (s == "ARIMA" || s == "arima") return ModelKind::Arima;
    if (s == "ETS" || s == "ets") return ModelKind::Ets;
    if (s == "MLP" || s == "mlp") return ModelKind::Mlp;
    throw std::invalid_argument("unknown model kind: " + s);
}

int ModelSpec::param(const std::string& name) const {
    const auto it = params.find(name);
    if (it == params.end()) {
        throw std::invalid_argument(to_string(kind) + " spec missing parameter '" + name + "'");
    }
    return it->second;
}

int ModelSpec::param_or(const std::string& name, int fallback) const {
    const auto it = params.find(name);
    return it == params.end() ? fallback : it->second;
}

std::string ModelSpec::canonical() const {
    std::ostringstream os;
    os << to_string(kind) << '(';
    switch (kind) {
        case ModelKind::Naive:
            os << "offset=" << param_or("offset", 1);
            break;
        case ModelKind::MA:
        case ModelKind::MM:
            os << "window=" << param_or("window", 1);
            break;
        case ModelKind::Arima:
            os << "p=" << param_or("p", 0) << ",d=" << param_or("d", 0) << ",q=" << param_or("q", 0)
               << ",trend=" << (trend == "c" ? "c" : "none");
            break;
        case ModelKind::Ets:
            os << "trend=" << trend << ",damped=" << (damped ? "true" : "false");
            break;
        case ModelKind::Mlp:
            os << "inputs=" << param_or("inputs", 1) << ",nodes=" << param_or("nodes", 1)
               << ",epochs=" << param_or("epochs", 1) << ",batch=" << param_or("batch", 1)
               << ",seed=" << seed;
            break;
    }
    os << ')';
    return os.str();
}

bool operator==(const ModelSpec& a, const ModelSpec& b) {
    return a.kind == b.kind && a.params == b.params && a.trend == b.trend && a.damped == b.damped &&
           a.seed == b.seed;
}

nlohmann::ordered_json spec_to_json(const ModelSpec& spec) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(spec.kind);
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [name, value] : spec.params) params[name] = value;
    if (spec.kind == ModelKind::Arima || spec.kind == ModelKind::Ets) params["trend"] = spec.trend;
    if (spec.kind == ModelKind::Ets) params["damped"] = spec.damped;
    if (spec.kind == ModelKind::Mlp) params["seed"] = spec.seed;
    j["params"] = params;
    return j;
}

ModelSpec spec_from_json(const nlohmann::json& j) {
    ModelSpec spec;
    spec.kind = model_kind_from_string(j.at("kind").get<std::string>());
    if (spec.kind == ModelKind::Ets) spec.trend = "none";
    if (j.contains("params")) {
        for (const auto& [name, value] : j.at("params").items()) {
            if (name == "trend") {
                spec.trend = value.get<std::string>();
            } else if (name == "damped") {
                spec.damped = value.get<bool>();
            } else if (name == "seed") {
                spec.seed = value.get<std::uint64_t>();
            } else if (value.is_number_integer()) {
                spec.params[name] = value.get<int>();
            } else {
                throw std::invalid_argument("grid spec parameter '" + name + "' must be an integer");
            }
        }
    }
    return spec;
}

std::vector<ModelSpec> load_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open grid file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_array()) throw std::runtime_error("grid file must hold a JSON array: " + path);
    std::vector<ModelSpec> grid;
    for (const auto& item : j) grid.push_back(spec_from_json(item));
    return grid;
}

double rmse(std::span<const double> observed, std::span<const double> predicted) {
    if (observed.empty() || observed.size() != predicted.size()) {
        throw std::invalid_argument("rmse: sequences must be equal-length and non-empty");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double err = observed[i] - predicted[i];
        sum += err * err;
    }
    return std::sqrt(sum / static_cast<double>(observed.size()));
}

double predict_naive(std::span<const double> history, std::size_t offset) {
    if (offset < 1) throw std::invalid_argument("predict_naive: offset must be >= 1");
    if (history.size() < offset) throw std::invalid_argument("predict_naive: insufficient history");
    return history[history.size() - offset];
}

double predict_ma(std::span<const double> history, std::size_t window) {
    if (window < 1) throw std::invalid_argument("predict_ma: window must be >= 1");
    if (history.size() < window) throw std::invalid_argument("predict_ma: insufficient history");
    double sum = 0.0;
    for (std::size_t i = history.size() - window; i < history.size(); ++i) sum += history[i];
    return sum / static_cast<double>(window);
}

double predict_mm(std::span<const double> history, std::size_t window) {
    if (window < 1) throw std::invalid_argument("predict_mm: window must be >= 1");
    if (history.size() < window) throw std::invalid_argument("predict_mm: insufficient history");
    std::vector<double> tail(history.end() - window, history.end());
    std::sort(tail.begin(), tail.end());
    const std::size_t mid = window / 2;
    if (window % 2 == 1) return tail[mid];
    return 0.5 * (tail[mid - 1] + tail[mid]);
}

FitReport walk_forward(const PrbSeries& series, const ModelSpec& spec, const SplitConfig& split) {
    const std::vector<double>& y = series.values;
    const std::size_t n = y.size();
    if (n < 4) throw std::invalid_argument("walk_forward: series must have at least 4 points");
    if (!(split.train_fraction > 0.0 && split.train_fraction < 1.0)) {
        throw std::invalid_argument("walk_forward: train_fraction must lie in (0,1)");
    }
    const std::size_t train_len = static_cast<std::size_t>(std::floor(split.train_fraction * n));
    if (train_len < 2 || train_len >= n) {
        throw std::invalid_argument("walk_forward: degenerate train/test split");
    }

    FitReport report;
    report.spec = spec;
    report.train_len = train_len;
    report.test_len = n - train_len;
    report.predictions.reserve(report.test_len);

    const std::span<const double> all(y);
    switch (spec.kind) {
        case ModelKind::Naive: {
            const std::size_t offset = static_cast<std::size_t>(spec.param("offset"));
            if (offset < 1 || offset > train_len) {
                throw std::invalid_argument("walk_forward: Naive offset out of range");
            }
            for (std::size_t i = train_len; i < n; ++i) {
                report.predictions.push_back(predict_naive(all.first(i), offset));
            }
            break;
        }
        case ModelKind::MA:
        case ModelKind::MM: {
            const std::size_t window = static_cast<std::size_t>(spec.param("window"));
            if (window < 1 || window > train_len) {
                throw std::invalid_argument("walk_forward: window out of range");
            }
            for (std::size_t i = train_len; i < n; ++i) {
                report.predictions.push_back(spec.kind == ModelKind::MA
                                                 ? predict_ma(all.first(i), window)
                                                 : predict_mm(all.first(i), window));
            }
            break;
        }
        case ModelKind::Arima: {
            const int p = spec.param("p");
            const int d = spec.param("d");
            const int q = spec.param("q");
            const bool with_constant = spec.trend == "c";
            std::vector<double> warm;
            for (std::size_t i = train_len; i < n; ++i) {
                const ArimaModel model =
                    ArimaModel::fit(all.first(i), p, d, q, with_constant, warm.empty() ? nullptr : &warm);
                warm = model.parameter_vector();
                report.predictions.push_back(model.forecast(all.first(i)));
            }
            break;
        }
        case ModelKind::Ets: {
            const EtsTrend trend = ets_trend_from_string(spec.trend);
            EtsModel model = EtsModel::fit(all.first(train_len), trend, spec.damped);
            for (std::size_t i = train_len; i < n; ++i) {
                report.predictions.push_back(model.forecast());
                model.update(y[i]);
            }
            break;
        }
        case ModelKind::Mlp: {
            MlpConfig cfg;
            cfg.n_inputs = spec.param("inputs");
            cfg.n_nodes = spec.param("nodes");
            cfg.epochs = spec.param("epochs");
            cfg.batch_size = spec.param("batch");
            cfg.seed = spec.seed;
            if (cfg.n_inputs < 1 || static_cast<std::size_t>(cfg.n_inputs) + 1 > train_len) {
                throw std::invalid_argument("walk_forward: MLP inputs out of range");
            }
            const MlpRegressor model = fit_mlp(all.first(train_len), cfg);
            for (std::size_t i = train_len; i < n; ++i) {
                report.predictions.push_back(model.predict(all.subspan(i - cfg.n_inputs, cfg.n_inputs)));
            }
            break;
        }
    }

    for (double p : report.predictions) {
        if (!std::isfinite(p)) throw std::runtime_error("walk_forward: non-finite prediction");
    }
    report.rmse = rmse(std::span<const double>(y).subspan(train_len), report.predictions);
    return report;
}

GridSearchResult grid_search(const PrbSeries& series, const std::vector<ModelSpec>& grid,
                             const SplitConfig& split) {
    if (grid.empty()) throw std::invalid_argument("grid_search: empty grid");
    GridSearchResult result;
    for (const ModelSpec& spec : grid) {
        try {
            result.ranked.push_back(walk_forward(series, spec, split));
        } catch (const std::exception& e) {
            result.failures.push_back({spec, e.what()});
        }
    }
    std::stable_sort(result.ranked.begin(), result.ranked.end(),
                     [](const FitReport& a, const FitReport& b) {
                         if (a.rmse != b.rmse) return a.rmse < b.rmse;
                         if (a.spec.kind != b.spec.kind) return a.spec.kind < b.spec.kind;
                         return a.spec.canonical() < b.spec.canonical();
                     });
    return result;
}

ModelSpec select_model(const GridSearchResult& result) {
    if (result.ranked.empty()) {
        throw std::runtime_error("select_model: every candidate spec failed");
    }
    return result.ranked.front().spec;
}

}  // namespace prbshare
