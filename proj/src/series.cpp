#include "prbshare/series.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace prbshare {

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::runtime_error("failed to format double");
    return std::string(buf, ptr);
}

}  // namespace

PrbSeries resample(const PrbSeries& series, std::size_t factor) {
    if (factor == 0) throw std::invalid_argument("resample: factor must be >= 1");
    if (factor == 1) return series;
    PrbSeries out;
    out.start_time_ms = series.start_time_ms;
    out.granularity_ms = series.granularity_ms * static_cast<std::int64_t>(factor);
    out.label = series.label;
    out.gap_count = series.gap_count;
    const std::size_t n = series.values.size();
    out.values.reserve((n + factor - 1) / factor);
    for (std::size_t j = 0; j * factor < n; ++j) {
        const std::size_t lo = j * factor;
        const std::size_t hi = std::min(lo + factor, n);
        double sum = 0.0;
        for (std::size_t i = lo; i < hi; ++i) sum += series.values[i];
        out.values.push_back(sum / static_cast<double>(hi - lo));
    }
    return out;
}

std::string sidecar_path(const std::string& csv_path) {
    const auto dot = csv_path.find_last_of('.');
    const auto slash = csv_path.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return csv_path + ".json";
    }
    return csv_path.substr(0, dot) + ".json";
}

void save_series(const PrbSeries& series, const std::string& csv_path) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot open for writing: " + csv_path);
    csv << "t_index,value\n";
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        csv << i << ',' << format_double(series.values[i]) << '\n';
    }
    if (!csv) throw std::runtime_error("write failed: " + csv_path);

    nlohmann::ordered_json meta;
    meta["start_time_ms"] = series.start_time_ms;
    meta["granularity_ms"] = series.granularity_ms;
    meta["label"] = series.label;
    meta["gap_count"] = series.gap_count;
    std::ofstream side(sidecar_path(csv_path));
    if (!side) throw std::runtime_error("cannot open for writing: " + sidecar_path(csv_path));
    side << meta.dump(2) << '\n';
}

PrbSeries load_series(const std::string& csv_path) {
    std::ifstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot open series file: " + csv_path);
    PrbSeries series;
    std::string line;
    if (!std::getline(csv, line)) throw std::runtime_error("empty series file: " + csv_path);
    if (line.size() && line.back() == '\r') line.pop_back();
    if (line != "t_index,value") {
        throw std::runtime_error("bad series header in " + csv_path + ": expected 't_index,value'");
    }
    std::size_t line_no = 1;
    while (std::getline(csv, line)) {
        ++line_no;
        if (line.size() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error(csv_path + " line " + std::to_string(line_no) + ": missing comma");
        }
        double v = 0.0;
        const char* first = line.data() + comma + 1;
        const char* last = line.data() + line.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) {
            throw std::runtime_error(csv_path + " line " + std::to_string(line_no) + ": bad value");
        }
        series.values.push_back(v);
    }
    if (series.values.empty()) throw std::runtime_error("series has no values: " + csv_path);

    std::ifstream side(sidecar_path(csv_path));
    if (!side) throw std::runtime_error("missing series sidecar: " + sidecar_path(csv_path));
    nlohmann::json meta = nlohmann::json::parse(side);
    series.start_time_ms = meta.at("start_time_ms").get<std::int64_t>();
    series.granularity_ms = meta.at("granularity_ms").get<std::int64_t>();
    series.label = meta.at("label").get<std::string>();
    series.gap_count = meta.value("gap_count", std::uint64_t{0});
    if (series.granularity_ms <= 0) throw std::runtime_error("sidecar granularity_ms must be positive");
    return series;
}

}  // namespace prbshare
