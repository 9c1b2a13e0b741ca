#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace prbshare {

/// Uniformly sampled PRB-demand time series. values[i] is the average PRB
/// count over [start_time_ms + i*granularity_ms, start_time_ms + (i+1)*granularity_ms).
struct PrbSeries {
    std::int64_t start_time_ms = 0;
    std::int64_t granularity_ms = 1;
    std::vector<double> values;
    std::string label;
    std::uint64_t gap_count = 0;  // source intervals that held no records

    std::size_t size() const { return values.size(); }
};

/// Downsample by an integer factor: output j is the mean of inputs
/// [j*factor, (j+1)*factor). A trailing partial window is averaged over its
/// actual length rather than dropped. factor == 1 returns the input unchanged.
PrbSeries resample(const PrbSeries& series, std::size_t factor);

/// Series CSV ("t_index,value") plus a JSON sidecar with the metadata
/// (start_time_ms, granularity_ms, label, gap_count). The sidecar sits next
/// to the CSV with the extension swapped for .json.
std::string sidecar_path(const std::string& csv_path);
void save_series(const PrbSeries& series, const std::string& csv_path);
PrbSeries load_series(const std::string& csv_path);

}  // namespace prbshare
