#include "prbshare/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <stdexcept>

namespace prbshare {

namespace {

constexpr const char* kHeader = "timestamp_ms,sfn,subframe,rnti,prb_count,mcs,dci_format";

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

template <typename T>
T parse_int(const std::string& field, const std::string& what, std::size_t line_no) {
    T v{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": bad " + what + " '" + field + "'");
    }
    return v;
}

}  // namespace

std::vector<DciRecord> parse_dci_log(const std::string& path,
                                     const std::optional<std::string>& format_filter) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open DCI log: " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty DCI log: " + path);
    if (line.size() && line.back() == '\r') line.pop_back();
    if (line != kHeader) {
        throw std::runtime_error("DCI log schema error in " + path + ": expected header '" +
                                 std::string(kHeader) + "', got '" + line + "'");
    }

    std::vector<DciRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.size() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 7) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected 7 fields, got " +
                                     std::to_string(fields.size()));
        }
        DciRecord rec;
        rec.timestamp_ms = parse_int<std::int64_t>(fields[0], "timestamp_ms", line_no);
        rec.sfn = parse_int<int>(fields[1], "sfn", line_no);
        rec.subframe = parse_int<int>(fields[2], "subframe", line_no);
        rec.rnti = parse_int<std::uint32_t>(fields[3], "rnti", line_no);
        rec.prb_count = parse_int<int>(fields[4], "prb_count", line_no);
        rec.mcs = parse_int<int>(fields[5], "mcs", line_no);
        rec.dci_format = fields[6];

        if (rec.sfn < 0 || rec.sfn > 1023) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": sfn out of [0,1023]");
        }
        if (rec.subframe < 0 || rec.subframe > 9) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": subframe out of [0,9]");
        }
        if (rec.prb_count < 0) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": negative prb_count");
        }
        if (format_filter && rec.dci_format != *format_filter) continue;
        records.push_back(std::move(rec));
    }
    return records;
}

PrbSeries to_series(const std::vector<DciRecord>& records, std::int64_t granularity_ms,
                    const std::string& label) {
    if (records.empty()) throw std::invalid_argument("to_series: no records");
    if (granularity_ms < 1) throw std::invalid_argument("to_series: granularity_ms must be >= 1");

    std::int64_t t_min = records.front().timestamp_ms;
    std::int64_t t_max = t_min;
    for (const auto& r : records) {
        t_min = std::min(t_min, r.timestamp_ms);
        t_max = std::max(t_max, r.timestamp_ms);
    }
    // Align the first interval to a granularity boundary at or before t_min.
    std::int64_t start = t_min / granularity_ms * granularity_ms;
    if (t_min < 0 && start > t_min) start -= granularity_ms;
    const std::size_t n_intervals = static_cast<std::size_t>((t_max - start) / granularity_ms) + 1;

    std::vector<double> sums(n_intervals, 0.0);
    std::vector<std::size_t> counts(n_intervals, 0);
    for (const auto& r : records) {
        const auto idx = static_cast<std::size_t>((r.timestamp_ms - start) / granularity_ms);
        sums[idx] += static_cast<double>(r.prb_count);
        counts[idx] += 1;
    }

    PrbSeries series;
    series.start_time_ms = start;
    series.granularity_ms = granularity_ms;
    series.label = label;
    series.values.resize(n_intervals);
    for (std::size_t i = 0; i < n_intervals; ++i) {
        if (counts[i] == 0) {
            series.values[i] = 0.0;
            series.gap_count += 1;
        } else {
            series.values[i] = sums[i] / static_cast<double>(counts[i]);
        }
    }
    return series;
}

}  // namespace prbshare
