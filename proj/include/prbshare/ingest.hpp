#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prbshare/series.hpp"

namespace prbshare {

/// One decoded downlink control message from a control-channel sniffer log.
struct DciRecord {
    std::int64_t timestamp_ms = 0;
    int sfn = 0;       // system frame number, [0, 1023]
    int subframe = 0;  // [0, 9]
    std::uint32_t rnti = 0;
    int prb_count = 0;  // >= 0
    int mcs = 0;
    std::string dci_format;
};

/// Parse a decoded DCI log. Expected CSV header:
///   timestamp_ms,sfn,subframe,rnti,prb_count,mcs,dci_format
/// Records are returned in file order. When format_filter is given, only
/// records whose dci_format matches are kept. Malformed rows and invariant
/// violations raise with the offending line number.
std::vector<DciRecord> parse_dci_log(const std::string& path,
                                     const std::optional<std::string>& format_filter = std::nullopt);

/// Aggregate records into a demand series: one value per granularity_ms
/// interval, equal to the mean prb_count of the records whose timestamp falls
/// inside it. Intervals run contiguously from floor(min timestamp) to the
/// interval containing the max timestamp; intervals without records get value
/// 0 and are counted in gap_count.
PrbSeries to_series(const std::vector<DciRecord>& records, std::int64_t granularity_ms,
                    const std::string& label = "");

}  // namespace prbshare
