#include <stdexcept>
#include <algorithm>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "prbshare/ingest.hpp"
#include "prbshare/rng.hpp"

using namespace prbshare;

namespace {

std::string write_log(const std::string& name, const std::string& body) {
    const auto dir = std::filesystem::temp_directory_path() / "prbshare_ingest_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / name).string();
    std::ofstream out(path);
    out << "timestamp_ms,sfn,subframe,rnti,prb_count,mcs,dci_format\n" << body;
    return path;
}

DciRecord rec(std::int64_t t, int prb) {
    DciRecord r;
    r.timestamp_ms = t;
    r.prb_count = prb;
    r.dci_format = "2B";
    return r;
}

}  // namespace

TEST_CASE("parse_dci_log filters by format") {
    const std::string path = write_log("mixed.csv",
                                       "0,0,0,61,4,10,2B\n"
                                       "1,0,1,61,6,10,1A\n"
                                       "2,0,2,61,8,10,2B\n");
    CHECK(parse_dci_log(path, std::string("2B")).size() == 2);
    CHECK(parse_dci_log(path).size() == 3);
}

TEST_CASE("parse_dci_log rejects invariant violations with the line number") {
    const std::string path = write_log("badsubframe.csv", "0,0,12,61,4,10,2B\n");
    CHECK_THROWS_WITH_AS(parse_dci_log(path), doctest::Contains("line 2"), std::runtime_error);

    const std::string sfn = write_log("badsfn.csv", "0,2000,1,61,4,10,2B\n");
    CHECK_THROWS_AS(parse_dci_log(sfn), std::runtime_error);
}

TEST_CASE("parse_dci_log rejects schema problems") {
    const auto dir = std::filesystem::temp_directory_path() / "prbshare_ingest_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "noheader.csv").string();
    {
        std::ofstream out(path);
        out << "timestamp_ms,sfn,subframe,rnti,prb_count,dci_format\n0,0,0,61,4,2B\n";
    }
    CHECK_THROWS_WITH_AS(parse_dci_log(path), doctest::Contains("schema"), std::runtime_error);

    const std::string missing = write_log("short.csv", "0,0,0,61,4,10\n");
    CHECK_THROWS_WITH_AS(parse_dci_log(missing), doctest::Contains("7 fields"), std::runtime_error);
}

TEST_CASE("to_series means constant records over one interval") {
    std::vector<DciRecord> records;
    for (int t = 0; t < 1000; ++t) records.push_back(rec(t, 4));
    const PrbSeries s = to_series(records, 1000);
    REQUIRE(s.values == std::vector<double>{4.0});
    CHECK(s.gap_count == 0);
}

TEST_CASE("to_series two-interval means") {
    const std::vector<DciRecord> records{rec(10, 2), rec(700, 4), rec(1500, 6)};
    const PrbSeries s = to_series(records, 1000);
    REQUIRE(s.values == std::vector<double>{3.0, 6.0});
}

TEST_CASE("to_series spans two hours at hour granularity") {
    // Records 2h apart land in exactly two hour buckets.
    const std::vector<DciRecord> records{rec(0, 5), rec(3'600'001, 7)};
    const PrbSeries s = to_series(records, 3'600'000);
    REQUIRE(s.values.size() == 2);
    CHECK(s.values[0] == 5.0);
    CHECK(s.values[1] == 7.0);
}

TEST_CASE("to_series flags empty intervals as gaps with value 0") {
    const std::vector<DciRecord> records{rec(0, 5), rec(2500, 7)};
    const PrbSeries s = to_series(records, 1000);
    REQUIRE(s.values == std::vector<double>{5.0, 0.0, 7.0});
    CHECK(s.gap_count == 1);
}

TEST_CASE("to_series is permutation invariant") {
    rng::Engine rng(3);
    std::vector<DciRecord> records;
    for (int i = 0; i < 200; ++i) {
        records.push_back(rec(static_cast<std::int64_t>(rng.index(10'000)), static_cast<int>(rng.index(30))));
    }
    const PrbSeries forward = to_series(records, 1000);
    std::vector<DciRecord> shuffled = records;
    rng.shuffle(shuffled);
    const PrbSeries permuted = to_series(shuffled, 1000);
    REQUIRE(forward.values.size() == permuted.values.size());
    for (std::size_t i = 0; i < forward.values.size(); ++i) {
        CHECK(forward.values[i] == doctest::Approx(permuted.values[i]).epsilon(1e-12));
    }
    CHECK(forward.gap_count == permuted.gap_count);
}

TEST_CASE("to_series rejects empty input and bad granularity") {
    CHECK_THROWS_AS(to_series({}, 1000), std::invalid_argument);
    CHECK_THROWS_AS(to_series({rec(0, 1)}, 0), std::invalid_argument);
}
