#include <stdexcept>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "prbshare/rng.hpp"
#include "prbshare/series.hpp"

using namespace prbshare;

namespace {

PrbSeries make_series(std::vector<double> values, std::int64_t granularity = 1000) {
    PrbSeries s;
    s.start_time_ms = 0;
    s.granularity_ms = granularity;
    s.values = std::move(values);
    s.label = "test";
    return s;
}

}  // namespace

TEST_CASE("resample pairwise means") {
    const PrbSeries out = resample(make_series({1, 2, 3, 4}), 2);
    REQUIRE(out.values == std::vector<double>{1.5, 3.5});
    CHECK(out.granularity_ms == 2000);
}

TEST_CASE("resample factor 1 is the identity") {
    const PrbSeries in = make_series({1, 2, 3});
    const PrbSeries out = resample(in, 1);
    CHECK(out.values == in.values);
    CHECK(out.granularity_ms == in.granularity_ms);
}

TEST_CASE("resample averages the partial trailing window over its length") {
    const PrbSeries out = resample(make_series({1, 2, 3}), 2);
    REQUIRE(out.values == std::vector<double>{1.5, 3.0});
}

TEST_CASE("resample rejects factor 0") {
    CHECK_THROWS_AS(resample(make_series({1}), 0), std::invalid_argument);
}

TEST_CASE("resample preserves mass weighted by window lengths") {
    rng::Engine rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> values(5 + rng.index(40));
        for (double& v : values) v = rng.uniform(0.0, 30.0);
        double total = 0;
        for (double v : values) total += v;
        const std::size_t factor = 1 + rng.index(7);
        const PrbSeries out = resample(make_series(values), factor);
        double recovered = 0;
        for (std::size_t j = 0; j < out.values.size(); ++j) {
            const std::size_t lo = j * factor;
            const std::size_t window = std::min(factor, values.size() - lo);
            recovered += out.values[j] * static_cast<double>(window);
        }
        CHECK(recovered == doctest::Approx(total).epsilon(1e-12));
    }
}

TEST_CASE("resample composes when lengths divide evenly") {
    rng::Engine rng(11);
    std::vector<double> values(24);
    for (double& v : values) v = rng.uniform(0.0, 10.0);
    const PrbSeries s = make_series(values);
    const PrbSeries two_step = resample(resample(s, 2), 3);
    const PrbSeries one_step = resample(s, 6);
    REQUIRE(two_step.values.size() == one_step.values.size());
    for (std::size_t i = 0; i < one_step.values.size(); ++i) {
        CHECK(two_step.values[i] == doctest::Approx(one_step.values[i]).epsilon(1e-12));
    }
}

TEST_CASE("series CSV + sidecar round-trip") {
    const auto dir = std::filesystem::temp_directory_path() / "prbshare_series_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "roundtrip.csv").string();

    PrbSeries s = make_series({21.52, 0.25, 7.0}, 60000);
    s.start_time_ms = 1700000000000;
    s.label = "LTE";
    s.gap_count = 3;
    save_series(s, path);
    const PrbSeries back = load_series(path);
    CHECK(back.values == s.values);
    CHECK(back.start_time_ms == s.start_time_ms);
    CHECK(back.granularity_ms == s.granularity_ms);
    CHECK(back.label == s.label);
    CHECK(back.gap_count == s.gap_count);
    std::filesystem::remove_all(dir);
}

TEST_CASE("load_series reports a bad header") {
    const auto dir = std::filesystem::temp_directory_path() / "prbshare_series_test2";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "bad.csv").string();
    {
        std::FILE* f = std::fopen(path.c_str(), "w");
        std::fputs("time,val\n0,1\n", f);
        std::fclose(f);
    }
    CHECK_THROWS_WITH_AS(load_series(path), doctest::Contains("header"), std::runtime_error);
    std::filesystem::remove_all(dir);
}
