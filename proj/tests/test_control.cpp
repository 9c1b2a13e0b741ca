#include <stdexcept>
#include <cmath>

#include "doctest.h"
#include "prbshare/control.hpp"
#include "prbshare/rng.hpp"

using namespace prbshare;

namespace {

PrbSeries make_series(std::vector<double> values, const std::string& label) {
    PrbSeries s;
    s.granularity_ms = 60000;
    s.values = std::move(values);
    s.label = label;
    return s;
}

PrbSeries plateau_fixture(std::size_t n, std::uint64_t seed, const std::string& label) {
    rng::Engine rng(seed);
    std::vector<double> values;
    double level = 21.0;
    while (values.size() < n) {
        level += rng.normal(0.0, 2.0);
        level = std::clamp(level, 12.0, 27.0);
        for (int k = 0; k < 6 && values.size() < n; ++k) values.push_back(level);
    }
    return make_series(std::move(values), label);
}

std::vector<ModelSpec> small_grid() {
    ModelSpec naive;
    naive.kind = ModelKind::Naive;
    naive.params["offset"] = 1;
    ModelSpec ma;
    ma.kind = ModelKind::MA;
    ma.params["window"] = 2;
    return {naive, ma};
}

LoopConfig base_config() {
    LoopConfig config;
    config.retrain_every = 30;
    config.allocate_every = 30;
    config.pool_size = 40;
    config.gamma = 0.5;
    config.variant = LoopVariant::Max;
    config.grid = small_grid();
    config.seed = 5;
    return config;
}

}  // namespace

TEST_CASE("constant demands settle on the exact-match allocation") {
    const PrbSeries lte = make_series(std::vector<double>(42, 10.0), "LTE");
    const PrbSeries nr = make_series(std::vector<double>(42, 10.0), "NR");
    LoopConfig config = base_config();
    config.retrain_every = 42;
    config.allocate_every = 42;

    const Transcript t = run_loop(lte, nr, config);
    const TranscriptSummary summary = transcript_report(t);
    CHECK(summary.o1_count == 1);
    CHECK(summary.a1_count == 1);
    CHECK(summary.e2_count == 1);
    for (const ControlMessage& msg : t.messages) {
        if (msg.kind != MessageKind::E2Allocation) continue;
        const auto& e2 = std::get<E2Payload>(msg.payload);
        CHECK(e2.alloc.n_a == 10.0);
        CHECK(e2.alloc.n_b == 10.0);
    }
    REQUIRE_FALSE(t.evaluations.empty());
    for (const EpochEvaluation& eval : t.evaluations) {
        CHECK(eval.surplus_a == 0.0);
        CHECK(eval.surplus_b == 0.0);
    }
}

TEST_CASE("message counts follow the boundary cadence") {
    const PrbSeries lte = plateau_fixture(63, 1, "LTE");
    const PrbSeries nr = plateau_fixture(63, 2, "NR");
    LoopConfig config = base_config();
    config.retrain_every = 21;
    config.allocate_every = 21;

    const TranscriptSummary summary = transcript_report(run_loop(lte, nr, config));
    // 63 / 21: one boundary at the end of each window.
    CHECK(summary.a1_count == 3);
    CHECK(summary.e2_count == 3);
    CHECK(summary.o1_count == 3);
}

TEST_CASE("allocations before the first policy are skipped, afterwards follow allocate_every") {
    const PrbSeries lte = plateau_fixture(120, 3, "LTE");
    const PrbSeries nr = plateau_fixture(120, 4, "NR");
    LoopConfig config = base_config();
    config.retrain_every = 60;
    config.allocate_every = 20;

    const Transcript t = run_loop(lte, nr, config);
    const TranscriptSummary summary = transcript_report(t);
    CHECK(summary.a1_count == 2);   // epochs 59, 119
    CHECK(summary.e2_count == 4);   // epochs 59, 79, 99, 119 (19 and 39 precede any policy)
    CHECK(t.evaluations.front().epoch == 59);
    CHECK(t.evaluations.size() == 120 - 59);
}

TEST_CASE("identical seeds give byte-identical transcripts") {
    const PrbSeries lte = plateau_fixture(90, 7, "LTE");
    const PrbSeries nr = plateau_fixture(90, 8, "NR");
    LoopConfig config = base_config();
    config.variant = LoopVariant::AutoFairest;

    const std::string a = transcript_to_jsonl(run_loop(lte, nr, config));
    const std::string b = transcript_to_jsonl(run_loop(lte, nr, config));
    CHECK(a == b);
}

TEST_CASE("every policy is reproducible from its own telemetry") {
    const PrbSeries lte = plateau_fixture(90, 9, "LTE");
    const PrbSeries nr = plateau_fixture(90, 10, "NR");
    LoopConfig config = base_config();

    const Transcript t = run_loop(lte, nr, config);
    const O1Payload* last_o1 = nullptr;
    for (const ControlMessage& msg : t.messages) {
        if (msg.kind == MessageKind::O1Telemetry) {
            last_o1 = &std::get<O1Payload>(msg.payload);
            CHECK(last_o1->lte.size() == msg.epoch);  // strictly prior epochs only
            continue;
        }
        if (msg.kind != MessageKind::A1Policy) continue;
        REQUIRE(last_o1 != nullptr);
        const auto& policy = std::get<A1Payload>(msg.payload);

        auto redo = [&](const std::vector<double>& values) {
            PrbSeries prefix;
            prefix.values = values;
            const GridSearchResult search = grid_search(prefix, config.grid, {config.train_fraction});
            const ModelSpec spec = select_model(search);
            for (const FitReport& r : search.ranked) {
                if (r.spec == spec) return std::pair{spec, stats_from_values(r.predictions)};
            }
            throw std::runtime_error("winner not in ranking");
        };
        const auto [spec_a, stats_a] = redo(last_o1->lte);
        CHECK(spec_a == policy.spec_a);
        CHECK(stats_a.mean == policy.stats_a.mean);
        CHECK(stats_a.variance == policy.stats_a.variance);
        CHECK(stats_a.maximum == policy.stats_a.maximum);
        const auto [spec_b, stats_b] = redo(last_o1->nr);
        CHECK(spec_b == policy.spec_b);
        CHECK(stats_b.mean == policy.stats_b.mean);
    }
}

TEST_CASE("every allocation respects the pool budget") {
    const PrbSeries lte = plateau_fixture(90, 11, "LTE");
    const PrbSeries nr = plateau_fixture(90, 12, "NR");
    LoopConfig config = base_config();
    config.pool_size = 30;
    config.variant = LoopVariant::Avg;

    const Transcript t = run_loop(lte, nr, config);
    for (const ControlMessage& msg : t.messages) {
        if (msg.kind != MessageKind::E2Allocation) continue;
        const auto& e2 = std::get<E2Payload>(msg.payload);
        CHECK(e2.alloc.n_a + e2.alloc.n_b <= config.pool_size + 1e-9);
    }
}

TEST_CASE("AutoFairest picks the fairer variant, ties to Avg") {
    const PrbSeries lte = plateau_fixture(90, 13, "LTE");
    const PrbSeries nr = plateau_fixture(90, 14, "NR");
    LoopConfig config = base_config();
    config.pool_size = 40;
    config.variant = LoopVariant::AutoFairest;

    const Transcript t = run_loop(lte, nr, config);
    const A1Payload* policy = nullptr;
    for (const ControlMessage& msg : t.messages) {
        if (msg.kind == MessageKind::A1Policy) policy = &std::get<A1Payload>(msg.payload);
        if (msg.kind != MessageKind::E2Allocation) continue;
        REQUIRE(policy != nullptr);
        const auto& e2 = std::get<E2Payload>(msg.payload);
        AllocationProblem problem{config.pool_size, policy->gamma, policy->stats_a,
                                  policy->stats_b,  Variant::Max,  config.integer_mode};
        const AllocationResult r_max = solve(problem);
        problem.variant = Variant::Avg;
        const AllocationResult r_avg = solve(problem);
        CHECK(e2.alloc.fairness == std::max(r_max.fairness, r_avg.fairness));
        if (r_max.fairness == r_avg.fairness) CHECK(e2.variant_used == Variant::Avg);
    }
}

TEST_CASE("run_loop validates its inputs") {
    const PrbSeries lte = plateau_fixture(60, 15, "LTE");
    PrbSeries shorter = plateau_fixture(50, 16, "NR");
    LoopConfig config = base_config();
    CHECK_THROWS_AS(run_loop(lte, shorter, config), std::invalid_argument);

    PrbSeries coarse = plateau_fixture(60, 17, "NR");
    coarse.granularity_ms = 3'600'000;
    CHECK_THROWS_AS(run_loop(lte, coarse, config), std::invalid_argument);

    PrbSeries with_zero = plateau_fixture(60, 18, "NR");
    with_zero.values[30] = 0.0;
    CHECK_THROWS_AS(run_loop(lte, with_zero, config), std::invalid_argument);

    LoopConfig tight = base_config();
    tight.retrain_every = 10;  // first retrain would see < 20 observations
    tight.allocate_every = 10;
    CHECK_THROWS_AS(run_loop(lte, plateau_fixture(60, 19, "NR"), tight), std::invalid_argument);
}

TEST_CASE("transcript JSON-lines round-trip preserves the byte stream") {
    const PrbSeries lte = plateau_fixture(90, 20, "LTE");
    const PrbSeries nr = plateau_fixture(90, 21, "NR");
    const Transcript t = run_loop(lte, nr, base_config());
    const std::string once = transcript_to_jsonl(t);
    const std::string twice = transcript_to_jsonl(transcript_from_jsonl(once));
    CHECK(once == twice);
}

TEST_CASE("transcript_report aggregates a hand-built transcript") {
    Transcript t;
    t.evaluations.push_back({0, 0.5, -0.25, 1.0});
    t.evaluations.push_back({1, 0.1, -0.05, 0.8});
    const TranscriptSummary summary = transcript_report(t);
    CHECK(summary.mean_surplus_a == doctest::Approx(0.3));
    CHECK(summary.mean_surplus_b == doctest::Approx(-0.15));
    CHECK(summary.mean_fairness == doctest::Approx(0.9));
    CHECK(summary.evaluated_epochs == 2);

    CHECK_THROWS_AS(transcript_report(Transcript{}), std::invalid_argument);
}
