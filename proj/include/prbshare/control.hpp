#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "prbshare/allocate.hpp"
#include "prbshare/forecast.hpp"
#include "prbshare/series.hpp"

namespace prbshare {

/// Closed-loop controller simulation over two recorded demand series.
///
/// Roles and message flow mirror a RIC deployment: RAN telemetry reaches the
/// non-real-time side (O1), which trains and selects forecasters and pushes
/// a policy (A1); the near-real-time side turns the latest policy into a pool
/// partition and pushes it back toward the RAN (E2). Everything runs
/// in-process and is recorded as an ordered transcript, so a run is
/// deterministic and replayable.

enum class MessageKind { O1Telemetry, A1Policy, E2Allocation };
std::string to_string(MessageKind kind);

struct O1Payload {
    std::vector<double> lte;  // all observations from epochs before the stamp
    std::vector<double> nr;
};

struct A1Payload {
    ModelSpec spec_a;
    ModelSpec spec_b;
    DemandStats stats_a;  // from the selected models' test-segment predictions
    DemandStats stats_b;
    double gamma = 0.5;
};

struct E2Payload {
    AllocationResult alloc;
    Variant variant_used = Variant::Max;
};

struct ControlMessage {
    MessageKind kind = MessageKind::O1Telemetry;
    std::size_t epoch = 0;
    std::variant<O1Payload, A1Payload, E2Payload> payload;
};

enum class LoopVariant { Max, Avg, AutoFairest };
LoopVariant loop_variant_from_string(const std::string& s);
std::string to_string(LoopVariant v);

struct LoopConfig {
    std::size_t retrain_every = 100;  // epochs between non-RT retrains
    std::size_t allocate_every = 25;  // epochs between near-RT allocations
    double pool_size = 40.0;
    double gamma = 0.5;
    LoopVariant variant = LoopVariant::AutoFairest;
    std::vector<ModelSpec> grid;
    std::uint64_t seed = 0;
    double train_fraction = 0.66;
    bool integer_mode = true;
};

/// Allocation in force at an epoch, scored against that epoch's actual demand.
struct EpochEvaluation {
    std::size_t epoch = 0;
    double surplus_a = 0.0;
    double surplus_b = 0.0;
    double fairness = 0.0;
};

struct Transcript {
    std::vector<ControlMessage> messages;
    std::vector<EpochEvaluation> evaluations;
};

/// Replay the series epoch by epoch. Retrain boundaries fall at the end of
/// every retrain_every-th epoch (epoch e with (e+1) % retrain_every == 0);
/// each boundary emits O1 telemetry carrying every observation from epochs
/// strictly before e, runs the grid search per network on it, computes
/// demand statistics over the winners' test-segment predictions, and emits
/// the A1 policy. Allocate boundaries fall the same way on allocate_every;
/// once a policy exists each boundary solves the partition (AutoFairest
/// solves both variants and keeps the fairer, ties to Avg) and emits E2. The
/// allocation in force is evaluated against both series at every epoch.
Transcript run_loop(const PrbSeries& lte, const PrbSeries& nr, const LoopConfig& config);

struct TranscriptSummary {
    double mean_surplus_a = 0.0;
    double mean_surplus_b = 0.0;
    double mean_fairness = 0.0;
    std::size_t o1_count = 0;
    std::size_t a1_count = 0;
    std::size_t e2_count = 0;
    std::size_t evaluated_epochs = 0;
    // canonical model string -> times selected (per network per policy)
    std::map<std::string, std::size_t> selected_models;
};

TranscriptSummary transcript_report(const Transcript& transcript);

// JSON-lines encoding: one {kind, epoch, payload} object per line for each
// message, followed by the per-epoch evaluation records (kind "Evaluation").
std::string transcript_to_jsonl(const Transcript& transcript);
Transcript transcript_from_jsonl(const std::string& text);
nlohmann::ordered_json summary_to_json(const TranscriptSummary& summary);

}  // namespace prbshare
