#include "prbshare/control.hpp"

#include <sstream>
#include <stdexcept>

namespace prbshare {

std::string to_string(MessageKind kind) {
    switch (kind) {
        case MessageKind::O1Telemetry: return "O1Telemetry";
        case MessageKind::A1Policy: return "A1Policy";
        case MessageKind::E2Allocation: return "E2Allocation";
    }
    return "O1Telemetry";
}

LoopVariant loop_variant_from_string(const std::string& s) {
    if (s == "max" || s == "Max") return LoopVariant::Max;
    if (s == "avg" || s == "Avg") return LoopVariant::Avg;
    if (s == "autofairest" || s == "AutoFairest" || s == "auto") return LoopVariant::AutoFairest;
    throw std::invalid_argument("unknown loop variant: " + s);
}

std::string to_string(LoopVariant v) {
    switch (v) {
        case LoopVariant::Max: return "max";
        case LoopVariant::Avg: return "avg";
        case LoopVariant::AutoFairest: return "autofairest";
    }
    return "max";
}

namespace {

struct PolicyState {
    A1Payload policy;
    bool valid = false;
};

A1Payload train_policy(std::span<const double> lte, std::span<const double> nr,
                       const LoopConfig& config) {
    auto fit_side = [&](std::span<const double> values, const char* label) {
        PrbSeries prefix;
        prefix.values.assign(values.begin(), values.end());
        prefix.label = label;
        const GridSearchResult search = grid_search(prefix, config.grid, {config.train_fraction});
        const ModelSpec spec = select_model(search);
        for (const FitReport& report : search.ranked) {
            if (report.spec == spec) return std::pair{spec, stats_from_values(report.predictions)};
        }
        throw std::runtime_error("train_policy: winning spec missing from ranking");
    };
    A1Payload policy;
    auto [spec_a, stats_a] = fit_side(lte, "LTE");
    auto [spec_b, stats_b] = fit_side(nr, "NR");
    policy.spec_a = spec_a;
    policy.stats_a = stats_a;
    policy.spec_b = spec_b;
    policy.stats_b = stats_b;
    policy.gamma = config.gamma;
    return policy;
}

E2Payload allocate_from_policy(const A1Payload& policy, const LoopConfig& config) {
    AllocationProblem problem;
    problem.pool_size = config.pool_size;
    problem.gamma = policy.gamma;
    problem.stats_a = policy.stats_a;
    problem.stats_b = policy.stats_b;
    problem.integer_mode = config.integer_mode;

    E2Payload out;
    switch (config.variant) {
        case LoopVariant::Max:
            problem.variant = Variant::Max;
            out.alloc = solve(problem);
            out.variant_used = Variant::Max;
            break;
        case LoopVariant::Avg:
            problem.variant = Variant::Avg;
            out.alloc = solve(problem);
            out.variant_used = Variant::Avg;
            break;
        case LoopVariant::AutoFairest: {
            problem.variant = Variant::Max;
            const AllocationResult r_max = solve(problem);
            problem.variant = Variant::Avg;
            const AllocationResult r_avg = solve(problem);
            if (r_max.fairness > r_avg.fairness) {
                out.alloc = r_max;
                out.variant_used = Variant::Max;
            } else {
                out.alloc = r_avg;
                out.variant_used = Variant::Avg;
            }
            break;
        }
    }
    return out;
}

}  // namespace

Transcript run_loop(const PrbSeries& lte, const PrbSeries& nr, const LoopConfig& config) {
    if (lte.values.size() != nr.values.size()) {
        throw std::invalid_argument("run_loop: series lengths differ");
    }
    if (lte.granularity_ms != nr.granularity_ms) {
        throw std::invalid_argument("run_loop: series granularities differ");
    }
    const std::size_t n = lte.values.size();
    if (n < 20) throw std::invalid_argument("run_loop: need at least 20 epochs");
    if (config.allocate_every < 1 || config.retrain_every < config.allocate_every) {
        throw std::invalid_argument("run_loop: require retrain_every >= allocate_every >= 1");
    }
    if (config.retrain_every < 21) {
        throw std::invalid_argument(
            "run_loop: retrain_every must be >= 21 so the first retrain sees 20 observations");
    }
    if (config.grid.empty()) throw std::invalid_argument("run_loop: empty model grid");
    for (double v : lte.values) {
        if (!(v > 0.0)) throw std::invalid_argument("run_loop: LTE demand must be strictly positive");
    }
    for (double v : nr.values) {
        if (!(v > 0.0)) throw std::invalid_argument("run_loop: NR demand must be strictly positive");
    }

    Transcript transcript;
    PolicyState state;
    bool allocated = false;
    E2Payload current;

    const std::span<const double> lte_all(lte.values);
    const std::span<const double> nr_all(nr.values);

    for (std::size_t epoch = 0; epoch < n; ++epoch) {
        if ((epoch + 1) % config.retrain_every == 0) {
            // Non-RT side: telemetry in, train, push policy. Only epochs
            // strictly before this one are visible.
            O1Payload o1;
            o1.lte.assign(lte_all.begin(), lte_all.begin() + epoch);
            o1.nr.assign(nr_all.begin(), nr_all.begin() + epoch);
            transcript.messages.push_back({MessageKind::O1Telemetry, epoch, o1});

            state.policy = train_policy(lte_all.first(epoch), nr_all.first(epoch), config);
            state.valid = true;
            transcript.messages.push_back({MessageKind::A1Policy, epoch, state.policy});
        }
        if (state.valid && (epoch + 1) % config.allocate_every == 0) {
            current = allocate_from_policy(state.policy, config);
            allocated = true;
            transcript.messages.push_back({MessageKind::E2Allocation, epoch, current});
        }
        if (allocated) {
            EpochEvaluation eval;
            eval.epoch = epoch;
            const double da = lte.values[epoch];
            const double db = nr.values[epoch];
            eval.surplus_a = (current.alloc.n_a - da) / da;
            eval.surplus_b = (current.alloc.n_b - db) / db;
            eval.fairness = current.alloc.fairness;
            transcript.evaluations.push_back(eval);
        }
    }
    return transcript;
}

TranscriptSummary transcript_report(const Transcript& transcript) {
    if (transcript.messages.empty() && transcript.evaluations.empty()) {
        throw std::invalid_argument("transcript_report: empty transcript");
    }
    TranscriptSummary summary;
    for (const ControlMessage& msg : transcript.messages) {
        switch (msg.kind) {
            case MessageKind::O1Telemetry: summary.o1_count += 1; break;
            case MessageKind::A1Policy: {
                summary.a1_count += 1;
                const auto& policy = std::get<A1Payload>(msg.payload);
                summary.selected_models[policy.spec_a.canonical()] += 1;
                summary.selected_models[policy.spec_b.canonical()] += 1;
                break;
            }
            case MessageKind::E2Allocation: summary.e2_count += 1; break;
        }
    }
    summary.evaluated_epochs = transcript.evaluations.size();
    for (const EpochEvaluation& eval : transcript.evaluations) {
        summary.mean_surplus_a += eval.surplus_a;
        summary.mean_surplus_b += eval.surplus_b;
        summary.mean_fairness += eval.fairness;
    }
    if (summary.evaluated_epochs > 0) {
        const double n = static_cast<double>(summary.evaluated_epochs);
        summary.mean_surplus_a /= n;
        summary.mean_surplus_b /= n;
        summary.mean_fairness /= n;
    }
    return summary;
}

namespace {

nlohmann::ordered_json stats_to_json(const DemandStats& stats) {
    return {{"mean", stats.mean}, {"variance", stats.variance}, {"maximum", stats.maximum}};
}

DemandStats stats_from_json(const nlohmann::json& j) {
    return {j.at("mean").get<double>(), j.at("variance").get<double>(),
            j.at("maximum").get<double>()};
}

nlohmann::ordered_json alloc_to_json(const AllocationResult& alloc) {
    return {{"n_a", alloc.n_a},
            {"n_b", alloc.n_b},
            {"objective", alloc.objective},
            {"fairness", alloc.fairness},
            {"constraint_active", alloc.constraint_active}};
}

AllocationResult alloc_from_json(const nlohmann::json& j) {
    AllocationResult alloc;
    alloc.n_a = j.at("n_a").get<double>();
    alloc.n_b = j.at("n_b").get<double>();
    alloc.objective = j.at("objective").get<double>();
    alloc.fairness = j.at("fairness").get<double>();
    alloc.constraint_active = j.at("constraint_active").get<bool>();
    return alloc;
}

}  // namespace

std::string transcript_to_jsonl(const Transcript& transcript) {
    std::ostringstream out;
    for (const ControlMessage& msg : transcript.messages) {
        nlohmann::ordered_json line;
        line["kind"] = to_string(msg.kind);
        line["epoch"] = msg.epoch;
        switch (msg.kind) {
            case MessageKind::O1Telemetry: {
                const auto& o1 = std::get<O1Payload>(msg.payload);
                line["payload"] = {{"lte", o1.lte}, {"nr", o1.nr}};
                break;
            }
            case MessageKind::A1Policy: {
                const auto& a1 = std::get<A1Payload>(msg.payload);
                line["payload"] = {{"spec_a", spec_to_json(a1.spec_a)},
                                   {"spec_b", spec_to_json(a1.spec_b)},
                                   {"stats_a", stats_to_json(a1.stats_a)},
                                   {"stats_b", stats_to_json(a1.stats_b)},
                                   {"gamma", a1.gamma}};
                break;
            }
            case MessageKind::E2Allocation: {
                const auto& e2 = std::get<E2Payload>(msg.payload);
                line["payload"] = {{"allocation", alloc_to_json(e2.alloc)},
                                   {"variant", to_string(e2.variant_used)}};
                break;
            }
        }
        out << line.dump() << '\n';
    }
    for (const EpochEvaluation& eval : transcript.evaluations) {
        nlohmann::ordered_json line;
        line["kind"] = "Evaluation";
        line["epoch"] = eval.epoch;
        line["payload"] = {{"surplus_a", eval.surplus_a},
                           {"surplus_b", eval.surplus_b},
                           {"fairness", eval.fairness}};
        out << line.dump() << '\n';
    }
    return out.str();
}

Transcript transcript_from_jsonl(const std::string& text) {
    Transcript transcript;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const std::exception& e) {
            throw std::runtime_error("transcript line " + std::to_string(line_no) + ": " + e.what());
        }
        const std::string kind = j.at("kind").get<std::string>();
        const std::size_t epoch = j.at("epoch").get<std::size_t>();
        const nlohmann::json& payload = j.at("payload");
        if (kind == "Evaluation") {
            EpochEvaluation eval;
            eval.epoch = epoch;
            eval.surplus_a = payload.at("surplus_a").get<double>();
            eval.surplus_b = payload.at("surplus_b").get<double>();
            eval.fairness = payload.at("fairness").get<double>();
            transcript.evaluations.push_back(eval);
        } else if (kind == "O1Telemetry") {
            O1Payload o1;
            o1.lte = payload.at("lte").get<std::vector<double>>();
            o1.nr = payload.at("nr").get<std::vector<double>>();
            transcript.messages.push_back({MessageKind::O1Telemetry, epoch, o1});
        } else if (kind == "A1Policy") {
            A1Payload a1;
            a1.spec_a = spec_from_json(payload.at("spec_a"));
            a1.spec_b = spec_from_json(payload.at("spec_b"));
            a1.stats_a = stats_from_json(payload.at("stats_a"));
            a1.stats_b = stats_from_json(payload.at("stats_b"));
            a1.gamma = payload.at("gamma").get<double>();
            transcript.messages.push_back({MessageKind::A1Policy, epoch, a1});
        } else if (kind == "E2Allocation") {
            E2Payload e2;
            e2.alloc = alloc_from_json(payload.at("allocation"));
            e2.variant_used = variant_from_string(payload.at("variant").get<std::string>());
            transcript.messages.push_back({MessageKind::E2Allocation, epoch, e2});
        } else {
            throw std::runtime_error("transcript line " + std::to_string(line_no) +
                                     ": unknown kind '" + kind + "'");
        }
    }
    return transcript;
}

nlohmann::ordered_json summary_to_json(const TranscriptSummary& summary) {
    nlohmann::ordered_json j;
    j["mean_surplus_a"] = summary.mean_surplus_a;
    j["mean_surplus_b"] = summary.mean_surplus_b;
    j["mean_fairness"] = summary.mean_fairness;
    j["message_counts"] = {{"O1Telemetry", summary.o1_count},
                           {"A1Policy", summary.a1_count},
                           {"E2Allocation", summary.e2_count}};
    j["evaluated_epochs"] = summary.evaluated_epochs;
    nlohmann::ordered_json models = nlohmann::ordered_json::object();
    for (const auto& [name, count] : summary.selected_models) models[name] = count;
    j["selected_models"] = models;
    return j;
}

}  // namespace prbshare
