#include "prbshare/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "prbshare/allocate.hpp"
#include "prbshare/control.hpp"
#include "prbshare/forecast.hpp"
#include "prbshare/ingest.hpp"
#include "prbshare/manifest.hpp"
#include "prbshare/rng.hpp"
#include "prbshare/series.hpp"
#include "prbshare/synthgen.hpp"

namespace fs = std::filesystem;

namespace prbshare {

namespace {

/// Validation problems that should exit with code 2 rather than 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const char* kDefaultGrid = R"([
  {"kind": "Naive", "params": {"offset": 1}},
  {"kind": "MA", "params": {"window": 2}},
  {"kind": "MM", "params": {"window": 2}},
  {"kind": "ARIMA", "params": {"p": 1, "d": 3, "q": 2, "trend": "c"}},
  {"kind": "ETS", "params": {"trend": "mul", "damped": false}},
  {"kind": "MLP", "params": {"inputs": 1, "nodes": 150, "epochs": 100, "batch": 150, "seed": 1}}
])";

const char* kStatisticalGrid = R"([
  {"kind": "Naive", "params": {"offset": 1}},
  {"kind": "MA", "params": {"window": 2}},
  {"kind": "MM", "params": {"window": 2}},
  {"kind": "ARIMA", "params": {"p": 1, "d": 3, "q": 2, "trend": "c"}},
  {"kind": "ETS", "params": {"trend": "mul", "damped": false}}
])";

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::runtime_error("failed to format double");
    return std::string(buf, ptr);
}

void require_file(const std::string& path, const std::string& what) {
    if (!fs::exists(path)) throw UsageError(what + " not found: " + path);
}

void ensure_out_dir(const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir + ": " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<ModelSpec> grid_from_arg(const std::string& grid_path, const char* fallback_json) {
    if (grid_path.empty()) {
        std::vector<ModelSpec> grid;
        for (const auto& item : nlohmann::json::parse(fallback_json)) grid.push_back(spec_from_json(item));
        return grid;
    }
    require_file(grid_path, "grid file");
    try {
        std::vector<ModelSpec> grid = load_grid(grid_path);
        if (grid.empty()) throw UsageError("grid file holds no specs: " + grid_path);
        return grid;
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(std::string("invalid grid file: ") + e.what());
    }
}

DemandStats stats_from_json_file(const std::string& path) {
    require_file(path, "stats file");
    std::ifstream in(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
        throw UsageError("invalid stats JSON " + path + ": " + e.what());
    }
    DemandStats stats{j.value("mean", 0.0), j.value("variance", 0.0), j.value("maximum", 0.0)};
    try {
        validate_stats(stats, path);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    return stats;
}

nlohmann::ordered_json report_to_json(const FitReport& report) {
    nlohmann::ordered_json j = spec_to_json(report.spec);
    j["rmse"] = report.rmse;
    j["train_len"] = report.train_len;
    j["test_len"] = report.test_len;
    return j;
}

/// --config <json>: any long option absent from the command line is filled
/// in from the file (keys are option names without the leading dashes).
std::vector<std::string> apply_config_file(std::vector<std::string> args) {
    std::string config_path;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--config") config_path = args[i + 1];
    }
    if (config_path.empty()) return args;
    require_file(config_path, "config file");
    std::ifstream in(config_path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
        throw UsageError(std::string("invalid config JSON: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    for (const auto& [key, value] : j.items()) {
        const std::string flag = "--" + key;
        bool present = false;
        for (const auto& a : args) {
            if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
        }
        if (present) continue;
        args.push_back(flag);
        if (value.is_boolean()) {
            if (!value.get<bool>()) args.pop_back();  // false flag: just omit
        } else if (value.is_string()) {
            args.push_back(value.get<std::string>());
        } else {
            args.push_back(value.dump());
        }
    }
    return args;
}

std::int64_t granularity_from_name(const std::string& name) {
    if (name == "ms") return 1;
    if (name == "minute") return 60'000;
    if (name == "hour") return 3'600'000;
    throw UsageError("granularity must be one of ms|minute|hour, got '" + name + "'");
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int cmd_ingest(const std::string& input, const std::string& dci_format,
               const std::string& granularity, const std::string& label, const std::string& name,
               const std::string& out_dir) {
    require_file(input, "input DCI log");
    const std::int64_t gran_ms = granularity_from_name(granularity);
    std::optional<std::string> filter;
    if (!dci_format.empty()) filter = dci_format;

    std::vector<DciRecord> records;
    try {
        records = parse_dci_log(input, filter);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    if (records.empty()) throw UsageError("no records after filtering: " + input);
    const PrbSeries series = to_series(records, gran_ms, label.empty() ? name : label);

    ensure_out_dir(out_dir);
    const std::string csv = out_dir + "/" + name + ".csv";
    save_series(series, csv);
    std::cout << "ingest: " << records.size() << " records -> " << series.size() << " intervals ("
              << series.gap_count << " gaps) -> " << csv << "\n";

    nlohmann::ordered_json config{{"input", input},
                                  {"dci_format", dci_format},
                                  {"granularity", granularity},
                                  {"label", label},
                                  {"name", name}};
    write_manifest("ingest", out_dir, config.dump(), {input}, {csv, sidecar_path(csv)});
    return 0;
}

int cmd_synth(const std::string& reference, std::uint64_t master_seed, std::size_t block_len,
              double jitter_std, std::size_t target_len, const std::string& label,
              const std::string& name, std::size_t bins, bool with_report,
              const std::string& out_dir) {
    require_file(reference, "reference series");
    const PrbSeries ref = load_series(reference);

    SynthConfig config;
    config.seed = rng::derive_seed(master_seed, "synth");
    config.block_len = block_len;
    config.jitter_std = jitter_std;
    config.target_len = target_len == 0 ? ref.size() : target_len;
    if (jitter_std < 0.0) throw UsageError("--jitter-std must be >= 0");

    PrbSeries synth;
    try {
        synth = generate_surrogate(ref, config);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    synth.label = label;

    ensure_out_dir(out_dir);
    const std::string csv = out_dir + "/" + name + ".csv";
    save_series(synth, csv);
    std::vector<std::string> outputs{csv, sidecar_path(csv)};

    if (with_report) {
        const SimilarityReport rep = similarity_report(ref, synth, bins);
        nlohmann::ordered_json j{{"mean_a", rep.mean_a},         {"mean_b", rep.mean_b},
                                 {"variance_a", rep.variance_a}, {"variance_b", rep.variance_b},
                                 {"max_a", rep.max_a},           {"max_b", rep.max_b},
                                 {"ks_statistic", rep.ks_statistic}};
        const std::string rep_path = out_dir + "/" + name + "_similarity.json";
        write_text(rep_path, j.dump(2) + "\n");
        std::ostringstream cdf;
        cdf << "value,cdf_reference,cdf_synthetic\n";
        for (const auto& row : rep.cdf) {
            cdf << format_double(row[0]) << ',' << format_double(row[1]) << ','
                << format_double(row[2]) << '\n';
        }
        const std::string cdf_path = out_dir + "/" + name + "_cdf.csv";
        write_text(cdf_path, cdf.str());
        outputs.push_back(rep_path);
        outputs.push_back(cdf_path);
        std::cout << "synth: KS statistic vs reference = " << rep.ks_statistic << "\n";
    }
    std::cout << "synth: " << synth.size() << " values -> " << csv << "\n";

    nlohmann::ordered_json cfg{{"reference", reference}, {"seed", master_seed},
                               {"block_len", block_len}, {"jitter_std", jitter_std},
                               {"target_len", target_len}, {"label", label},
                               {"name", name},           {"bins", bins}};
    write_manifest("synth", out_dir, cfg.dump(), {reference}, outputs);
    return 0;
}

int cmd_forecast(const std::string& series_path, const std::string& grid_path,
                 double train_fraction, bool select, bool predictions, const std::string& name,
                 const std::string& out_dir) {
    require_file(series_path, "series file");
    const PrbSeries series = load_series(series_path);
    const std::vector<ModelSpec> grid = grid_from_arg(grid_path, kDefaultGrid);
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw UsageError("--train-fraction must lie in (0,1)");
    }

    const GridSearchResult result = grid_search(series, grid, {train_fraction});

    ensure_out_dir(out_dir);
    nlohmann::ordered_json ranking = nlohmann::ordered_json::array();
    for (const FitReport& report : result.ranked) ranking.push_back(report_to_json(report));
    nlohmann::ordered_json failures = nlohmann::ordered_json::array();
    for (const FailedSpec& failure : result.failures) {
        nlohmann::ordered_json f = spec_to_json(failure.spec);
        f["reason"] = failure.reason;
        failures.push_back(f);
    }
    nlohmann::ordered_json doc{{"series", series_path}, {"ranking", ranking}, {"failures", failures}};
    const std::string ranking_path = out_dir + "/" + name + "_ranking.json";
    write_text(ranking_path, doc.dump(2) + "\n");
    std::vector<std::string> outputs{ranking_path};

    std::ostringstream cmp;
    cmp << "model,rmse\n";
    for (const FitReport& report : result.ranked) {
        cmp << report.spec.canonical() << ',' << format_double(report.rmse) << '\n';
    }
    const std::string cmp_path = out_dir + "/" + name + "_rmse.csv";
    write_text(cmp_path, cmp.str());
    outputs.push_back(cmp_path);

    for (const FitReport& report : result.ranked) {
        std::cout << "  " << report.spec.canonical() << "  rmse=" << report.rmse << "\n";
    }
    for (const FailedSpec& failure : result.failures) {
        std::cout << "  " << failure.spec.canonical() << "  FAILED: " << failure.reason << "\n";
    }

    if (select) {
        const ModelSpec winner = select_model(result);
        const std::string sel_path = out_dir + "/" + name + "_selected.json";
        nlohmann::ordered_json sel = spec_to_json(winner);
        sel["rmse"] = result.ranked.front().rmse;
        write_text(sel_path, sel.dump(2) + "\n");
        outputs.push_back(sel_path);
        std::cout << "selected: " << winner.canonical() << "\n";
    }
    if (predictions && !result.ranked.empty()) {
        const FitReport& best = result.ranked.front();
        std::ostringstream pred;
        pred << "t_index,observed,predicted\n";
        for (std::size_t i = 0; i < best.predictions.size(); ++i) {
            const std::size_t t = best.train_len + i;
            pred << t << ',' << format_double(series.values[t]) << ','
                 << format_double(best.predictions[i]) << '\n';
        }
        const std::string pred_path = out_dir + "/" + name + "_predictions.csv";
        write_text(pred_path, pred.str());
        outputs.push_back(pred_path);
    }

    nlohmann::ordered_json cfg{{"series", series_path},
                               {"grid", grid_path},
                               {"train_fraction", train_fraction},
                               {"select", select},
                               {"predictions", predictions},
                               {"name", name}};
    std::vector<std::string> inputs{series_path};
    if (!grid_path.empty()) inputs.push_back(grid_path);
    write_manifest("forecast", out_dir, cfg.dump(), inputs, outputs);
    return 0;
}

AllocationProblem problem_from_json(const nlohmann::json& j) {
    AllocationProblem problem;
    problem.pool_size = j.at("pool_size").get<double>();
    problem.gamma = j.at("gamma").get<double>();
    problem.variant = variant_from_string(j.at("variant").get<std::string>());
    problem.integer_mode = j.value("integer_mode", false);
    const auto parse_stats = [&](const char* key) {
        const nlohmann::json& s = j.at(key);
        return DemandStats{s.at("mean").get<double>(), s.at("variance").get<double>(),
                           s.at("maximum").get<double>()};
    };
    problem.stats_a = parse_stats("stats_a");
    problem.stats_b = parse_stats("stats_b");
    return problem;
}

int cmd_allocate(const std::string& problem_path, const std::string& name,
                 const std::string& out_dir) {
    require_file(problem_path, "problem file");
    std::ifstream in(problem_path);
    nlohmann::json pj;
    try {
        pj = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
        throw UsageError("invalid problem JSON: " + std::string(e.what()));
    }
    AllocationProblem problem;
    AllocationResult result;
    try {
        problem = problem_from_json(pj);
        result = solve(problem);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }

    ensure_out_dir(out_dir);
    nlohmann::ordered_json j{{"n_a", result.n_a},
                             {"n_b", result.n_b},
                             {"objective", result.objective},
                             {"fairness", result.fairness},
                             {"constraint_active", result.constraint_active}};
    const std::string out_path = out_dir + "/" + name + "_allocation.json";
    write_text(out_path, j.dump(2) + "\n");
    std::cout << "allocate: n_a=" << result.n_a << " n_b=" << result.n_b
              << " objective=" << result.objective << " fairness=" << result.fairness << "\n";
    write_manifest("allocate", out_dir, pj.dump(), {problem_path}, {out_path});
    return 0;
}

std::vector<double> gamma_grid(double step) {
    if (!(step > 0.0 && step < 1.0)) throw UsageError("--gamma-step must lie in (0,1)");
    std::vector<double> gammas;
    for (int k = 1; k * step < 1.0 - 1e-12; ++k) gammas.push_back(k * step);
    if (gammas.empty()) throw UsageError("--gamma-step leaves no gamma values inside (0,1)");
    return gammas;
}

int cmd_sweep(const std::string& series_a, const std::string& series_b, const std::string& stats_a,
              const std::string& stats_b, const std::vector<double>& pools,
              const std::vector<std::string>& variants, double gamma_step, bool continuous,
              const std::string& name, const std::string& out_dir) {
    if (pools.empty()) throw UsageError("--pool requires at least one value");
    for (double pool : pools) {
        if (!(pool > 0.0)) throw UsageError("pool sizes must be positive");
    }
    if ((series_a.empty() != series_b.empty()) || (stats_a.empty() != stats_b.empty())) {
        throw UsageError("provide --series-a/--series-b and/or --stats-a/--stats-b in pairs");
    }
    if (series_a.empty() && stats_a.empty()) {
        throw UsageError("sweep needs series or stats inputs");
    }

    std::vector<std::string> inputs;
    std::vector<double> demands_a, demands_b;
    DemandStats sa, sb;
    if (!series_a.empty()) {
        require_file(series_a, "series file");
        require_file(series_b, "series file");
        const PrbSeries a = load_series(series_a);
        const PrbSeries b = load_series(series_b);
        demands_a = a.values;
        demands_b = b.values;
        try {
            sa = stats_from_series(a);
            sb = stats_from_series(b);
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
        inputs.push_back(series_a);
        inputs.push_back(series_b);
    }
    if (!stats_a.empty()) {
        sa = stats_from_json_file(stats_a);
        sb = stats_from_json_file(stats_b);
        inputs.push_back(stats_a);
        inputs.push_back(stats_b);
    }
    // Without demand sequences, score surpluses against the mean demand.
    if (demands_a.empty()) {
        demands_a = {sa.mean};
        demands_b = {sb.mean};
    }

    std::vector<Variant> parsed_variants;
    for (const std::string& v : variants) {
        try {
            parsed_variants.push_back(variant_from_string(v));
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
    }
    const std::vector<double> gammas = gamma_grid(gamma_step);

    ensure_out_dir(out_dir);
    std::vector<std::string> outputs;
    for (double pool : pools) {
        for (Variant variant : parsed_variants) {
            const std::vector<SweepRecord> records =
                gamma_sweep(sa, sb, pool, variant, !continuous, gammas, demands_a, demands_b);
            std::ostringstream csv;
            csv << "gamma,n_a,n_b,objective,fairness,surplus_a,surplus_b,constraint_active\n";
            for (const SweepRecord& rec : records) {
                csv << format_double(rec.gamma) << ',' << format_double(rec.alloc.n_a) << ','
                    << format_double(rec.alloc.n_b) << ',' << format_double(rec.alloc.objective)
                    << ',' << format_double(rec.alloc.fairness) << ','
                    << format_double(rec.surplus_a) << ',' << format_double(rec.surplus_b) << ','
                    << (rec.alloc.constraint_active ? 1 : 0) << '\n';
            }
            const std::string path =
                out_dir + "/" + name + "_sweep_N" + format_double(pool) + "_" + to_string(variant) + ".csv";
            write_text(path, csv.str());
            outputs.push_back(path);
            std::cout << "sweep: pool=" << pool << " variant=" << to_string(variant) << " -> "
                      << path << "\n";
        }
    }

    nlohmann::ordered_json cfg{{"series_a", series_a}, {"series_b", series_b},
                               {"stats_a", stats_a},   {"stats_b", stats_b},
                               {"pools", pools},       {"variants", variants},
                               {"gamma_step", gamma_step}, {"integer_mode", !continuous},
                               {"name", name}};
    write_manifest("sweep", out_dir, cfg.dump(), inputs, outputs);
    return 0;
}

int cmd_simulate(const std::string& series_a, const std::string& series_b, double pool, double gamma,
                 const std::string& variant, std::size_t retrain_every, std::size_t allocate_every,
                 const std::string& grid_path, bool continuous, std::uint64_t seed,
                 const std::string& name, const std::string& out_dir) {
    require_file(series_a, "series file");
    require_file(series_b, "series file");
    const PrbSeries lte = load_series(series_a);
    const PrbSeries nr = load_series(series_b);

    LoopConfig config;
    config.retrain_every = retrain_every;
    config.allocate_every = allocate_every;
    config.pool_size = pool;
    config.gamma = gamma;
    config.integer_mode = !continuous;
    config.seed = seed;
    try {
        config.variant = loop_variant_from_string(variant);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    config.grid = grid_from_arg(grid_path, kStatisticalGrid);
    // Single master seed: seedable specs without an explicit seed get a
    // derived one, so the whole run reproduces from --seed.
    for (ModelSpec& spec : config.grid) {
        if (spec.kind == ModelKind::Mlp && spec.seed == 0) {
            spec.seed = rng::derive_seed(seed, "mlp");
        }
    }

    Transcript transcript;
    try {
        transcript = run_loop(lte, nr, config);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    ensure_out_dir(out_dir);
    const std::string transcript_path = out_dir + "/" + name + "_transcript.jsonl";
    write_text(transcript_path, transcript_to_jsonl(transcript));
    const TranscriptSummary summary = transcript_report(transcript);
    const std::string summary_path = out_dir + "/" + name + "_summary.json";
    write_text(summary_path, summary_to_json(summary).dump(2) + "\n");
    std::cout << "simulate: " << transcript.messages.size() << " messages, "
              << summary.evaluated_epochs << " evaluated epochs, mean fairness "
              << summary.mean_fairness << "\n";

    nlohmann::ordered_json cfg{{"series_a", series_a},
                               {"series_b", series_b},
                               {"pool", pool},
                               {"gamma", gamma},
                               {"variant", variant},
                               {"retrain_every", retrain_every},
                               {"allocate_every", allocate_every},
                               {"grid", grid_path},
                               {"integer_mode", !continuous},
                               {"seed", seed},
                               {"name", name}};
    std::vector<std::string> inputs{series_a, series_b};
    if (!grid_path.empty()) inputs.push_back(grid_path);
    write_manifest("simulate", out_dir, cfg.dump(), inputs, {transcript_path, summary_path});
    return 0;
}

int cmd_report(const std::string& transcript_path, const std::string& name,
               const std::string& out_dir) {
    require_file(transcript_path, "transcript file");
    std::ifstream in(transcript_path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    Transcript transcript;
    try {
        transcript = transcript_from_jsonl(buf.str());
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    TranscriptSummary summary;
    try {
        summary = transcript_report(transcript);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    ensure_out_dir(out_dir);
    const std::string summary_path = out_dir + "/" + name + "_summary.json";
    write_text(summary_path, summary_to_json(summary).dump(2) + "\n");
    std::cout << summary_to_json(summary).dump(2) << "\n";

    nlohmann::ordered_json cfg{{"transcript", transcript_path}, {"name", name}};
    write_manifest("report", out_dir, cfg.dump(), {transcript_path}, {summary_path});
    return 0;
}

}  // namespace

const char* default_grid_json() { return kDefaultGrid; }
const char* statistical_grid_json() { return kStatisticalGrid; }

int run_cli(const std::vector<std::string>& raw_args) {
    CLI::App app{"PRB demand forecasting and intent-weighted pool partitioning"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string config_path;
    app.add_option("--seed", seed, "master seed; all randomness derives from it");
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--config", config_path, "JSON file supplying defaults for missing options");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "DCI log -> demand series");
    std::string in_input, in_format, in_gran = "minute", in_label, in_name = "series";
    ingest->add_option("--input", in_input, "DCI log CSV")->required();
    ingest->add_option("--dci-format", in_format, "keep only this DCI format (e.g. 2B)");
    ingest->add_option("--granularity", in_gran, "ms|minute|hour")->capture_default_str();
    ingest->add_option("--label", in_label, "series label (defaults to the name)");
    ingest->add_option("--name", in_name, "output file stem")->capture_default_str();

    // synth
    auto* synth = app.add_subcommand("synth", "surrogate series from a reference");
    std::string sy_ref, sy_label = "NR", sy_name = "synthetic";
    std::size_t sy_block = 24, sy_target = 0, sy_bins = 50;
    double sy_jitter = 0.5;
    bool sy_report = false;
    synth->add_option("--reference", sy_ref, "reference series CSV")->required();
    synth->add_option("--block-len", sy_block, "bootstrap block length")->capture_default_str();
    synth->add_option("--jitter-std", sy_jitter, "Gaussian jitter std (PRBs)")->capture_default_str();
    synth->add_option("--target-len", sy_target, "output length (default: reference length)");
    synth->add_option("--label", sy_label, "output label")->capture_default_str();
    synth->add_option("--name", sy_name, "output file stem")->capture_default_str();
    synth->add_option("--bins", sy_bins, "CDF table rows in the report")->capture_default_str();
    synth->add_flag("--report", sy_report, "also write a similarity report and CDF table");

    // forecast
    auto* forecast = app.add_subcommand("forecast", "grid-search forecasters on a series");
    std::string fc_series, fc_grid, fc_name = "forecast";
    double fc_fraction = 0.66;
    bool fc_select = false, fc_predictions = false;
    forecast->add_option("--series", fc_series, "series CSV")->required();
    forecast->add_option("--grid", fc_grid, "model grid JSON (default: bundled grid)");
    forecast->add_option("--train-fraction", fc_fraction, "train split fraction")->capture_default_str();
    forecast->add_flag("--select", fc_select, "also write the winning spec");
    forecast->add_flag("--predictions", fc_predictions, "also write the winner's predictions CSV");
    forecast->add_option("--name", fc_name, "output file stem")->capture_default_str();

    // allocate
    auto* allocate = app.add_subcommand("allocate", "solve one partition problem");
    std::string al_problem, al_name = "allocate";
    allocate->add_option("--problem", al_problem, "problem JSON")->required();
    allocate->add_option("--name", al_name, "output file stem")->capture_default_str();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "gamma sweeps per pool size and variant");
    std::string sw_series_a, sw_series_b, sw_stats_a, sw_stats_b, sw_name = "sweep";
    std::vector<double> sw_pools;
    std::vector<std::string> sw_variants{"max", "avg"};
    double sw_step = 0.01;
    bool sw_continuous = false;
    sweep->add_option("--series-a", sw_series_a, "network A series CSV (demands + stats)");
    sweep->add_option("--series-b", sw_series_b, "network B series CSV");
    sweep->add_option("--stats-a", sw_stats_a, "network A stats JSON (overrides series stats)");
    sweep->add_option("--stats-b", sw_stats_b, "network B stats JSON");
    sweep->add_option("--pool", sw_pools, "pool sizes")->required()->delimiter(',');
    sweep->add_option("--variants", sw_variants, "max,avg")->delimiter(',')->capture_default_str();
    sweep->add_option("--gamma-step", sw_step, "gamma grid step in (0,1)")->capture_default_str();
    sweep->add_flag("--continuous", sw_continuous, "continuous allocations (default: integer)");
    sweep->add_option("--name", sw_name, "output file stem")->capture_default_str();

    // simulate
    auto* simulate = app.add_subcommand("simulate", "closed-loop controller replay");
    std::string sm_series_a, sm_series_b, sm_variant = "autofairest", sm_grid, sm_name = "sim";
    double sm_pool = 40.0, sm_gamma = 0.5;
    std::size_t sm_retrain = 200, sm_allocate = 50;
    bool sm_continuous = false;
    simulate->add_option("--series-a", sm_series_a, "network A series CSV")->required();
    simulate->add_option("--series-b", sm_series_b, "network B series CSV")->required();
    simulate->add_option("--pool", sm_pool, "shared pool size")->capture_default_str();
    simulate->add_option("--gamma", sm_gamma, "intent weight in (0,1)")->capture_default_str();
    simulate->add_option("--variant", sm_variant, "max|avg|autofairest")->capture_default_str();
    simulate->add_option("--retrain-every", sm_retrain, "epochs between retrains")->capture_default_str();
    simulate->add_option("--allocate-every", sm_allocate, "epochs between allocations")->capture_default_str();
    simulate->add_option("--grid", sm_grid, "model grid JSON (default: bundled statistical grid)");
    simulate->add_flag("--continuous", sm_continuous, "continuous allocations (default: integer)");
    simulate->add_option("--name", sm_name, "output file stem")->capture_default_str();

    // report
    auto* report = app.add_subcommand("report", "summarize an existing transcript");
    std::string rp_transcript, rp_name = "report";
    report->add_option("--transcript", rp_transcript, "transcript JSON-lines file")->required();
    report->add_option("--name", rp_name, "output file stem")->capture_default_str();

    try {
        std::vector<std::string> args = apply_config_file(raw_args);
        // CLI11 parses reversed argv-style vectors.
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);

        if (ingest->parsed()) {
            return cmd_ingest(in_input, in_format, in_gran, in_label, in_name, out_dir);
        }
        if (synth->parsed()) {
            return cmd_synth(sy_ref, seed, sy_block, sy_jitter, sy_target, sy_label, sy_name,
                             sy_bins, sy_report, out_dir);
        }
        if (forecast->parsed()) {
            return cmd_forecast(fc_series, fc_grid, fc_fraction, fc_select, fc_predictions, fc_name,
                                out_dir);
        }
        if (allocate->parsed()) {
            return cmd_allocate(al_problem, al_name, out_dir);
        }
        if (sweep->parsed()) {
            return cmd_sweep(sw_series_a, sw_series_b, sw_stats_a, sw_stats_b, sw_pools,
                             sw_variants, sw_step, sw_continuous, sw_name, out_dir);
        }
        if (simulate->parsed()) {
            if (app.count("--seed") == 0) {
                throw UsageError("simulate requires --seed for reproducibility");
            }
            return cmd_simulate(sm_series_a, sm_series_b, sm_pool, sm_gamma, sm_variant, sm_retrain,
                                sm_allocate, sm_grid, sm_continuous, seed, sm_name, out_dir);
        }
        if (report->parsed()) {
            return cmd_report(rp_transcript, rp_name, out_dir);
        }
        return 2;
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace prbshare
