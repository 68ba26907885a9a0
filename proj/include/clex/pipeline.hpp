#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "clex/binning.hpp"
#include "clex/explain.hpp"
#include "clex/items.hpp"
#include "clex/synth.hpp"

namespace clex {

struct RunConfig {
    std::string input;
    std::string label_column = "cluster";
    std::string output;  // JSON path; empty = no file
    Thresholds thresholds;
    BinningConfig binning;
    NegationConfig negation;
    bool attr_selection = true;
    double p = 1.0;
    uint64_t seed = 1;
    int threads = 0;  // 0: all cores
    std::string dot_taxonomy;  // taxonomy DOT dump path, empty = off
    std::string format = "both";  // json | text | both
};

struct ExplainRun {
    nlohmann::json report;
    std::string text;
};

/// Full pipeline: load -> bin -> taxonomy -> transactions -> attribute
/// selection -> per-cluster explanation generation -> report. Writes the
/// JSON report to cfg.output when set.
ExplainRun run_explain(const RunConfig& cfg);

struct EvalRun {
    nlohmann::json report;
    std::string text;
    size_t drift_count = 0;
    double aggregate_qse = 0.0;
};

/// Recomputes every metric of a stored explanation file from scratch
/// against the data and flags drift from the stored values.
EvalRun run_eval(const std::string& data_path, const std::string& label_column,
                 const std::string& explanations_path);

/// Writes a deterministic synthetic CSV fixture.
void run_synth(const SynthSpec& spec, const std::string& out_path);

/// The JSON report with volatile fields (timings) removed; two runs of the
/// same configuration compare equal under this view.
nlohmann::json strip_volatile(nlohmann::json report);

}  // namespace clex
