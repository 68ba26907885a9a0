// clexplain: mine rule-based explanations for black-box clustering results.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "clex/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Explain clustering results with concise predicate rules"};
    app.require_subcommand(1);
    // e.g. `clexplain --config run.ini explain ...` with an [explain] section
    app.set_config("--config");

    clex::RunConfig cfg;
    bool no_attr_selection = false;

    auto* explain = app.add_subcommand("explain", "Generate cluster explanations");
    explain->add_option("--input", cfg.input, "Input CSV (header row required)")->required();
    explain->add_option("--labels", cfg.label_column, "Cluster label column name");
    explain->add_option("--out", cfg.output, "JSON report path");
    explain->add_option("--coverage", cfg.thresholds.coverage, "Coverage threshold");
    explain->add_option("--separation", cfg.thresholds.separation,
                        "Separation error threshold");
    explain->add_option("--conciseness", cfg.thresholds.conciseness, "Conciseness threshold");
    explain->add_option("--p", cfg.p, "Attribute selection scale factor");
    explain->add_flag("--no-attr-selection", no_attr_selection,
                      "Mine over all attributes (no selection)");
    explain->add_option("--bins", cfg.binning.bins_per_method, "Bins per binning method");
    std::string bin_methods = "ew,ef,km,tree";
    explain->add_option("--bin-methods", bin_methods,
                        "Comma list of binning methods (ew, ef, km, tree)");
    explain->add_option("--tree-leaves", cfg.binning.tree_max_leaves,
                        "Leaf budget of the tree-based binner");
    explain->add_option("--neg-cap", cfg.negation.max_neg_cardinality,
                        "Max negation values per categorical attribute");
    explain->add_option("--seed", cfg.seed, "Seed (recorded in the report)");
    explain->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
    explain->add_option("--dot-taxonomy", cfg.dot_taxonomy,
                        "Write the interval taxonomy as DOT to this path");
    explain->add_option("--format", cfg.format, "Report format")
        ->check(CLI::IsMember({"json", "text", "both"}));

    std::string eval_data, eval_labels = "cluster", eval_explanations, eval_out;
    auto* eval = app.add_subcommand("eval", "Re-score an explanations file against data");
    eval->add_option("--input", eval_data, "Input CSV")->required();
    eval->add_option("--labels", eval_labels, "Cluster label column name");
    eval->add_option("--explanations", eval_explanations, "Explanations JSON (from explain)")
        ->required();
    eval->add_option("--out", eval_out, "Write the evaluation report JSON here");

    clex::SynthSpec spec;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic clustered CSV");
    synth->add_option("--rows", spec.rows, "Row count");
    synth->add_option("--numeric", spec.numeric_attrs, "Informative numeric attributes");
    synth->add_option("--categorical", spec.categorical_attrs,
                      "Informative categorical attributes");
    synth->add_option("--clusters", spec.clusters, "Cluster count");
    synth->add_option("--noise", spec.noise_attrs, "Label-independent noise attributes");
    synth->add_option("--seed", spec.seed, "RNG seed");
    synth->add_option("--out", synth_out, "Output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (explain->parsed()) {
            cfg.attr_selection = !no_attr_selection;
            cfg.binning.equal_width = bin_methods.find("ew") != std::string::npos;
            cfg.binning.equal_frequency = bin_methods.find("ef") != std::string::npos;
            cfg.binning.kmeans = bin_methods.find("km") != std::string::npos;
            cfg.binning.tree = bin_methods.find("tree") != std::string::npos;
            clex::ExplainRun run = clex::run_explain(cfg);
            if (cfg.format == "text" || cfg.format == "both") std::cout << run.text;
            if (cfg.format == "json" && cfg.output.empty())
                std::cout << run.report.dump(2) << '\n';
        } else if (eval->parsed()) {
            clex::EvalRun run = clex::run_eval(eval_data, eval_labels, eval_explanations);
            std::cout << run.text;
            if (!eval_out.empty()) {
                std::ofstream out(eval_out);
                out << run.report.dump(2) << '\n';
            }
        } else if (synth->parsed()) {
            clex::run_synth(spec, synth_out);
            std::cout << "wrote " << synth_out << '\n';
        }
    } catch (const clex::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const clex::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitOk;
}
