#include "clex/pipeline.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "clex/attrsel.hpp"
#include "clex/taxonomy.hpp"

namespace clex {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Cluster labels that are integers stay numbers in JSON.
json cluster_id_json(const std::string& name) {
    try {
        size_t pos = 0;
        long long v = std::stoll(name, &pos);
        if (pos == name.size() && std::to_string(v) == name) return json(v);
    } catch (...) {
    }
    return json(name);
}

json predicate_json(const Predicate& p) {
    json j;
    j["attribute"] = p.attribute;
    switch (p.op) {
        case PredicateOp::Eq:
            j["op"] = "==";
            if (p.numeric)
                j["value"] = p.number;
            else
                j["value"] = p.literal;
            break;
        case PredicateOp::Neq:
            j["op"] = "!=";
            j["value"] = p.literal;
            break;
        case PredicateOp::Between:
            j["op"] = "between";
            j["lo"] = p.lo;
            j["hi"] = p.hi;
            break;
    }
    return j;
}

std::string percent(double v) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.0f%%", v * 100.0);
    return buf;
}

std::string two_dec(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string render_conjunction(const Explanation& e) {
    std::string out;
    for (size_t i = 0; i < e.predicates.size(); ++i) {
        if (i) out += " AND ";
        out += e.predicates[i].render();
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << content;
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace

ExplainRun run_explain(const RunConfig& cfg) {
    cfg.thresholds.validate();
    cfg.binning.validate();
    if (cfg.input.empty()) throw ConfigError("no input file given");
    int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();

    auto t_total = Clock::now();
    json timings;

    auto t0 = Clock::now();
    LoadOptions lopts;
    lopts.label_column = cfg.label_column;
    Dataset d = load_csv(cfg.input, lopts);
    timings["load"] = ms_since(t0);

    t0 = Clock::now();
    auto intervals = bin_dataset(d, cfg.binning, threads);
    timings["binning"] = ms_since(t0);

    t0 = Clock::now();
    Taxonomy taxonomy = Taxonomy::build(intervals);
    timings["taxonomy"] = ms_since(t0);

    if (!cfg.dot_taxonomy.empty()) {
        std::vector<std::string> names;
        for (const auto& col : d.columns()) names.push_back(col.name);
        write_file(cfg.dot_taxonomy, taxonomy.to_dot(names));
    }

    t0 = Clock::now();
    ItemCatalog catalog(d, taxonomy, cfg.negation);
    std::vector<Transaction> transactions = augment_dataset(d, catalog);
    timings["augment"] = ms_since(t0);

    std::vector<uint8_t> attr_mask;
    std::vector<int> selected;
    t0 = Clock::now();
    if (cfg.attr_selection) {
        selected = select_attributes(d, cfg.thresholds, cfg.p, threads);
        attr_mask.assign(d.n_attrs(), 0);
        for (int a : selected) attr_mask[a] = 1;
    }
    timings["attrsel"] = ms_since(t0);

    ExplainOptions opts;
    opts.threads = threads;
    if (cfg.attr_selection) opts.attr_enabled = &attr_mask;
    std::vector<ClusterTiming> cluster_timings;
    opts.timings = &cluster_timings;

    auto by_cluster = explain_all(d, taxonomy, catalog, transactions, cfg.thresholds, opts);

    double mine_ms = 0, metrics_ms = 0, skyline_ms = 0;
    json per_cluster_ms = json::object();
    for (size_t c = 0; c < cluster_timings.size(); ++c) {
        mine_ms += cluster_timings[c].mine_ms;
        metrics_ms += cluster_timings[c].metrics_ms;
        skyline_ms += cluster_timings[c].skyline_ms;
        per_cluster_ms[d.cluster_names()[c]] = cluster_timings[c].mine_ms;
    }
    timings["mine"] = mine_ms;
    timings["metrics"] = metrics_ms;
    timings["skyline"] = skyline_ms;
    timings["mine_per_cluster"] = per_cluster_ms;
    timings["total"] = ms_since(t_total);

    json clusters = json::array();
    for (size_t c = 0; c < by_cluster.size(); ++c) {
        json jc;
        jc["cluster"] = cluster_id_json(d.cluster_names()[c]);
        json ex = json::array();
        for (const Explanation& e : by_cluster[c]) {
            json je;
            json preds = json::array();
            for (const Predicate& p : e.predicates) preds.push_back(predicate_json(p));
            je["predicates"] = std::move(preds);
            je["coverage"] = e.metrics.coverage;
            je["separation_error"] = e.metrics.separation_error;
            je["conciseness"] = e.metrics.conciseness;
            je["qse"] = qse(e.metrics);
            ex.push_back(std::move(je));
        }
        jc["explanations"] = std::move(ex);
        clusters.push_back(std::move(jc));
    }

    json config;
    config["input"] = cfg.input;
    config["label_column"] = cfg.label_column;
    config["coverage_threshold"] = cfg.thresholds.coverage;
    config["separation_threshold"] = cfg.thresholds.separation;
    config["conciseness_threshold"] = cfg.thresholds.conciseness;
    config["bins_per_method"] = cfg.binning.bins_per_method;
    config["tree_max_leaves"] = cfg.binning.tree_max_leaves;
    config["neg_cap"] = cfg.negation.max_neg_cardinality;
    config["attr_selection"] = cfg.attr_selection;
    config["p"] = cfg.p;
    config["seed"] = cfg.seed;
    if (cfg.attr_selection) {
        json sel = json::array();
        for (int a : selected) sel.push_back(d.column(a).name);
        config["selected_attributes"] = std::move(sel);
    }

    ExplainRun run;
    run.report["clusters"] = std::move(clusters);
    run.report["config"] = std::move(config);
    run.report["timings_ms"] = std::move(timings);

    std::ostringstream text;
    text << cfg.input << ": " << d.n_rows() << " rows, " << d.n_attrs() << " attributes, "
         << d.n_clusters() << " clusters\n";
    if (cfg.attr_selection) {
        text << "selected attributes:";
        for (int a : selected) text << ' ' << d.column(a).name;
        text << '\n';
    }
    for (size_t c = 0; c < by_cluster.size(); ++c) {
        text << "Cluster " << d.cluster_names()[c] << " (" << d.cluster_size((int32_t)c)
             << " rows): ";
        if (by_cluster[c].empty()) {
            text << "no explanation meets the thresholds\n";
            continue;
        }
        const Explanation* best = &by_cluster[c][0];
        for (const auto& e : by_cluster[c])
            if (qse(e.metrics) > qse(best->metrics)) best = &e;
        text << by_cluster[c].size() << " explanation(s) on the Pareto front\n";
        text << "  " << percent(best->metrics.coverage)
             << " of the cluster's points hold: " << render_conjunction(*best) << '\n';
        text << "    (separation error " << two_dec(best->metrics.separation_error)
             << ", conciseness " << two_dec(best->metrics.conciseness) << ", qse "
             << two_dec(qse(best->metrics)) << ")\n";
    }
    run.text = text.str();

    if (!cfg.output.empty()) write_file(cfg.output, run.report.dump(2) + "\n");
    return run;
}

namespace {

Explanation explanation_from_json(const json& je, int32_t cluster, const Dataset& d) {
    Explanation e;
    e.cluster = cluster;
    if (!je.contains("predicates") || !je["predicates"].is_array() ||
        je["predicates"].empty())
        throw DataError("explanation entry without predicates");
    for (const json& jp : je["predicates"]) {
        if (!jp.contains("attribute") || !jp.contains("op"))
            throw DataError("predicate needs 'attribute' and 'op'");
        Predicate p;
        p.attribute = jp["attribute"].get<std::string>();
        std::string op = jp["op"].get<std::string>();
        const Column& col = d.column(p.attribute);  // throws on unknown attribute
        if (op == "==") {
            p.op = PredicateOp::Eq;
            if (!jp.contains("value")) throw DataError("'==' predicate needs 'value'");
            if (jp["value"].is_number()) {
                p.numeric = true;
                p.number = jp["value"].get<double>();
            } else {
                p.literal = jp["value"].get<std::string>();
            }
        } else if (op == "!=") {
            p.op = PredicateOp::Neq;
            if (!jp.contains("value")) throw DataError("'!=' predicate needs 'value'");
            p.literal = jp["value"].get<std::string>();
        } else if (op == "between") {
            p.op = PredicateOp::Between;
            if (!jp.contains("lo") || !jp.contains("hi"))
                throw DataError("'between' predicate needs 'lo' and 'hi'");
            p.numeric = true;
            p.lo = jp["lo"].get<double>();
            p.hi = jp["hi"].get<double>();
        } else {
            throw DataError("unknown predicate op: " + op);
        }
        if (col.kind == AttributeKind::Categorical && p.op == PredicateOp::Between)
            throw DataError("'between' on categorical attribute " + p.attribute);
        e.predicates.push_back(std::move(p));
    }
    return e;
}

}  // namespace

EvalRun run_eval(const std::string& data_path, const std::string& label_column,
                 const std::string& explanations_path) {
    LoadOptions lopts;
    lopts.label_column = label_column;
    Dataset d = load_csv(data_path, lopts);

    std::ifstream in(explanations_path);
    if (!in) throw DataError("cannot open file: " + explanations_path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& ex) {
        throw DataError(std::string("malformed explanations JSON: ") + ex.what());
    }
    if (!doc.contains("clusters") || !doc["clusters"].is_array())
        throw DataError("explanations JSON lacks a 'clusters' array");

    const double drift_tol = 1e-9;
    EvalRun run;
    std::vector<double> best(d.n_clusters(), 0.0);
    std::vector<size_t> counted(d.n_clusters(), 0);
    json clusters = json::array();

    for (const json& jc : doc["clusters"]) {
        if (!jc.contains("cluster")) throw DataError("cluster entry lacks 'cluster'");
        std::string name = jc["cluster"].is_string()
                               ? jc["cluster"].get<std::string>()
                               : std::to_string(jc["cluster"].get<long long>());
        int32_t code = -1;
        for (size_t c = 0; c < d.n_clusters(); ++c)
            if (d.cluster_names()[c] == name) code = static_cast<int32_t>(c);
        if (code < 0) throw DataError("explanations reference unknown cluster " + name);

        json jex = json::array();
        for (const json& je : jc.value("explanations", json::array())) {
            Explanation e = explanation_from_json(je, code, d);
            ExplanationMetrics m;
            m.coverage = coverage(e, d);
            m.separation_error = separation_error(e, d);
            m.conciseness = conciseness(e);

            size_t drift_before = run.drift_count;
            auto check = [&](const char* key, double recomputed) {
                if (je.contains(key) &&
                    std::fabs(je[key].get<double>() - recomputed) > drift_tol)
                    ++run.drift_count;
            };
            check("coverage", m.coverage);
            check("separation_error", m.separation_error);
            check("conciseness", m.conciseness);

            double score = qse(m);
            best[code] = std::max(best[code], score);
            ++counted[code];

            json out;
            out["coverage"] = m.coverage;
            out["separation_error"] = m.separation_error;
            out["conciseness"] = m.conciseness;
            out["qse"] = score;
            out["drift"] = run.drift_count != drift_before;
            jex.push_back(std::move(out));
        }
        json outc;
        outc["cluster"] = cluster_id_json(name);
        outc["explanations"] = std::move(jex);
        clusters.push_back(std::move(outc));
    }

    double total = 0.0;
    json per_cluster = json::object();
    for (size_t c = 0; c < d.n_clusters(); ++c) {
        total += best[c];
        per_cluster[d.cluster_names()[c]] = best[c];
    }
    run.aggregate_qse = d.n_clusters() ? total / d.n_clusters() : 0.0;

    run.report["clusters"] = std::move(clusters);
    run.report["best_qse_per_cluster"] = std::move(per_cluster);
    run.report["aggregate_qse"] = run.aggregate_qse;
    run.report["drift_count"] = run.drift_count;

    std::ostringstream text;
    for (size_t c = 0; c < d.n_clusters(); ++c)
        text << "cluster " << d.cluster_names()[c] << ": best qse " << two_dec(best[c]) << " ("
             << counted[c] << " explanation(s))\n";
    text << "aggregate qse: " << two_dec(run.aggregate_qse) << '\n';
    if (run.drift_count == 0)
        text << "metric drift: none\n";
    else
        text << "metric drift: " << run.drift_count << " stored value(s) disagree\n";
    run.text = text.str();
    return run;
}

void run_synth(const SynthSpec& spec, const std::string& out_path) {
    Dataset d = make_synthetic(spec);
    d.write_csv(out_path);
}

nlohmann::json strip_volatile(nlohmann::json report) {
    report.erase("timings_ms");
    return report;
}

}  // namespace clex
