// bsgs: best-subset-of-groups selection via group splicing.
//
// Subcommands: fit, gic-path, simulate, oracle, stability, bench.
// Output schemas are documented in FORMATS.md; all non-timing output is a
// pure function of (inputs, flags, seed).

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bsgs/csv.hpp"
#include "bsgs/grouped_design.hpp"
#include "bsgs/metrics.hpp"
#include "bsgs/oracle.hpp"
#include "bsgs/select.hpp"
#include "bsgs/sim.hpp"
#include "bsgs/splice.hpp"
#include "bsgs/synth.hpp"
#include "bsgs/version.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitConfig = 4;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string csv_safe(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '"') c = ';';
    return s;
}

std::string join_labels(const bsgs::group_set_t& ids, const std::vector<std::string>& labels) {
    std::string out;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        if (k) out += ';';
        out += labels[static_cast<std::size_t>(ids[k])];
    }
    return out;
}

std::vector<std::string> synthetic_labels(int num_groups) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(num_groups));
    for (int j = 0; j < num_groups; ++j) labels.push_back("g" + std::to_string(j + 1));
    return labels;
}

struct DataOptions {
    std::string design_path;
    std::string group_map_path;
    std::string response_column;
};

void add_data_options(CLI::App* cmd, DataOptions& opts) {
    cmd->add_option("--design", opts.design_path, "Headered numeric design CSV")->required();
    cmd->add_option("--groups", opts.group_map_path, "Two-column CSV mapping column_name,group_label")
        ->required();
    cmd->add_option("--response", opts.response_column, "Name of the response column")->required();
}

struct FitOptions {
    std::string method = "sgs";
    int size = 0;
    int t_min = 1;
    int t_max = 0;
    int c_max = 2;
    std::string criterion = "gic";
    double pi_t = -1;
    int max_iterations = 100;
};

void add_fit_options(CLI::App* cmd, FitOptions& opts, bool with_method = true) {
    if (with_method)
        cmd->add_option("--method", opts.method, "gsplicing | sgs | ggs")
            ->check(CLI::IsMember({"gsplicing", "sgs", "ggs"}));
    cmd->add_option("--size", opts.size, "Model size T (required for --method gsplicing)");
    cmd->add_option("--t-min", opts.t_min, "Lower bound of the size search (ggs)");
    cmd->add_option("--t-max", opts.t_max, "Upper bound of the size search (0 = default)");
    cmd->add_option("--c-max", opts.c_max, "Maximum splice exchange size");
    cmd->add_option("--criterion", opts.criterion, "gic | bic")->check(CLI::IsMember({"gic", "bic"}));
    cmd->add_option("--pi-t", opts.pi_t, "Override the splice-acceptance threshold (>= 0)");
    cmd->add_option("--max-iterations", opts.max_iterations, "Splicing iteration cap");
}

bsgs::Method parse_method(const std::string& name) {
    if (name == "gsplicing") return bsgs::Method::gsplicing;
    if (name == "sgs") return bsgs::Method::sgs;
    return bsgs::Method::ggs;
}

bsgs::SelectorConfig selector_of(const FitOptions& opts) {
    bsgs::SelectorConfig sel;
    sel.t_min = opts.t_min;
    sel.t_max = opts.t_max;
    sel.max_exchange = opts.c_max;
    sel.criterion = opts.criterion == "bic" ? bsgs::Criterion::bic : bsgs::Criterion::gic;
    if (opts.pi_t >= 0) sel.threshold_override = opts.pi_t;
    sel.max_iterations = opts.max_iterations;
    return sel;
}

bsgs::FitReport run_fit_method(const bsgs::GroupedDesign& design, const FitOptions& opts) {
    std::optional<int> fixed_size;
    if (opts.method == "gsplicing") {
        if (opts.size < 1) throw bsgs::size_error("--method gsplicing requires --size");
        fixed_size = opts.size;
    }
    std::optional<double> pi_t;
    if (opts.pi_t >= 0) pi_t = opts.pi_t;
    return bsgs::detail::fit_with_method(design, parse_method(opts.method), selector_of(opts),
                                         fixed_size, pi_t);
}

json report_to_json(const bsgs::FitReport& report, const std::vector<std::string>& group_labels,
                    const std::vector<std::string>& column_names,
                    const bsgs::GroupStructure& structure) {
    json out;
    out["support_size"] = report.support.size();
    out["num_predictors"] = report.num_predictors;
    json groups = json::array();
    for (int j : report.support) groups.push_back(group_labels[static_cast<std::size_t>(j)]);
    out["selected_groups"] = groups;
    out["intercept"] = report.intercept;
    json coefs = json::array();
    for (int j : report.support) {
        for (bsgs::index_t c : structure.columns_of(j)) {
            json entry;
            entry["column"] = column_names[static_cast<std::size_t>(c)];
            entry["group"] = group_labels[static_cast<std::size_t>(j)];
            entry["value"] = report.beta_original[c];
            coefs.push_back(entry);
        }
    }
    out["coefficients"] = coefs;
    out["loss"] = report.loss;
    out["near_zero_loss"] = report.near_zero;
    out["gic"] = report.gic;
    out["bic"] = report.bic;
    out["iterations"] = report.iterations;
    out["threshold"] = report.threshold;
    out["loss_trace"] = report.loss_trace;
    return out;
}

void write_json(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw bsgs::parse_error("cannot write '" + path + "'");
    out << doc.dump(2) << '\n';
}

json config_echo_base(const std::string& command) {
    json doc;
    doc["version"] = bsgs::kVersion;
    doc["command"] = command;
    return doc;
}

// --- synthetic spec JSON ---

bsgs::SyntheticSpec spec_from_json(const json& doc) {
    bsgs::SyntheticSpec spec;
    spec.n = doc.at("n").get<long long>();
    spec.num_groups = doc.at("groups").get<int>();
    spec.group_size = doc.at("group_size").get<long long>();
    spec.rho = doc.value("rho", 0.0);
    const std::string structure = doc.value("structure", "exponential");
    if (structure == "exponential") spec.structure = bsgs::CorrStructure::exponential;
    else if (structure == "constant") spec.structure = bsgs::CorrStructure::constant;
    else if (structure == "iid") spec.structure = bsgs::CorrStructure::iid;
    else throw bsgs::parse_error("spec: unknown structure '" + structure + "'");
    spec.sigma1 = doc.at("sigma1").get<double>();
    spec.s_star = doc.at("s_star").get<int>();
    spec.seed = doc.value("seed", 0ULL);
    if (doc.contains("true_support")) {
        bsgs::group_set_t support;
        for (int id : doc.at("true_support").get<std::vector<int>>()) support.push_back(id - 1);
        std::sort(support.begin(), support.end());
        spec.true_support = std::move(support);
    }
    if (doc.contains("fixed_coefficient")) spec.fixed_coefficient = doc.at("fixed_coefficient").get<double>();
    bsgs::validate_spec(spec);
    return spec;
}

json spec_to_json(const bsgs::SyntheticSpec& spec) {
    json doc;
    doc["n"] = spec.n;
    doc["groups"] = spec.num_groups;
    doc["group_size"] = spec.group_size;
    doc["rho"] = spec.rho;
    doc["structure"] = spec.structure == bsgs::CorrStructure::exponential ? "exponential"
                       : spec.structure == bsgs::CorrStructure::constant  ? "constant"
                                                                          : "iid";
    doc["sigma1"] = spec.sigma1;
    doc["s_star"] = spec.s_star;
    doc["seed"] = spec.seed;
    if (spec.true_support) {
        std::vector<int> ids;
        for (int j : *spec.true_support) ids.push_back(j + 1);
        doc["true_support"] = ids;
    }
    if (spec.fixed_coefficient) doc["fixed_coefficient"] = *spec.fixed_coefficient;
    return doc;
}

bsgs::SyntheticSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw bsgs::parse_error("cannot open spec '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw bsgs::parse_error("spec '" + path + "': " + e.what());
    }
    return spec_from_json(doc);
}

// --- subcommand drivers ---

int cmd_fit(const DataOptions& data, const FitOptions& fit_opts, const std::string& output) {
    const bsgs::IngestedData data_in =
        bsgs::ingest_csv(data.design_path, data.response_column, data.group_map_path);
    const bsgs::GroupedDesign design = bsgs::preprocess(data_in.x_raw, data_in.y_raw, data_in.structure);
    const bsgs::FitReport report = run_fit_method(design, fit_opts);

    json doc = config_echo_base("fit");
    doc["method"] = fit_opts.method;
    doc["design"] = data.design_path;
    doc["response"] = data.response_column;
    doc["report"] = report_to_json(report, data_in.group_labels, data_in.column_names, design.structure);
    write_json(output, doc);
    std::cout << "selected " << report.support.size() << " group(s): "
              << join_labels(report.support, data_in.group_labels) << "\n";
    return 0;
}

int cmd_gic_path(const DataOptions& data, const FitOptions& fit_opts, const std::string& output,
                 const std::string& summary_path) {
    const bsgs::IngestedData data_in =
        bsgs::ingest_csv(data.design_path, data.response_column, data.group_map_path);
    const bsgs::GroupedDesign design = bsgs::preprocess(data_in.x_raw, data_in.y_raw, data_in.structure);
    const bsgs::SelectionResult result = bsgs::sgsplicing_fit(design, selector_of(fit_opts));

    std::ofstream out(output);
    if (!out) throw bsgs::parse_error("cannot write '" + output + "'");
    out << "T,loss,gic,bic,support\n";
    for (const auto& rec : result.path) {
        out << rec.target_size << ',' << format_double(rec.loss) << ',' << format_double(rec.gic)
            << ',' << format_double(rec.bic) << ',' << join_labels(rec.support, data_in.group_labels)
            << '\n';
    }
    out.close();

    const bool use_bic = fit_opts.criterion == "bic";
    int argmin_t = 0;
    double best = 0;
    for (const auto& rec : result.path) {
        const double v = use_bic ? rec.bic : rec.gic;
        if (argmin_t == 0 || v < best) {
            best = v;
            argmin_t = rec.target_size;
        }
    }
    json summary = config_echo_base("gic-path");
    summary["criterion"] = fit_opts.criterion;
    summary["argmin_t"] = argmin_t;
    summary["selected_groups"] = json::array();
    for (const auto& rec : result.path) {
        if (rec.target_size == argmin_t) {
            json groups = json::array();
            for (int j : rec.support) groups.push_back(data_in.group_labels[static_cast<std::size_t>(j)]);
            summary["selected_groups"] = groups;
        }
    }
    summary["path_rows"] = result.path.size();
    if (!summary_path.empty()) write_json(summary_path, summary);
    std::cout << summary.dump(2) << "\n";
    return 0;
}

std::string optional_to_csv(const std::optional<double>& v) {
    return v ? format_double(*v) : "";
}

int cmd_simulate(const std::string& spec_path, bsgs::SimConfig config, long long seed_override,
                 bsgs::index_t holdout, const std::string& output, const std::string& summary_path,
                 const std::string& export_dir) {
    config.spec = load_spec(spec_path);
    if (seed_override >= 0) config.spec.seed = static_cast<std::uint64_t>(seed_override);

    if (!export_dir.empty()) {
        // Write replicate 0 as the grouped-design CSV pair, for use with `fit`.
        bsgs::SyntheticSpec spec = config.spec;
        spec.seed = bsgs::derive_seed(config.spec.seed, 0);
        const bsgs::GroundTruth truth = bsgs::make_dataset(spec);
        std::vector<std::string> columns;
        std::vector<std::string> labels;
        for (int j = 0; j < spec.num_groups; ++j)
            for (bsgs::index_t k = 0; k < spec.group_size; ++k) {
                columns.push_back("x" + std::to_string(static_cast<long long>(j) * spec.group_size + k + 1));
                labels.push_back("g" + std::to_string(j + 1));
            }
        bsgs::write_design_csv(export_dir + "/design.csv", truth.design_raw, truth.response, columns, "y");
        bsgs::write_group_map_csv(export_dir + "/groups.csv", columns, labels);
    }

    auto results = bsgs::run_replications(config);

    // Optional held-out prediction error: same beta*, fresh design and noise.
    if (holdout > 0) {
        for (auto& res : results) {
            if (!res.ok) continue;
            bsgs::SyntheticSpec spec = config.spec;
            spec.seed = res.seed;
            const bsgs::GroundTruth truth = bsgs::make_dataset(spec);
            bsgs::SyntheticSpec holdout_spec = spec;
            holdout_spec.n = holdout;
            holdout_spec.seed = bsgs::derive_seed(res.seed, 0x686f6c64ULL); // "hold"
            bsgs::mat_t x_holdout =
                holdout_spec.structure == bsgs::CorrStructure::iid
                    ? bsgs::gen_design(holdout_spec, bsgs::mat_t::Zero(holdout, spec.num_groups))
                    : bsgs::gen_design(holdout_spec, bsgs::gen_latent(holdout_spec));
            bsgs::RandomStream eps = bsgs::RandomStream::substream(holdout_spec.seed, "epsilon");
            bsgs::vec_t y_holdout = bsgs::gen_response(x_holdout, truth.beta_star, spec.sigma1, eps);

            const bsgs::GroupedDesign design =
                bsgs::preprocess(truth.design_raw, truth.response, bsgs::group_structure_of(spec));
            const bsgs::FitReport refit = bsgs::detail::fit_with_method(
                design, config.method, config.selector, config.fixed_size, config.threshold_override);
            res.metrics.pe = bsgs::prediction_error(refit, x_holdout, y_holdout);
        }
    }

    std::ofstream out(output);
    if (!out) throw bsgs::parse_error("cannot write '" + output + "'");
    out << "replicate,seed,ok,error,selected_size,iterations,tp,fp,tn,fn,tpr,fpr,mcc,gse,reee,pe,"
           "runtime_seconds\n";
    int successes = 0;
    for (const auto& r : results) {
        if (r.ok) ++successes;
        out << r.replicate << ',' << r.seed << ',' << (r.ok ? 1 : 0) << ',' << csv_safe(r.error) << ','
            << r.selected_size << ',' << r.iterations << ',';
        if (r.ok) {
            const auto& m = r.metrics;
            out << m.counts.tp << ',' << m.counts.fp << ',' << m.counts.tn << ',' << m.counts.fn << ','
                << optional_to_csv(m.rates.tpr) << ',' << optional_to_csv(m.rates.fpr) << ','
                << format_double(m.rates.mcc) << ',' << m.gse << ',' << format_double(m.reee) << ','
                << optional_to_csv(m.pe) << ',';
        } else {
            out << ",,,,,,,,,,";
        }
        out << format_double(r.runtime_seconds) << '\n';
    }
    out.close();

    auto collect = [&](auto&& getter) {
        std::vector<double> v;
        for (const auto& r : results)
            if (r.ok) {
                auto value = getter(r);
                if (value) v.push_back(*value);
            }
        return v;
    };
    auto stat_json = [](const bsgs::SummaryStat& s) {
        json j;
        j["mean"] = s.mean;
        j["sd"] = s.sd;
        j["count"] = s.count;
        return j;
    };

    json summary = config_echo_base("simulate");
    summary["spec"] = spec_to_json(config.spec);
    summary["method"] = config.method == bsgs::Method::gsplicing ? "gsplicing"
                        : config.method == bsgs::Method::sgs     ? "sgs"
                                                                 : "ggs";
    summary["replications"] = config.replications;
    summary["successes"] = successes;
    summary["failures"] = config.replications - successes;
    json metrics;
    metrics["tpr"] = stat_json(bsgs::summarize(collect([](const auto& r) { return r.metrics.rates.tpr; })));
    metrics["fpr"] = stat_json(bsgs::summarize(collect([](const auto& r) { return r.metrics.rates.fpr; })));
    metrics["mcc"] = stat_json(bsgs::summarize(collect(
        [](const auto& r) { return std::optional<double>(r.metrics.rates.mcc); })));
    metrics["gse"] = stat_json(bsgs::summarize(collect(
        [](const auto& r) { return std::optional<double>(static_cast<double>(r.metrics.gse)); })));
    metrics["reee"] = stat_json(bsgs::summarize(collect(
        [](const auto& r) { return std::optional<double>(r.metrics.reee); })));
    metrics["pe"] = stat_json(bsgs::summarize(collect([](const auto& r) { return r.metrics.pe; })));
    summary["metrics"] = metrics;
    json timing;
    timing["runtime_seconds"] = stat_json(bsgs::summarize(collect(
        [](const auto& r) { return std::optional<double>(r.runtime_seconds); })));
    summary["timing"] = timing;
    if (!summary_path.empty()) write_json(summary_path, summary);
    std::cout << summary.dump(2) << "\n";

    const double success_rate = static_cast<double>(successes) / config.replications;
    return success_rate >= 0.9 ? 0 : kExitNumeric;
}

int cmd_oracle(const DataOptions& data, int size, const std::string& output) {
    const bsgs::IngestedData data_in =
        bsgs::ingest_csv(data.design_path, data.response_column, data.group_map_path);
    const bsgs::GroupedDesign design = bsgs::preprocess(data_in.x_raw, data_in.y_raw, data_in.structure);
    const bsgs::OracleResult result = bsgs::exhaustive_bsgs(design, size);

    json doc = config_echo_base("oracle");
    doc["size"] = size;
    json groups = json::array();
    for (int j : result.best_support) groups.push_back(data_in.group_labels[static_cast<std::size_t>(j)]);
    doc["best_support"] = groups;
    doc["best_loss"] = result.best_loss;
    doc["num_candidates"] = result.num_candidates;
    write_json(output, doc);
    std::cout << doc.dump(2) << "\n";
    return 0;
}

int cmd_stability(const DataOptions& data, const FitOptions& fit_opts, int replications,
                  double fraction, long long seed, int threads, const std::string& output) {
    const bsgs::IngestedData data_in =
        bsgs::ingest_csv(data.design_path, data.response_column, data.group_map_path);

    bsgs::StabilityConfig config;
    config.replications = replications;
    config.subsample_fraction = fraction;
    config.seed = static_cast<std::uint64_t>(seed);
    config.method = parse_method(fit_opts.method);
    config.selector = selector_of(fit_opts);
    if (fit_opts.method == "gsplicing") {
        if (fit_opts.size < 1) throw bsgs::size_error("--method gsplicing requires --size");
        config.fixed_size = fit_opts.size;
    }
    config.threads = threads;

    const bsgs::StabilityResult result =
        bsgs::stability_frequencies(data_in.x_raw, data_in.y_raw, data_in.structure, config);

    std::vector<std::pair<double, int>> ranked;
    for (int j = 0; j < data_in.structure.num_groups(); ++j)
        ranked.emplace_back(result.frequency[static_cast<std::size_t>(j)], j);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });

    std::ofstream out(output);
    if (!out) throw bsgs::parse_error("cannot write '" + output + "'");
    out << "group,frequency\n";
    for (const auto& [freq, j] : ranked)
        out << data_in.group_labels[static_cast<std::size_t>(j)] << ',' << format_double(freq) << '\n';
    out.close();

    std::cout << "stability: " << result.successes << "/" << replications << " subsample fits succeeded\n";
    const double success_rate = static_cast<double>(result.successes) / replications;
    return success_rate >= 0.9 ? 0 : kExitNumeric;
}

int cmd_bench(const std::string& sweep_path, int threads, const std::string& output) {
    std::ifstream in(sweep_path);
    if (!in) throw bsgs::parse_error("cannot open sweep '" + sweep_path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw bsgs::parse_error("sweep '" + sweep_path + "': " + e.what());
    }

    const std::string vary = doc.at("vary").get<std::string>();
    if (vary != "J" && vary != "n" && vary != "p_max")
        throw bsgs::parse_error("sweep: vary must be one of J, n, p_max");
    const std::vector<long long> values = doc.at("values").get<std::vector<long long>>();
    if (values.empty()) throw bsgs::parse_error("sweep: values must be nonempty");
    const int reps = doc.value("replications", 3);
    const std::string method = doc.value("method", "sgs");
    bsgs::SyntheticSpec base = spec_from_json(doc.at("base"));

    std::ofstream out(output);
    if (!out) throw bsgs::parse_error("cannot write '" + output + "'");
    out << "component,value,runtime_seconds\n";
    for (long long v : values) {
        bsgs::SimConfig config;
        config.spec = base;
        if (vary == "J") config.spec.num_groups = static_cast<int>(v);
        else if (vary == "n") config.spec.n = v;
        else config.spec.group_size = v;
        config.replications = reps;
        config.method = parse_method(method);
        config.threads = threads;
        auto results = bsgs::run_replications(config);
        std::vector<double> times;
        for (const auto& r : results)
            if (r.ok) times.push_back(r.runtime_seconds);
        if (times.empty()) throw bsgs::numeric_error("sweep point " + std::to_string(v) + ": all replicates failed");
        std::sort(times.begin(), times.end());
        const double median = times.size() % 2 == 1
                                  ? times[times.size() / 2]
                                  : 0.5 * (times[times.size() / 2 - 1] + times[times.size() / 2]);
        out << vary << ',' << v << ',' << format_double(median) << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Best subset of groups selection via group splicing"};
    app.set_version_flag("--version", std::string(bsgs::kVersion));
    app.require_subcommand(1);
    app.footer("Output file schemas are documented in FORMATS.md.");

    // fit
    auto* fit = app.add_subcommand("fit", "Fit a grouped dataset and write a JSON report");
    DataOptions fit_data;
    FitOptions fit_opts;
    std::string fit_output = "fit.json";
    add_data_options(fit, fit_data);
    add_fit_options(fit, fit_opts);
    fit->add_option("--output", fit_output, "Output JSON path");

    // gic-path
    auto* path_cmd = app.add_subcommand("gic-path", "Emit the criterion path over T = 1..t_max (CSV columns: T,loss,gic,bic,support)");
    DataOptions path_data;
    FitOptions path_opts;
    std::string path_output = "path.csv";
    std::string path_summary;
    add_data_options(path_cmd, path_data);
    add_fit_options(path_cmd, path_opts, /*with_method=*/false);
    path_cmd->add_option("--output", path_output, "Output CSV path");
    path_cmd->add_option("--summary", path_summary, "Optional summary JSON path");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Replicated synthetic experiment from a spec JSON (CSV columns: replicate,seed,ok,error,selected_size,iterations,tp,fp,tn,fn,tpr,fpr,mcc,gse,reee,pe,runtime_seconds)");
    std::string sim_spec;
    FitOptions sim_opts;
    int sim_reps = 100;
    int sim_threads = 1;
    long long sim_seed = -1;
    long long sim_holdout = 0;
    std::string sim_output = "metrics.csv";
    std::string sim_summary;
    std::string sim_export;
    sim->add_option("--spec", sim_spec, "SyntheticSpec JSON path")->required();
    add_fit_options(sim, sim_opts);
    sim->add_option("--replications", sim_reps, "Number of replicates");
    sim->add_option("--threads", sim_threads, "Worker threads");
    sim->add_option("--seed", sim_seed, "Override the spec seed");
    sim->add_option("--holdout", sim_holdout, "Held-out rows for prediction error (0 = skip)");
    sim->add_option("--output", sim_output, "Per-replicate metrics CSV");
    sim->add_option("--summary", sim_summary, "Summary JSON path");
    sim->add_option("--export-dir", sim_export, "Also write replicate 0 as design.csv/groups.csv here");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Exhaustive best-subset search (small J only)");
    DataOptions oracle_data;
    int oracle_size = 1;
    std::string oracle_output = "oracle.json";
    add_data_options(oracle, oracle_data);
    oracle->add_option("--size", oracle_size, "Model size T")->required();
    oracle->add_option("--output", oracle_output, "Output JSON path");

    // stability
    auto* stab = app.add_subcommand("stability", "Group selection frequencies over row subsamples (CSV columns: group,frequency; sorted by frequency)");
    DataOptions stab_data;
    FitOptions stab_opts;
    int stab_reps = 100;
    double stab_fraction = 0.5;
    long long stab_seed = 0;
    int stab_threads = 1;
    std::string stab_output = "stability.csv";
    add_data_options(stab, stab_data);
    add_fit_options(stab, stab_opts);
    stab->add_option("--replications", stab_reps, "Number of subsample fits");
    stab->add_option("--fraction", stab_fraction, "Subsample fraction in (0,1)");
    stab->add_option("--seed", stab_seed, "Subsampling seed");
    stab->add_option("--threads", stab_threads, "Worker threads");
    stab->add_option("--output", stab_output, "Output CSV path");

    // bench
    auto* bench = app.add_subcommand("bench", "Runtime scaling sweep from a sweep JSON (CSV columns: component,value,runtime_seconds)");
    std::string bench_sweep;
    int bench_threads = 1;
    std::string bench_output = "scaling.csv";
    bench->add_option("--sweep", bench_sweep, "Sweep JSON path")->required();
    bench->add_option("--threads", bench_threads, "Worker threads");
    bench->add_option("--output", bench_output, "Output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (app.got_subcommand(fit)) return cmd_fit(fit_data, fit_opts, fit_output);
        if (app.got_subcommand(path_cmd)) return cmd_gic_path(path_data, path_opts, path_output, path_summary);
        if (app.got_subcommand(sim)) {
            bsgs::SimConfig config;
            config.replications = sim_reps;
            config.method = parse_method(sim_opts.method);
            config.selector = selector_of(sim_opts);
            if (sim_opts.method == "gsplicing") {
                if (sim_opts.size < 1) throw bsgs::size_error("--method gsplicing requires --size");
                config.fixed_size = sim_opts.size;
            }
            if (sim_opts.pi_t >= 0) config.threshold_override = sim_opts.pi_t;
            config.threads = sim_threads;
            return cmd_simulate(sim_spec, config, sim_seed, sim_holdout, sim_output, sim_summary, sim_export);
        }
        if (app.got_subcommand(oracle)) return cmd_oracle(oracle_data, oracle_size, oracle_output);
        if (app.got_subcommand(stab))
            return cmd_stability(stab_data, stab_opts, stab_reps, stab_fraction, stab_seed,
                                 stab_threads, stab_output);
        if (app.got_subcommand(bench)) return cmd_bench(bench_sweep, bench_threads, bench_output);
    } catch (const bsgs::input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const bsgs::numeric_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const bsgs::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const bsgs::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    }
    return 0;
}
