#include "mwk/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "mwk/bench.hpp"
#include "mwk/cluster.hpp"
#include "mwk/error.hpp"
#include "mwk/feature_select.hpp"
#include "mwk/io.hpp"
#include "mwk/metrics.hpp"
#include "mwk/synth.hpp"
#include "mwk/theory.hpp"

namespace mwk {

using json = nlohmann::ordered_json;

namespace {

const char* mode_name(CenterMode mode) {
    return mode == CenterMode::exact ? "exact" : "fast";
}

ExponentGrid resolve_grid(const ExperimentConfig& c) {
    if (!c.grid.empty()) {
        return ExponentGrid::parse(c.grid);
    }
    const bool coarse = c.command == "bench" || c.method == "sfs";
    return coarse ? ExponentGrid::coarse() : ExponentGrid::fine();
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["command"] = c.command;
    j["input"] = c.input;
    j["output"] = c.output;
    j["label_column"] = c.label_column;
    j["normalize"] = c.normalize;
    j["k"] = c.k;
    j["r"] = c.r;
    j["p"] = c.p;
    j["grid"] = resolve_grid(c).values();
    j["init"] = c.init;
    j["method"] = c.method;
    j["restarts"] = c.restarts;
    j["outer"] = c.outer;
    j["mode"] = mode_name(c.mode);
    j["max_iter"] = c.max_iter;
    j["regularize"] = c.regularization == Regularization::always ? "always" : "degenerate";
    j["seed"] = c.seed;
    j["emit"] = c.emit;
    j["config_name"] = c.config_name;
    j["count"] = c.count;
    j["assignments"] = c.assignments;
    j["selected"] = c.selected;
    j["stack"] = c.stack;
    j["theorem"] = c.theorem;
    j["gamma"] = c.gamma;
    j["alpha"] = c.alpha;
    j["A"] = c.capital_a ? json(*c.capital_a) : json(nullptr);
    j["L"] = c.capital_l ? json(*c.capital_l) : json(nullptr);
    j["ratios"] = c.ratios;
    j["m"] = c.m;
    j["suite"] = c.suite;
    j["configs"] = c.configs;
    j["datasets"] = c.datasets;
    return j;
}

json to_json(const Matrix& mat) {
    json rows = json::array();
    for (std::size_t r = 0; r < mat.rows(); ++r) {
        const auto row = mat.row(r);
        rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return rows;
}

json to_json(const MeanStd& ms) {
    return json{{"mean", ms.mean}, {"std", ms.std}};
}

json to_json(const WeightStack& stack) {
    json entries = json::array();
    for (const auto& e : stack.entries) {
        entries.push_back({{"p", e.p}, {"sample_id", e.sample_id}, {"objective", e.objective},
                           {"weights", to_json(e.weights.w)}});
    }
    return json{{"k", stack.k}, {"m", stack.m}, {"entries", entries}};
}

WeightStack stack_from_json(const json& j) {
    WeightStack stack;
    try {
        stack.k = j.at("k").get<std::size_t>();
        stack.m = j.at("m").get<std::size_t>();
        for (const auto& e : j.at("entries")) {
            WeightStackEntry entry;
            entry.p = e.at("p").get<double>();
            entry.sample_id = e.at("sample_id").get<std::size_t>();
            entry.objective = e.at("objective").get<double>();
            const auto rows = e.at("weights").get<std::vector<std::vector<double>>>();
            if (rows.size() != stack.k) {
                fail(ErrorKind::parse, "weight stack entry has " + std::to_string(rows.size()) + " rows, expected k");
            }
            entry.weights.w = Matrix(stack.k, stack.m);
            for (std::size_t l = 0; l < rows.size(); ++l) {
                if (rows[l].size() != stack.m) {
                    fail(ErrorKind::parse, "weight stack row width differs from m");
                }
                std::copy(rows[l].begin(), rows[l].end(), entry.weights.w.row(l).begin());
            }
            stack.entries.push_back(std::move(entry));
        }
    } catch (const json::exception& ex) {
        fail(ErrorKind::parse, std::string("malformed weight stack: ") + ex.what());
    }
    return stack;
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoull(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            fail(ErrorKind::parse, "bad index '" + item + "' in list '" + text + "'");
        }
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            fail(ErrorKind::parse, "bad number '" + item + "' in list '" + text + "'");
        }
    }
    return out;
}

struct Loaded {
    Dataset data;
    std::vector<std::string> warnings;
};

Loaded load_input(const ExperimentConfig& c) {
    Loaded out;
    CsvOptions options;
    options.label_column = c.label_column;
    Dataset raw = load_csv(c.input, options);
    if (!c.normalize) {
        out.data = std::move(raw);
        return out;
    }
    NormalizeResult norm = normalize_range(raw);
    out.data = std::move(norm.data);
    out.warnings = std::move(norm.warnings);
    return out;
}

FitOptions fit_options(const ExperimentConfig& c) {
    return FitOptions{c.mode, c.max_iter, c.threads, c.regularization};
}

// Writes `text` to the configured output file, or to `out` when none is set.
void emit(const ExperimentConfig& c, const std::string& text, std::ostream& out) {
    if (c.output.empty()) {
        out << text;
        return;
    }
    std::ofstream file(c.output);
    if (!file) {
        fail(ErrorKind::io, "cannot write '" + c.output + "'");
    }
    file << text;
}

std::string envelope(const ExperimentConfig& c, json results, const std::vector<std::string>& warnings,
                     double millis) {
    json j;
    j["config"] = to_json(c);
    j["seed"] = c.seed;
    j["results"] = std::move(results);
    j["warnings"] = warnings;
    j["timing_ms"] = millis;
    return j.dump(2) + "\n";
}

class Stopwatch {
public:
    double millis() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void cmd_cluster(const ExperimentConfig& c, std::ostream& out) {
    Stopwatch watch;
    Loaded in = load_input(c);
    const Dataset& data = in.data;
    const Exponent p(c.p);
    const FitOptions fit = fit_options(c);

    ClusteringResult best;
    if (c.init == "mwkpp") {
        best = restart_best(data, c.k, p, c.restarts, c.seed, fit);
    } else {
        std::vector<ClusteringResult> runs(c.restarts);
        parallel_for(c.restarts, c.threads, [&](std::size_t r) {
            Rng rng(restart_seed(c.seed, r));
            if (c.init == "kmeans") {
                runs[r] = kmeans_fit(data, c.k, fit, rng);
            } else {
                runs[r] = mwk_fit(data, c.k, p, c.init == "random" ? InitMethod::random : InitMethod::kmeanspp, fit, rng);
            }
        });
        std::size_t arg = 0;
        for (std::size_t r = 1; r < runs.size(); ++r) {
            if (runs[r].objective < runs[arg].objective) {
                arg = r;
            }
        }
        best = std::move(runs[arg]);
    }

    json results;
    results["n"] = data.n();
    results["m"] = data.m();
    results["k"] = c.k;
    results["p"] = best.p.value();
    results["objective"] = best.objective;
    results["iterations"] = best.iterations;
    results["converged"] = best.converged;
    results["run_seed"] = best.seed;
    results["feature_names"] = data.feature_names;
    results["cluster_sizes"] = best.partition.cluster_sizes;
    results["centroids"] = to_json(best.centroids.z);
    results["weights"] = to_json(best.weights.w);
    results["notes"] = best.notes;
    if (data.labels) {
        results["ari"] = ari(*data.labels, best.partition.assignment);
        results["entropy"] = cluster_entropy(best.partition.assignment, *data.labels);
    }

    std::ostringstream csv;
    csv << "index,cluster\n";
    for (std::size_t i = 0; i < best.partition.assignment.size(); ++i) {
        csv << i << ',' << best.partition.assignment[i] << '\n';
    }
    const std::string summary = envelope(c, results, in.warnings, watch.millis());
    if (!c.output.empty()) {
        std::ofstream a(c.output + ".assignments.csv");
        std::ofstream s(c.output + ".json");
        if (!a || !s) {
            fail(ErrorKind::io, "cannot write outputs with prefix '" + c.output + "'");
        }
        a << csv.str();
        s << summary;
        return;
    }
    out << (c.emit == "csv" ? csv.str() : summary);
}

void cmd_select(const ExperimentConfig& c, std::ostream& out) {
    Stopwatch watch;
    Loaded in = load_input(c);
    const Dataset& data = in.data;
    const ExponentGrid grid = resolve_grid(c);
    const FitOptions fit = fit_options(c);

    WeightStack stack;
    FeatureRanking ranking;
    json results;
    if (c.method == "sfs") {
        ranking = sfs_mwkpp(data, c.k, c.r, grid, SfsOptions{c.outer, c.restarts}, c.seed, fit, &stack);
        results["sample_size"] = sample_size(data.n(), c.k);
    } else {
        ranking = fs_mwkpp(data, c.k, c.r, grid, c.restarts, c.seed, fit, &stack);
    }
    results["method"] = c.method == "sfs" ? "SFS-MWK++" : "FS-MWK++";
    results["grid"] = grid.values();
    results["feature_names"] = data.feature_names;
    results["scores"] = ranking.scores;
    results["order"] = ranking.order;
    results["selected"] = ranking.selected;
    std::vector<std::string> names;
    for (std::size_t v : ranking.selected) {
        names.push_back(data.feature_names[v]);
    }
    results["selected_names"] = names;
    if (data.informative_mask && std::count(data.informative_mask->begin(), data.informative_mask->end(), true) ==
                                     static_cast<std::ptrdiff_t>(c.r)) {
        results["feature_recovery"] = feature_recovery(ranking.selected, *data.informative_mask);
    }
    if (!c.save_stack.empty()) {
        std::ofstream s(c.save_stack);
        if (!s) {
            fail(ErrorKind::io, "cannot write '" + c.save_stack + "'");
        }
        s << to_json(stack).dump() << '\n';
    }

    if (c.emit == "csv") {
        std::ostringstream csv;
        csv << "rank,index,name,score,selected\n";
        for (std::size_t i = 0; i < ranking.order.size(); ++i) {
            const std::size_t v = ranking.order[i];
            csv << i + 1 << ',' << v << ',' << data.feature_names[v] << ',' << format_double(ranking.scores[v]) << ','
                << (i < c.r ? 1 : 0) << '\n';
        }
        emit(c, csv.str(), out);
        return;
    }
    emit(c, envelope(c, results, in.warnings, watch.millis()), out);
}

std::string sanitize(const std::string& name) {
    std::string s;
    for (char ch : name) {
        if (ch == ' ') {
            continue;
        }
        s.push_back(ch == '+' ? '_' : ch);
    }
    return s;
}

void cmd_synth(const ExperimentConfig& c, std::ostream& out) {
    Stopwatch watch;
    ConfigSpec spec = parse_config_name(c.config_name);
    const auto& names = table2_config_names();
    const auto it = std::find(names.begin(), names.end(), spec.name());
    const std::size_t index = it == names.end() ? names.size() : static_cast<std::size_t>(it - names.begin());
    const std::filesystem::path dir = c.output.empty() ? std::filesystem::path(".") : std::filesystem::path(c.output);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    json files = json::array();
    for (std::size_t d = 0; d < c.count; ++d) {
        spec.seed = dataset_seed(c.seed, index, d);
        const Dataset data = generate(spec);
        const auto path = dir / (sanitize(spec.name()) + "_" + std::to_string(d) + ".csv");
        write_csv(data, path);
        files.push_back({{"path", path.string()}, {"seed", spec.seed}});
    }
    json results;
    results["config"] = spec.name();
    results["files"] = files;
    out << envelope(c, results, {}, watch.millis());
}

std::vector<int> load_assignments(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::io, "cannot open '" + path + "'");
    }
    CsvOptions options;
    options.label_column = "\x01";  // no label column
    const Dataset table = read_csv(in, options);
    std::size_t col = table.m() - 1;
    for (std::size_t v = 0; v < table.m(); ++v) {
        if (table.feature_names[v] == "cluster") {
            col = v;
        }
    }
    std::vector<int> out(table.n());
    for (std::size_t i = 0; i < table.n(); ++i) {
        const double x = table.values(i, col);
        if (x != std::floor(x)) {
            fail(ErrorKind::parse, "cluster id at row " + std::to_string(i + 1) + " is not an integer");
        }
        out[i] = static_cast<int>(x);
    }
    return out;
}

void cmd_eval(const ExperimentConfig& c, std::ostream& out) {
    Stopwatch watch;
    CsvOptions options;
    options.label_column = c.label_column;
    const Dataset data = load_csv(c.input, options);
    json results;
    if (!c.assignments.empty()) {
        if (!data.labels) {
            fail(ErrorKind::input, "'" + c.input + "' has no '" + c.label_column + "' column");
        }
        const std::vector<int> assignment = load_assignments(c.assignments);
        if (assignment.size() != data.n()) {
            fail(ErrorKind::input, "assignment file has " + std::to_string(assignment.size()) + " rows, dataset has " +
                                       std::to_string(data.n()));
        }
        results["ari"] = ari(*data.labels, assignment);
        results["entropy"] = cluster_entropy(assignment, *data.labels);
    }
    if (!c.selected.empty()) {
        if (!data.informative_mask) {
            fail(ErrorKind::input, "'" + c.input + "' has no informative mask row");
        }
        const auto selected = parse_index_list(c.selected);
        results["feature_recovery"] = feature_recovery(selected, *data.informative_mask);
    }
    if (results.empty()) {
        fail(ErrorKind::input, "eval needs --assignments and/or --selected");
    }
    if (c.emit == "csv") {
        std::ostringstream csv;
        csv << "metric,value\n";
        for (const auto& [key, value] : results.items()) {
            csv << key << ',' << format_double(value.get<double>()) << '\n';
        }
        emit(c, csv.str(), out);
        return;
    }
    emit(c, envelope(c, results, {}, watch.millis()), out);
}

json to_json(const AuditReport& report) {
    json pairs = json::array();
    for (const auto& pair : report.pairs) {
        pairs.push_back({{"p", pair.p},
                         {"sample_id", pair.sample_id},
                         {"cluster", pair.cluster},
                         {"noise_below_fraction", pair.noise_below_fraction},
                         {"all_noise_below", pair.all_noise_below},
                         {"some_feature_above", pair.some_feature_above}});
    }
    return json{{"m", report.m},
                {"pairs_all_noise_below", report.pairs_all_noise_below},
                {"pairs_some_above", report.pairs_some_above},
                {"margins", report.margins},
                {"pairs", pairs}};
}

void cmd_audit(const ExperimentConfig& c, std::ostream& out) {
    Stopwatch watch;
    json results;
    std::vector<std::string> warnings;
    if (c.theorem) {
        const Exponent p(c.p);
        double A = 0.0;
        double L = 0.0;
        if (!c.ratios.empty()) {
            const RatioProfile profile{parse_double_list(c.ratios), p};
            for (double a : profile.ratios) {
                if (!(a > 0.0)) {
                    fail(ErrorKind::input, "ratios must be positive");
                }
            }
            A = capital_A(profile);
            L = capital_L(profile);
        } else {
            if (!c.capital_a || !c.capital_l) {
                fail(ErrorKind::input, "theorem audit needs --ratios or both --A and --L");
            }
            A = *c.capital_a;
            L = *c.capital_l;
        }
        const TheoremCheck check = theorem_condition(TheoremInputs{c.gamma, c.alpha, p, A, L, c.m});
        results["A"] = A;
        results["L"] = L;
        results["weight"] = 1.0 / A;
        results["value"] = check.unbounded ? json("inf") : json(check.value);
        results["threshold"] = check.threshold;
        results["satisfied"] = check.satisfied;
        results["unbounded"] = check.unbounded;
        if (c.m > 0) {
            results["max_A_for_margin"] = max_A_for_margin(c.m, c.gamma);
        }
    } else {
        Loaded in = load_input(c);
        warnings = in.warnings;
        if (!in.data.informative_mask) {
            fail(ErrorKind::input, "audit needs an informative mask row in '" + c.input + "'");
        }
        WeightStack stack;
        if (!c.stack.empty()) {
            std::ifstream s(c.stack);
            if (!s) {
                fail(ErrorKind::io, "cannot open '" + c.stack + "'");
            }
            json j;
            try {
                s >> j;
            } catch (const json::exception& ex) {
                fail(ErrorKind::parse, std::string("weight stack is not JSON: ") + ex.what());
            }
            stack = stack_from_json(j);
        } else {
            stack = collect_weights(in.data, c.k, resolve_grid(c), c.restarts, c.seed, fit_options(c));
        }
        results = to_json(audit_run(stack, *in.data.informative_mask));
    }
    emit(c, envelope(c, results, warnings, watch.millis()), out);
}

void cmd_bench(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
    Stopwatch watch;
    BenchOptions options;
    options.datasets = c.datasets;
    options.restarts = c.restarts;
    options.grid = resolve_grid(c);
    options.seed = c.seed;
    options.fit = fit_options(c);
    options.normalize = c.normalize;
    const bool table2 = c.suite != "table3";
    options.run_kmeans = table2;
    options.run_mwk = table2;
    options.run_mwkpp = true;

    const std::vector<std::string> configs = c.configs.empty() ? table2_config_names() : c.configs;
    json rows = json::array();
    std::ostringstream csv;
    csv << "config";
    if (table2) {
        csv << ",kmeanspp_mean,kmeanspp_std,mwk_all_mean,mwk_all_std,mwk_best_mean,mwk_best_std,mwk_best_p"
               ",mwkpp_all_mean,mwkpp_all_std,mwkpp_best_mean,mwkpp_best_std,mwkpp_best_p";
    }
    if (c.suite != "table2") {
        csv << ",fs_recovery_mean,fs_recovery_std";
    }
    csv << ",seconds\n";
    for (const auto& name : configs) {
        const ConfigReport report = run_benchmark_config(name, options);
        err << "bench: " << name << " done in " << report.seconds << " s\n";
        json row;
        row["config"] = name;
        csv << '"' << name << '"';
        if (table2) {
            row["kmeanspp"] = to_json(report.kmeanspp);
            row["mwk_all_p"] = to_json(report.mwk_all_p);
            row["mwk_best_p"] = to_json(report.mwk_best_p);
            row["mwk_best_exponent"] = report.mwk_best_exponent;
            row["mwkpp_all_p"] = to_json(report.mwkpp_all_p);
            row["mwkpp_best_p"] = to_json(report.mwkpp_best_p);
            row["mwkpp_best_exponent"] = report.mwkpp_best_exponent;
            for (const MeanStd* ms : {&report.kmeanspp, &report.mwk_all_p, &report.mwk_best_p}) {
                csv << ',' << format_double(ms->mean) << ',' << format_double(ms->std);
            }
            csv << ',' << format_double(report.mwk_best_exponent);
            for (const MeanStd* ms : {&report.mwkpp_all_p, &report.mwkpp_best_p}) {
                csv << ',' << format_double(ms->mean) << ',' << format_double(ms->std);
            }
            csv << ',' << format_double(report.mwkpp_best_exponent);
        }
        if (c.suite != "table2") {
            row["feature_recovery"] = to_json(report.feature_recovery);
            row["noise_below_pairs"] = report.noise_below_pairs;
            csv << ',' << format_double(report.feature_recovery.mean) << ','
                << format_double(report.feature_recovery.std);
        }
        row["seconds"] = report.seconds;
        csv << ',' << format_double(report.seconds) << '\n';
        rows.push_back(row);
    }
    if (c.emit == "csv") {
        emit(c, csv.str(), out);
        return;
    }
    emit(c, envelope(c, json{{"suite", c.suite}, {"rows", rows}}, {}, watch.millis()), out);
}

}  // namespace

void ExperimentConfig::validate() const {
    static const std::vector<std::string> commands = {"cluster", "select", "synth", "eval", "audit", "bench"};
    if (std::find(commands.begin(), commands.end(), command) == commands.end()) {
        fail(ErrorKind::input, "unknown command '" + command + "'");
    }
    if (emit != "json" && emit != "csv") {
        fail(ErrorKind::input, "--emit must be json or csv");
    }
    auto need_input = [&] {
        if (input.empty()) {
            fail(ErrorKind::input, command + " needs --input");
        }
    };
    auto need_k = [&] {
        if (k < 1) {
            fail(ErrorKind::input, command + " needs --k >= 1");
        }
    };
    if (restarts < 1) {
        fail(ErrorKind::input, "--restarts must be >= 1");
    }
    if (max_iter < 1) {
        fail(ErrorKind::input, "--max-iter must be >= 1");
    }
    if (!grid.empty()) {
        (void)ExponentGrid::parse(grid);
    }
    if (command == "cluster") {
        need_input();
        need_k();
        Exponent check(p);
        (void)check;
        if (init != "mwkpp" && init != "kmeanspp" && init != "random" && init != "kmeans") {
            fail(ErrorKind::input, "--init must be mwkpp, kmeanspp, random or kmeans");
        }
    } else if (command == "select") {
        need_input();
        need_k();
        if (r < 1) {
            fail(ErrorKind::input, "select needs --r >= 1");
        }
        if (method != "fs" && method != "sfs") {
            fail(ErrorKind::input, "--method must be fs or sfs");
        }
        if (outer < 1) {
            fail(ErrorKind::input, "--outer must be >= 1");
        }
    } else if (command == "synth") {
        if (config_name.empty()) {
            fail(ErrorKind::input, "synth needs --config");
        }
        if (count < 1) {
            fail(ErrorKind::input, "--count must be >= 1");
        }
    } else if (command == "eval") {
        need_input();
    } else if (command == "audit") {
        if (!theorem) {
            need_input();
            if (stack.empty()) {
                need_k();
            }
        }
    } else if (command == "bench") {
        if (suite != "table2" && suite != "table3" && suite != "both") {
            fail(ErrorKind::input, "--suite must be table2, table3 or both");
        }
        if (datasets < 1) {
            fail(ErrorKind::input, "--datasets must be >= 1");
        }
    }
}

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
    try {
        config.validate();
        if (config.command == "cluster") {
            cmd_cluster(config, out);
        } else if (config.command == "select") {
            cmd_select(config, out);
        } else if (config.command == "synth") {
            cmd_synth(config, out);
        } else if (config.command == "eval") {
            cmd_eval(config, out);
        } else if (config.command == "audit") {
            cmd_audit(config, out);
        } else {
            cmd_bench(config, out, err);
        }
    } catch (const Error& e) {
        err << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "internal_error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

}  // namespace mwk
