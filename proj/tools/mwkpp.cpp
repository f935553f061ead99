// Command-line front end: parses flags into an ExperimentConfig and runs it.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mwk/experiment.hpp"

namespace {

void add_common(CLI::App* cmd, mwk::ExperimentConfig& c, std::string& mode, std::string& regularize) {
    cmd->add_option("--seed", c.seed, "64-bit base seed");
    cmd->add_option("--mode", mode, "Centroid update: exact or fast")->check(CLI::IsMember({"exact", "fast"}));
    cmd->add_option("--emit", c.emit, "Output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--output,-o", c.output, "Output file (prefix for cluster, directory for synth)");
    cmd->add_option("--threads", c.threads, "Worker threads; results do not depend on it");
    cmd->add_option("--max-iter", c.max_iter, "Iteration cap per MWK run");
    cmd->add_option("--regularize", regularize, "Add the row-mean dispersion to always (every row) or degenerate (rows with a zero)")
        ->check(CLI::IsMember({"degenerate", "always"}));
}

void add_data(CLI::App* cmd, mwk::ExperimentConfig& c) {
    cmd->add_option("--input,-i", c.input, "CSV dataset");
    cmd->add_option("--label-column", c.label_column, "Name of the label column");
    cmd->add_flag("!--no-normalize", c.normalize, "Skip range normalization");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minkowski weighted k-means++ and weight-stability feature selection"};
    app.require_subcommand(1);
    mwk::ExperimentConfig c;
    std::string mode;
    std::string regularize = "always";

    auto* cluster = app.add_subcommand("cluster", "Cluster a CSV dataset with MWK (best of several restarts)");
    add_data(cluster, c);
    add_common(cluster, c, mode, regularize);
    cluster->add_option("--k", c.k, "Number of clusters")->required();
    cluster->add_option("--p", c.p, "Minkowski exponent (> 1)");
    cluster->add_option("--init", c.init, "mwkpp, kmeanspp, random, or kmeans (plain Lloyd)");
    cluster->add_option("--restarts", c.restarts, "Independent runs; the lowest objective wins");

    auto* select = app.add_subcommand("select", "Rank features with FS-MWK++ or SFS-MWK++");
    add_data(select, c);
    add_common(select, c, mode, regularize);
    select->add_option("--k", c.k, "Number of clusters")->required();
    select->add_option("--r", c.r, "Number of features to select")->required();
    select->add_option("--grid", c.grid, "fine, coarse, or comma-separated exponents");
    select->add_option("--method", c.method, "fs or sfs")->check(CLI::IsMember({"fs", "sfs"}));
    select->add_option("--restarts", c.restarts, "MWK++ runs per exponent");
    select->add_option("--outer", c.outer, "Subsamples drawn by sfs");
    select->add_option("--save-stack", c.save_stack, "Write the retained weight matrices as JSON");

    auto* synth = app.add_subcommand("synth", "Generate synthetic benchmark datasets as CSV");
    add_common(synth, c, mode, regularize);
    synth->add_option("--config", c.config_name, "Configuration such as \"1000x4-3 +2NF\"")->required();
    synth->add_option("--count", c.count, "Number of datasets");

    auto* eval = app.add_subcommand("eval", "Score assignments or a feature selection against ground truth");
    add_data(eval, c);
    add_common(eval, c, mode, regularize);
    eval->add_option("--assignments", c.assignments, "CSV with a 'cluster' column");
    eval->add_option("--selected", c.selected, "Comma-separated selected feature indices");

    auto* audit = app.add_subcommand("audit", "Check weight-stability conditions on a weight stack or given inputs");
    add_data(audit, c);
    add_common(audit, c, mode, regularize);
    audit->add_option("--stack", c.stack, "Weight stack JSON written by select --save-stack");
    audit->add_option("--k", c.k, "Number of clusters for a fresh run");
    audit->add_option("--grid", c.grid, "Exponent grid for a fresh run");
    audit->add_option("--restarts", c.restarts, "MWK++ runs per exponent for a fresh run");
    audit->add_flag("--theorem", c.theorem, "Evaluate the selection condition from gamma, alpha, p and A/L or ratios");
    audit->add_option("--gamma", c.gamma, "Weight margin above 1/m");
    audit->add_option("--alpha", c.alpha, "Proportion of clusters in (0, 1]");
    audit->add_option("--p", c.p, "Exponent");
    audit->add_option("--A", c.capital_a, "Precomputed A(p)");
    audit->add_option("--L", c.capital_l, "Precomputed L(p)");
    audit->add_option("--ratios", c.ratios, "Comma-separated dispersion ratios a_u");
    audit->add_option("--m", c.m, "Number of features, for the margin bound");

    auto* bench = app.add_subcommand("bench", "Run the desk-scale synthetic benchmark suites");
    add_common(bench, c, mode, regularize);
    bench->add_option("--suite", c.suite, "table2, table3 or both");
    bench->add_option("--datasets", c.datasets, "Datasets per configuration");
    bench->add_option("--restarts", c.restarts, "Runs per algorithm and exponent");
    bench->add_option("--grid", c.grid, "fine, coarse, or comma-separated exponents");
    bench->add_option("--configs", c.configs, "Configuration names (default: all twelve)")->delimiter(';');
    bench->add_flag("!--no-normalize", c.normalize, "Skip range normalization");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage_error: " << e.what() << '\n';
        return 64;
    }

    for (auto* sub : app.get_subcommands()) {
        c.command = sub->get_name();
    }
    if (mode.empty()) {
        mode = c.command == "bench" ? "fast" : "exact";
    }
    c.mode = mode == "fast" ? mwk::CenterMode::fast : mwk::CenterMode::exact;
    c.regularization = regularize == "always" ? mwk::Regularization::always : mwk::Regularization::when_degenerate;
    return mwk::run(c, std::cout, std::cerr);
}
