#ifndef MWK_BENCH_HPP
#define MWK_BENCH_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mwk/cluster.hpp"
#include "mwk/feature_select.hpp"
#include "mwk/synth.hpp"

/**
 * @file bench.hpp
 * @brief Desk-scale synthetic benchmark: clustering recovery (k-means++, MWK,
 * MWK++) and feature recovery (FS-MWK++) on generated configurations.
 */

namespace mwk {

struct BenchOptions {
    std::size_t datasets = 10;
    std::size_t restarts = 25;
    ExponentGrid grid = ExponentGrid::coarse();
    std::uint64_t seed = 0;
    FitOptions fit{CenterMode::fast, 100, 1};
    bool normalize = true;
    bool run_kmeans = true;
    bool run_mwk = true;
    bool run_mwkpp = true;
};

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

/// Sample mean and standard deviation (n - 1 denominator; 0 for a single value).
MeanStd mean_std(const std::vector<double>& values);

/// Everything measured on one dataset.
struct DatasetEvaluation {
    double kmeans_ari = 0.0;
    /// Mean ARI over restarts, one entry per grid exponent.
    std::vector<double> mwk_ari;
    std::vector<double> mwkpp_ari;
    /// FS-MWK++ with r = #informative, built from the same MWK++ runs.
    double feature_recovery = 0.0;
    std::vector<std::size_t> selected;
    /// Share of (p, l) pairs of winning runs where every noise feature has weight < 1/m.
    double noise_below_pairs = 0.0;
    /// Share of (p, l, noise feature) triples of winning runs that meet the noise-feature definition.
    double noise_definition_share = 0.0;
};

/// Runs the enabled methods on one dataset (with labels and mask) after optional range normalization.
DatasetEvaluation evaluate_dataset(const Dataset& raw, std::size_t k, std::uint64_t seed, const BenchOptions& options);

struct ConfigReport {
    std::string config;
    MeanStd kmeanspp;
    MeanStd mwk_all_p;
    MeanStd mwk_best_p;
    double mwk_best_exponent = 0.0;
    MeanStd mwkpp_all_p;
    MeanStd mwkpp_best_p;
    double mwkpp_best_exponent = 0.0;
    MeanStd feature_recovery;
    double noise_below_pairs = 0.0;
    double noise_definition_share = 0.0;
    double seconds = 0.0;
    std::vector<DatasetEvaluation> per_dataset;
};

/// Generates `options.datasets` datasets of the named configuration and evaluates them.
/// Dataset seeds come from dataset_seed(options.seed, index of the name in the table, d).
ConfigReport run_benchmark_config(const std::string& config_name, const BenchOptions& options);

}  // namespace mwk

#endif
