#include "mwk/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "mwk/error.hpp"
#include "mwk/io.hpp"
#include "mwk/metrics.hpp"
#include "mwk/parallel.hpp"
#include "mwk/theory.hpp"

namespace mwk {

namespace {

enum Stream : std::uint64_t { kKmeans = 1, kMwk = 2, kMwkpp = 3 };

std::size_t config_index(const std::string& name) {
    const auto& names = table2_config_names();
    const auto it = std::find(names.begin(), names.end(), name);
    if (it != names.end()) {
        return static_cast<std::size_t>(it - names.begin());
    }
    // Custom configurations get an index past the table.
    return names.size() + std::hash<std::string>{}(name) % 1000003;
}

double mean_ari(const std::vector<ClusteringResult>& runs, const std::vector<int>& labels) {
    double total = 0.0;
    for (const auto& run : runs) {
        total += ari(labels, run.partition.assignment);
    }
    return total / static_cast<double>(runs.size());
}

}  // namespace

MeanStd mean_std(const std::vector<double>& values) {
    MeanStd out;
    if (values.empty()) {
        return out;
    }
    const auto n = static_cast<double>(values.size());
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - out.mean) * (v - out.mean);
        }
        out.std = std::sqrt(ss / (n - 1.0));
    }
    return out;
}

DatasetEvaluation evaluate_dataset(const Dataset& raw, std::size_t k, std::uint64_t seed, const BenchOptions& options) {
    if (!raw.labels || !raw.informative_mask) {
        fail(ErrorKind::input, "benchmark datasets need labels and an informative mask");
    }
    const Dataset data = options.normalize ? normalize_range(raw).data : raw;
    if (!data.informative_mask) {
        fail(ErrorKind::input, "informative mask lost during normalization");
    }
    const std::vector<int>& labels = *data.labels;
    const std::vector<bool>& mask = *data.informative_mask;
    DatasetEvaluation eval;

    if (options.run_kmeans) {
        std::vector<ClusteringResult> runs(options.restarts);
        const std::uint64_t base = derive_seed(seed, kKmeans);
        parallel_for(options.restarts, options.fit.threads, [&](std::size_t r) {
            Rng rng(restart_seed(base, r));
            runs[r] = kmeans_fit(data, k, options.fit, rng);
        });
        eval.kmeans_ari = mean_ari(runs, labels);
    }

    if (options.run_mwk) {
        for (std::size_t g = 0; g < options.grid.size(); ++g) {
            const auto runs = run_restarts(data, k, Exponent(options.grid.values()[g]), options.restarts,
                                           derive_seed(seed, kMwk, g), InitMethod::random, options.fit);
            eval.mwk_ari.push_back(mean_ari(runs, labels));
        }
    }

    if (options.run_mwkpp) {
        std::vector<double> ari_sum(options.grid.size(), 0.0);
        std::vector<ClusteringResult> winners(options.grid.size());
        const WeightStack stack =
            collect_weights(data, k, options.grid, options.restarts, derive_seed(seed, kMwkpp), options.fit, 0,
                            [&](std::size_t g, std::size_t r, const ClusteringResult& run) {
                                ari_sum[g] += ari(labels, run.partition.assignment);
                                if (r == 0 || run.objective < winners[g].objective) {
                                    winners[g] = run;
                                }
                            });
        for (double s : ari_sum) {
            eval.mwkpp_ari.push_back(s / static_cast<double>(options.restarts));
        }

        std::size_t informative = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
        const FeatureRanking ranking = rank_features(median_aggregate(stack), informative);
        eval.selected = ranking.selected;
        eval.feature_recovery = feature_recovery(ranking.selected, mask);
        eval.noise_below_pairs = audit_run(stack, mask).pairs_all_noise_below;

        std::vector<std::size_t> relevant;
        std::vector<std::size_t> noise;
        for (std::size_t v = 0; v < mask.size(); ++v) {
            (mask[v] ? relevant : noise).push_back(v);
        }
        std::size_t hits = 0;
        std::size_t total = 0;
        for (const auto& winner : winners) {
            const Matrix dispersion = dispersion_matrix(data, winner.partition, winner.centroids, winner.p);
            for (std::size_t v : noise) {
                const NoiseVerdict verdict = is_noise_feature(dispersion, v, relevant, winner.p);
                for (bool b : verdict.noise) {
                    hits += b ? 1 : 0;
                    ++total;
                }
            }
        }
        eval.noise_definition_share = total == 0 ? 1.0 : static_cast<double>(hits) / static_cast<double>(total);
    }
    return eval;
}

ConfigReport run_benchmark_config(const std::string& config_name, const BenchOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    ConfigSpec spec = parse_config_name(config_name);
    const std::size_t index = config_index(config_name);
    ConfigReport report;
    report.config = config_name;
    for (std::size_t d = 0; d < options.datasets; ++d) {
        spec.seed = dataset_seed(options.seed, index, d);
        const Dataset data = generate(spec);
        report.per_dataset.push_back(evaluate_dataset(data, spec.k_clusters, spec.seed, options));
    }

    auto collect = [&](auto field) {
        std::vector<double> out;
        for (const auto& e : report.per_dataset) {
            out.push_back(field(e));
        }
        return out;
    };
    // Best exponent: the grid value with the highest mean ARI across datasets.
    auto best_p = [&](auto by_p, MeanStd& best, double& exponent) {
        double best_mean = -2.0;
        for (std::size_t g = 0; g < options.grid.size(); ++g) {
            const MeanStd ms = mean_std(collect([&](const DatasetEvaluation& e) { return by_p(e)[g]; }));
            if (ms.mean > best_mean) {
                best_mean = ms.mean;
                best = ms;
                exponent = options.grid.values()[g];
            }
        }
    };
    auto all_p = [](const std::vector<double>& v) {
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };

    if (options.run_kmeans) {
        report.kmeanspp = mean_std(collect([](const DatasetEvaluation& e) { return e.kmeans_ari; }));
    }
    if (options.run_mwk) {
        report.mwk_all_p = mean_std(collect([&](const DatasetEvaluation& e) { return all_p(e.mwk_ari); }));
        best_p([](const DatasetEvaluation& e) -> const std::vector<double>& { return e.mwk_ari; }, report.mwk_best_p,
               report.mwk_best_exponent);
    }
    if (options.run_mwkpp) {
        report.mwkpp_all_p = mean_std(collect([&](const DatasetEvaluation& e) { return all_p(e.mwkpp_ari); }));
        best_p([](const DatasetEvaluation& e) -> const std::vector<double>& { return e.mwkpp_ari; },
               report.mwkpp_best_p, report.mwkpp_best_exponent);
        report.feature_recovery = mean_std(collect([](const DatasetEvaluation& e) { return e.feature_recovery; }));
        report.noise_below_pairs =
            mean_std(collect([](const DatasetEvaluation& e) { return e.noise_below_pairs; })).mean;
        report.noise_definition_share =
            mean_std(collect([](const DatasetEvaluation& e) { return e.noise_definition_share; })).mean;
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

}  // namespace mwk
