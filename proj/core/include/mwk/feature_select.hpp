#ifndef MWK_FEATURE_SELECT_HPP
#define MWK_FEATURE_SELECT_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mwk/cluster.hpp"

/**
 * @file feature_select.hpp
 * @brief Feature selection by weight stability across Minkowski exponents.
 *
 * For every exponent of a grid the best of several MWK++ runs is kept; the
 * feature score is the median of that feature's weight over every retained
 * (exponent, cluster) pair. FS-MWK++ does this once on the full data;
 * SFS-MWK++ repeats it on uniform subsamples of size round(k sqrt(n)).
 */

namespace mwk {

/// Strictly increasing list of exponents, all > 1.
class ExponentGrid {
public:
    explicit ExponentGrid(std::vector<double> values);

    /// 1.1, 1.2, ..., 3.0 (20 values).
    static ExponentGrid fine();
    /// 10 equally spaced values from 1.1 to 3.0 inclusive.
    static ExponentGrid coarse();
    /// "fine", "coarse", or a comma-separated list such as "1.1,1.5,2".
    static ExponentGrid parse(const std::string& text);

    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    std::vector<double> values_;
};

struct WeightStackEntry {
    double p = 0.0;
    WeightMatrix weights;
    double objective = 0.0;
    std::size_t sample_id = 0;
};

struct WeightStack {
    std::vector<WeightStackEntry> entries;
    std::size_t k = 0;
    std::size_t m = 0;

    void append(const WeightStack& other);
};

struct FeatureRanking {
    /// Median weight per feature.
    std::vector<double> scores;
    /// Features by descending score, lower index first on ties.
    std::vector<std::size_t> order;
    /// First r entries of `order`.
    std::vector<std::size_t> selected;
};

/// Seed used for grid point `grid_index` of sample `sample_id`.
std::uint64_t grid_seed(std::uint64_t base_seed, std::size_t grid_index, std::size_t sample_id) noexcept;

using GridObserver = std::function<void(std::size_t grid_index, std::size_t restart, const ClusteringResult&)>;

/// One restart_best per exponent; keeps each winner's weight matrix.
WeightStack collect_weights(const Dataset& data, std::size_t k, const ExponentGrid& grid, std::size_t restarts,
                            std::uint64_t base_seed, const FitOptions& options, std::size_t sample_id = 0,
                            const GridObserver& observer = {});

/// Per-feature median over all rows of all stored matrices.
std::vector<double> median_aggregate(const WeightStack& stack);

FeatureRanking rank_features(std::vector<double> scores, std::size_t r);

FeatureRanking fs_mwkpp(const Dataset& data, std::size_t k, std::size_t r, const ExponentGrid& grid,
                        std::size_t restarts, std::uint64_t base_seed, const FitOptions& options,
                        WeightStack* stack_out = nullptr);

struct Subsample {
    Dataset data;
    std::vector<std::size_t> rows;
    /// True when the requested size exceeded n and was clamped.
    bool clamped = false;
};

/// Uniform sample of `size` distinct rows.
Subsample subsample(const Dataset& data, std::size_t size, Rng& rng);

/// round(k * sqrt(n)) clamped to [k, n].
std::size_t sample_size(std::size_t n, std::size_t k);

struct SfsOptions {
    std::size_t outer = 25;
    std::size_t restarts = 25;
};

FeatureRanking sfs_mwkpp(const Dataset& data, std::size_t k, std::size_t r, const ExponentGrid& grid,
                         const SfsOptions& sfs, std::uint64_t base_seed, const FitOptions& options,
                         WeightStack* stack_out = nullptr);

}  // namespace mwk

#endif
