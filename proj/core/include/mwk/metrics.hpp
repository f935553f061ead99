#ifndef MWK_METRICS_HPP
#define MWK_METRICS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace mwk {

/// Counts of (predicted cluster, true class) pairs with compacted label ids.
struct ContingencyTable {
    std::vector<std::vector<std::size_t>> counts;  // [pred][true]
    std::vector<std::size_t> row_sums;
    std::vector<std::size_t> col_sums;
    std::size_t n = 0;

    static ContingencyTable build(std::span<const int> labels_true, std::span<const int> labels_pred);
};

/// Hubert-Arabie adjusted Rand index. 1 for identical partitions up to relabeling.
double ari(std::span<const int> labels_true, std::span<const int> labels_pred);

/// Size-weighted mean over clusters of the base-2 entropy of true classes inside each cluster.
double cluster_entropy(std::span<const int> assignment, std::span<const int> labels_true);

/// (#informative selected + #noise not selected) / m. Requires |selected| == #informative.
double feature_recovery(std::span<const std::size_t> selected, const std::vector<bool>& informative_mask);

}  // namespace mwk

#endif
