#ifndef MWK_SYNTH_HPP
#define MWK_SYNTH_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mwk/dataset.hpp"

namespace mwk {

/// Shape of a synthetic benchmark dataset, e.g. "1000x4-5 +2NF".
struct ConfigSpec {
    std::size_t n_points = 0;
    std::size_t m_informative = 0;
    std::size_t k_clusters = 0;
    std::size_t n_noise = 0;
    std::uint64_t seed = 0;

    void validate() const;
    /// Canonical "{n}x{m}-{k} +{q}NF" form.
    std::string name() const;
};

/// Minimum number of points generated for every cluster.
inline constexpr std::size_t kMinClusterSize = 20;

/**
 * Spherical Gaussian clusters with centers ~ N(0, I), per-cluster variance
 * ~ U[0.5, 1.5], random sizes of at least 20 points, followed by `n_noise`
 * uniform noise columns spanning the informative block's value range.
 * Labels and the informative mask are filled in. Rows are grouped by cluster.
 */
Dataset generate(const ConfigSpec& spec);

/// Cluster sizes: a uniform random composition of n - 20k into k parts, plus 20 each.
std::vector<std::size_t> draw_cluster_sizes(std::size_t n, std::size_t k, std::uint64_t seed);

ConfigSpec parse_config_name(const std::string& name);

/// The twelve benchmark configurations, in table order.
const std::vector<std::string>& table2_config_names();

struct SuiteConfig {
    std::string name;
    std::vector<Dataset> datasets;
};

/// Seed of dataset `index` of configuration `config_index`.
std::uint64_t dataset_seed(std::uint64_t base_seed, std::size_t config_index, std::size_t index) noexcept;

std::vector<SuiteConfig> table2_suite(std::size_t datasets_per_config, std::uint64_t base_seed);

}  // namespace mwk

#endif
