#include "mwk/synth.hpp"

#include <algorithm>
#include <regex>
#include <unordered_set>

#include "mwk/error.hpp"
#include "mwk/rng.hpp"

namespace mwk {

namespace {

constexpr std::uint64_t kSizeStream = 1;
constexpr std::uint64_t kPointStream = 2;

}  // namespace

void ConfigSpec::validate() const {
    if (n_points < 1 || m_informative < 1 || k_clusters < 1) {
        fail(ErrorKind::input, "n, m and k must all be >= 1");
    }
    if (n_points < kMinClusterSize * k_clusters) {
        fail(ErrorKind::input, "n=" + std::to_string(n_points) + " cannot hold " + std::to_string(k_clusters) +
                                   " clusters of at least " + std::to_string(kMinClusterSize) + " points");
    }
}

std::string ConfigSpec::name() const {
    return std::to_string(n_points) + "x" + std::to_string(m_informative) + "-" + std::to_string(k_clusters) + " +" +
           std::to_string(n_noise) + "NF";
}

std::vector<std::size_t> draw_cluster_sizes(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 1 || n < kMinClusterSize * k) {
        fail(ErrorKind::input, "infeasible cluster sizes");
    }
    // Stars and bars: k-1 distinct bar positions among spare + k - 1 slots.
    const std::size_t spare = n - kMinClusterSize * k;
    const std::size_t slots = spare + k - 1;
    Rng rng(derive_seed(seed, kSizeStream));
    std::unordered_set<std::size_t> chosen;
    // Floyd's algorithm for a uniform (k-1)-subset of [0, slots).
    for (std::size_t j = slots - (k - 1); j < slots; ++j) {
        const std::size_t t = rng.index(j + 1);
        if (!chosen.insert(t).second) {
            chosen.insert(j);
        }
    }
    std::vector<std::size_t> bars(chosen.begin(), chosen.end());
    std::sort(bars.begin(), bars.end());
    std::vector<std::size_t> sizes(k);
    std::size_t prev = 0;
    for (std::size_t l = 0; l < k; ++l) {
        const std::size_t end = l + 1 < k ? bars[l] : slots;
        const std::size_t start = l == 0 ? 0 : prev + 1;
        sizes[l] = end - start + kMinClusterSize;
        prev = end;
    }
    return sizes;
}

Dataset generate(const ConfigSpec& spec) {
    spec.validate();
    const std::size_t n = spec.n_points;
    const std::size_t mi = spec.m_informative;
    const std::size_t k = spec.k_clusters;
    const std::size_t m = mi + spec.n_noise;

    Rng rng(derive_seed(spec.seed, kPointStream));
    Matrix centers(k, mi);
    for (double& c : centers.flat()) {
        c = rng.normal();
    }
    std::vector<double> variance(k);
    for (double& s : variance) {
        s = rng.uniform(0.5, 1.5);
    }
    const std::vector<std::size_t> sizes = draw_cluster_sizes(n, k, spec.seed);

    Dataset data;
    data.values = Matrix(n, m);
    std::vector<int> labels(n);
    std::size_t row = 0;
    for (std::size_t l = 0; l < k; ++l) {
        const double sd = std::sqrt(variance[l]);
        for (std::size_t c = 0; c < sizes[l]; ++c, ++row) {
            labels[row] = static_cast<int>(l);
            for (std::size_t v = 0; v < mi; ++v) {
                data.values(row, v) = rng.normal(centers(l, v), sd);
            }
        }
    }

    if (spec.n_noise > 0) {
        double lo = data.values(0, 0);
        double hi = lo;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t v = 0; v < mi; ++v) {
                lo = std::min(lo, data.values(i, v));
                hi = std::max(hi, data.values(i, v));
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t v = mi; v < m; ++v) {
                data.values(i, v) = rng.uniform(lo, hi);
            }
        }
    }

    for (std::size_t v = 0; v < m; ++v) {
        data.feature_names.push_back(v < mi ? "x" + std::to_string(v) : "noise" + std::to_string(v - mi));
    }
    std::vector<bool> mask(m, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(mi), true);
    data.informative_mask = std::move(mask);
    data.labels = std::move(labels);
    return data;
}

ConfigSpec parse_config_name(const std::string& name) {
    static const std::regex pattern(R"(^\s*(\d+)x(\d+)-(\d+)\s*\+\s*(\d+)NF\s*$)");
    std::smatch match;
    if (!std::regex_match(name, match, pattern)) {
        fail(ErrorKind::parse, "configuration name '" + name + "' does not match '{n}x{m}-{k} +{q}NF'");
    }
    ConfigSpec spec;
    try {
        spec.n_points = std::stoull(match[1].str());
        spec.m_informative = std::stoull(match[2].str());
        spec.k_clusters = std::stoull(match[3].str());
        spec.n_noise = std::stoull(match[4].str());
    } catch (const std::exception&) {
        fail(ErrorKind::parse, "configuration name '" + name + "' has an out-of-range number");
    }
    return spec;
}

const std::vector<std::string>& table2_config_names() {
    static const std::vector<std::string> names = {
        "1000x4-3 +2NF",    "1000x4-5 +2NF",    "1000x4-10 +2NF",   "1000x10-3 +5NF",
        "1000x10-5 +5NF",   "1000x10-10 +5NF",  "2000x20-5 +10NF",  "2000x20-10 +10NF",
        "2000x20-20 +10NF", "2000x30-5 +15NF",  "2000x30-10 +15NF", "2000x30-20 +15NF",
    };
    return names;
}

std::uint64_t dataset_seed(std::uint64_t base_seed, std::size_t config_index, std::size_t index) noexcept {
    return derive_seed(base_seed, config_index, index);
}

std::vector<SuiteConfig> table2_suite(std::size_t datasets_per_config, std::uint64_t base_seed) {
    if (datasets_per_config < 1) {
        fail(ErrorKind::input, "datasets per configuration must be >= 1");
    }
    std::vector<SuiteConfig> out;
    const auto& names = table2_config_names();
    for (std::size_t c = 0; c < names.size(); ++c) {
        SuiteConfig config{names[c], {}};
        ConfigSpec spec = parse_config_name(names[c]);
        for (std::size_t d = 0; d < datasets_per_config; ++d) {
            spec.seed = dataset_seed(base_seed, c, d);
            config.datasets.push_back(generate(spec));
        }
        out.push_back(std::move(config));
    }
    return out;
}

}  // namespace mwk
