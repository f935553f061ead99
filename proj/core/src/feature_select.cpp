#include "mwk/feature_select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mwk/error.hpp"

namespace mwk {

namespace {

constexpr std::uint64_t kSubsampleStream = 0x5ab5a3b1e5ULL;

void check_r(std::size_t r, std::size_t m) {
    if (r < 1 || r > m) {
        fail(ErrorKind::input, "r must be in [1, m]; got r=" + std::to_string(r) + ", m=" + std::to_string(m));
    }
}

}  // namespace

ExponentGrid::ExponentGrid(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        fail(ErrorKind::input, "exponent grid is empty");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        Exponent check(values_[i]);
        (void)check;
        if (i > 0 && !(values_[i] > values_[i - 1])) {
            fail(ErrorKind::input, "exponent grid must be strictly increasing");
        }
    }
}

ExponentGrid ExponentGrid::fine() {
    std::vector<double> v;
    for (int i = 11; i <= 30; ++i) {
        v.push_back(i / 10.0);
    }
    return ExponentGrid(std::move(v));
}

ExponentGrid ExponentGrid::coarse() {
    std::vector<double> v;
    for (int i = 0; i < 10; ++i) {
        v.push_back(1.1 + 1.9 * i / 9.0);
    }
    v.back() = 3.0;
    return ExponentGrid(std::move(v));
}

ExponentGrid ExponentGrid::parse(const std::string& text) {
    if (text == "fine") {
        return fine();
    }
    if (text == "coarse") {
        return coarse();
    }
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            fail(ErrorKind::parse, "bad exponent '" + item + "' in grid '" + text + "'");
        }
    }
    return ExponentGrid(std::move(v));
}

void WeightStack::append(const WeightStack& other) {
    if (entries.empty()) {
        k = other.k;
        m = other.m;
    } else if (other.k != k || other.m != m) {
        fail(ErrorKind::length, "weight stacks have different shapes");
    }
    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

std::uint64_t grid_seed(std::uint64_t base_seed, std::size_t grid_index, std::size_t sample_id) noexcept {
    return derive_seed(base_seed, grid_index, sample_id);
}

WeightStack collect_weights(const Dataset& data, std::size_t k, const ExponentGrid& grid, std::size_t restarts,
                            std::uint64_t base_seed, const FitOptions& options, std::size_t sample_id,
                            const GridObserver& observer) {
    WeightStack stack;
    stack.k = k;
    stack.m = data.m();
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const Exponent p(grid.values()[g]);
        RestartObserver forward;
        if (observer) {
            forward = [&](std::size_t r, const ClusteringResult& res) { observer(g, r, res); };
        }
        ClusteringResult best = restart_best(data, k, p, restarts, grid_seed(base_seed, g, sample_id), options, forward);
        stack.entries.push_back({p.value(), std::move(best.weights), best.objective, sample_id});
    }
    return stack;
}

std::vector<double> median_aggregate(const WeightStack& stack) {
    if (stack.entries.empty()) {
        fail(ErrorKind::input, "cannot aggregate an empty weight stack");
    }
    std::vector<double> scores(stack.m);
    std::vector<double> column;
    column.reserve(stack.entries.size() * stack.k);
    for (std::size_t v = 0; v < stack.m; ++v) {
        column.clear();
        for (const auto& entry : stack.entries) {
            for (std::size_t l = 0; l < entry.weights.k(); ++l) {
                column.push_back(entry.weights.w(l, v));
            }
        }
        scores[v] = median_inplace(column);
    }
    return scores;
}

FeatureRanking rank_features(std::vector<double> scores, std::size_t r) {
    check_r(r, scores.size());
    FeatureRanking out;
    out.order.resize(scores.size());
    std::iota(out.order.begin(), out.order.end(), std::size_t{0});
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    out.selected.assign(out.order.begin(), out.order.begin() + static_cast<std::ptrdiff_t>(r));
    out.scores = std::move(scores);
    return out;
}

FeatureRanking fs_mwkpp(const Dataset& data, std::size_t k, std::size_t r, const ExponentGrid& grid,
                        std::size_t restarts, std::uint64_t base_seed, const FitOptions& options,
                        WeightStack* stack_out) {
    check_r(r, data.m());
    WeightStack stack = collect_weights(data, k, grid, restarts, base_seed, options);
    FeatureRanking ranking = rank_features(median_aggregate(stack), r);
    if (stack_out) {
        *stack_out = std::move(stack);
    }
    return ranking;
}

Subsample subsample(const Dataset& data, std::size_t size, Rng& rng) {
    if (size < 1) {
        fail(ErrorKind::input, "subsample size must be >= 1");
    }
    Subsample out;
    if (size > data.n()) {
        size = data.n();
        out.clamped = true;
    }
    std::vector<std::size_t> order(data.n());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < size; ++i) {
        std::swap(order[i], order[i + rng.index(data.n() - i)]);
    }
    order.resize(size);
    out.data = select_rows(data, order);
    out.rows = std::move(order);
    return out;
}

std::size_t sample_size(std::size_t n, std::size_t k) {
    const auto raw = static_cast<std::size_t>(std::llround(static_cast<double>(k) * std::sqrt(static_cast<double>(n))));
    return std::clamp(raw, k, n);
}

FeatureRanking sfs_mwkpp(const Dataset& data, std::size_t k, std::size_t r, const ExponentGrid& grid,
                         const SfsOptions& sfs, std::uint64_t base_seed, const FitOptions& options,
                         WeightStack* stack_out) {
    check_r(r, data.m());
    if (sfs.outer < 1) {
        fail(ErrorKind::input, "outer iterations must be >= 1");
    }
    if (k < 1 || k > data.n()) {
        fail(ErrorKind::input, "k must be in [1, n]");
    }
    const std::size_t ns = sample_size(data.n(), k);
    WeightStack stack;
    for (std::size_t it = 0; it < sfs.outer; ++it) {
        Rng rng(derive_seed(base_seed, kSubsampleStream, it));
        const Subsample sample = subsample(data, ns, rng);
        stack.append(collect_weights(sample.data, k, grid, sfs.restarts, base_seed, options, it));
    }
    FeatureRanking ranking = rank_features(median_aggregate(stack), r);
    if (stack_out) {
        *stack_out = std::move(stack);
    }
    return ranking;
}

}  // namespace mwk
