#include "mwk/metrics.hpp"

#include <cmath>
#include <map>
#include <string>

#include "mwk/error.hpp"

namespace mwk {

namespace {

std::vector<std::size_t> compact(std::span<const int> labels, std::size_t& count) {
    std::map<int, std::size_t> ids;
    std::vector<std::size_t> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = ids.try_emplace(labels[i], ids.size());
        out[i] = it->second;
    }
    count = ids.size();
    return out;
}

double choose2(std::size_t x) {
    const auto d = static_cast<double>(x);
    return 0.5 * d * (d - 1.0);
}

}  // namespace

ContingencyTable ContingencyTable::build(std::span<const int> labels_true, std::span<const int> labels_pred) {
    if (labels_true.size() != labels_pred.size()) {
        fail(ErrorKind::input, "label vectors have lengths " + std::to_string(labels_true.size()) + " and " +
                                   std::to_string(labels_pred.size()));
    }
    std::size_t n_true = 0;
    std::size_t n_pred = 0;
    const auto t = compact(labels_true, n_true);
    const auto p = compact(labels_pred, n_pred);
    ContingencyTable table;
    table.n = labels_true.size();
    table.counts.assign(n_pred, std::vector<std::size_t>(n_true, 0));
    table.row_sums.assign(n_pred, 0);
    table.col_sums.assign(n_true, 0);
    for (std::size_t i = 0; i < table.n; ++i) {
        ++table.counts[p[i]][t[i]];
        ++table.row_sums[p[i]];
        ++table.col_sums[t[i]];
    }
    return table;
}

double ari(std::span<const int> labels_true, std::span<const int> labels_pred) {
    const ContingencyTable table = ContingencyTable::build(labels_true, labels_pred);
    if (table.n < 2) {
        fail(ErrorKind::input, "ARI needs at least two points");
    }
    double index = 0.0;
    for (const auto& row : table.counts) {
        for (std::size_t c : row) {
            index += choose2(c);
        }
    }
    double sum_a = 0.0;
    for (std::size_t a : table.row_sums) {
        sum_a += choose2(a);
    }
    double sum_b = 0.0;
    for (std::size_t b : table.col_sums) {
        sum_b += choose2(b);
    }
    // Scaled by 2 C(n,2) so small instances stay in exact integer arithmetic.
    const double pairs = choose2(table.n);
    const double numer = 2.0 * index * pairs - 2.0 * sum_a * sum_b;
    const double denom = (sum_a + sum_b) * pairs - 2.0 * sum_a * sum_b;
    if (denom == 0.0) {
        // Both sides all-singletons or all-one-cluster.
        return numer == 0.0 ? 1.0 : 0.0;
    }
    return numer / denom;
}

double cluster_entropy(std::span<const int> assignment, std::span<const int> labels_true) {
    if (assignment.empty()) {
        fail(ErrorKind::input, "entropy of an empty partition");
    }
    const ContingencyTable table = ContingencyTable::build(labels_true, assignment);
    double h = 0.0;
    for (std::size_t l = 0; l < table.counts.size(); ++l) {
        const auto size = static_cast<double>(table.row_sums[l]);
        double hl = 0.0;
        for (std::size_t c : table.counts[l]) {
            if (c > 0) {
                const double q = static_cast<double>(c) / size;
                hl -= q * std::log2(q);
            }
        }
        h += size / static_cast<double>(table.n) * hl;
    }
    return h;
}

double feature_recovery(std::span<const std::size_t> selected, const std::vector<bool>& informative_mask) {
    const std::size_t m = informative_mask.size();
    std::size_t informative = 0;
    for (bool b : informative_mask) {
        informative += b ? 1 : 0;
    }
    if (selected.size() != informative) {
        fail(ErrorKind::input, "selected " + std::to_string(selected.size()) + " features but " +
                                   std::to_string(informative) + " are informative");
    }
    std::vector<bool> picked(m, false);
    for (std::size_t v : selected) {
        if (v >= m || picked[v]) {
            fail(ErrorKind::input, "selected feature indices must be distinct and < m");
        }
        picked[v] = true;
    }
    std::size_t correct = 0;
    for (std::size_t v = 0; v < m; ++v) {
        correct += picked[v] == informative_mask[v] ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(m);
}

}  // namespace mwk
