#include "mwk/dataset.hpp"

#include <cmath>

#include "mwk/error.hpp"

namespace mwk {

std::vector<double> Matrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        out[r] = (*this)(r, c);
    }
    return out;
}

void Dataset::validate() const {
    if (n() == 0 || m() == 0) {
        fail(ErrorKind::input, "dataset must have at least one row and one feature");
    }
    if (feature_names.size() != m()) {
        fail(ErrorKind::length, "expected " + std::to_string(m()) + " feature names, got " +
                                    std::to_string(feature_names.size()));
    }
    for (std::size_t i = 0; i < n(); ++i) {
        for (std::size_t v = 0; v < m(); ++v) {
            if (!std::isfinite(values(i, v))) {
                fail(ErrorKind::input, "non-finite value at row " + std::to_string(i) + ", feature " +
                                           std::to_string(v));
            }
        }
    }
    if (labels && labels->size() != n()) {
        fail(ErrorKind::length, "labels length " + std::to_string(labels->size()) + " != n " + std::to_string(n()));
    }
    if (informative_mask && informative_mask->size() != m()) {
        fail(ErrorKind::length, "mask length " + std::to_string(informative_mask->size()) + " != m " +
                                    std::to_string(m()));
    }
}

std::vector<std::string> default_feature_names(std::size_t m) {
    std::vector<std::string> names;
    names.reserve(m);
    for (std::size_t v = 0; v < m; ++v) {
        names.push_back("f" + std::to_string(v));
    }
    return names;
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows) {
    Dataset data;
    const std::size_t m = rows.empty() ? 0 : rows.front().size();
    data.values = Matrix(rows.size(), m);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m) {
            fail(ErrorKind::length, "ragged row " + std::to_string(i));
        }
        for (std::size_t v = 0; v < m; ++v) {
            data.values(i, v) = rows[i][v];
        }
    }
    data.feature_names = default_feature_names(m);
    return data;
}

Dataset select_rows(const Dataset& data, std::span<const std::size_t> rows) {
    Dataset out;
    out.values = Matrix(rows.size(), data.m());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto src = data.values.row(rows[i]);
        std::copy(src.begin(), src.end(), out.values.row(i).begin());
    }
    out.feature_names = data.feature_names;
    out.informative_mask = data.informative_mask;
    if (data.labels) {
        std::vector<int> labels(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            labels[i] = (*data.labels)[rows[i]];
        }
        out.labels = std::move(labels);
    }
    return out;
}

Dataset select_columns(const Dataset& data, std::span<const std::size_t> columns) {
    Dataset out;
    out.values = Matrix(data.n(), columns.size());
    for (std::size_t i = 0; i < data.n(); ++i) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            out.values(i, c) = data.values(i, columns[c]);
        }
    }
    out.labels = data.labels;
    for (std::size_t c : columns) {
        out.feature_names.push_back(data.feature_names.at(c));
    }
    if (data.informative_mask) {
        std::vector<bool> mask;
        for (std::size_t c : columns) {
            mask.push_back((*data.informative_mask)[c]);
        }
        out.informative_mask = std::move(mask);
    }
    return out;
}

}  // namespace mwk
