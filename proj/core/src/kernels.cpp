#include "kernels.hpp"

#include <cmath>

namespace mwk::detail {

double sum_abs_pow(const double* __restrict values, std::size_t n, double center, double p) {
    double s = 0.0;
    if (p == 2.0) {
        for (std::size_t i = 0; i < n; ++i) {
            const double d = values[i] - center;
            s += d * d;
        }
        return s;
    }
    for (std::size_t i = 0; i < n; ++i) {
        s += std::pow(std::abs(values[i] - center), p);
    }
    return s;
}

double weighted_pow_distance(const double* __restrict x, const double* __restrict z, const double* __restrict w,
                             std::size_t m, double p) {
    double s = 0.0;
    if (p == 2.0) {
        for (std::size_t v = 0; v < m; ++v) {
            const double d = w[v] * (x[v] - z[v]);
            s += d * d;
        }
        return s;
    }
    for (std::size_t v = 0; v < m; ++v) {
        s += std::pow(w[v] * std::abs(x[v] - z[v]), p);
    }
    return s;
}

void accumulate_abs_pow(const double* __restrict x, const double* __restrict z, double* __restrict acc,
                        std::size_t m, double p) {
    if (p == 2.0) {
        for (std::size_t v = 0; v < m; ++v) {
            const double d = x[v] - z[v];
            acc[v] += d * d;
        }
        return;
    }
    for (std::size_t v = 0; v < m; ++v) {
        acc[v] += std::pow(std::abs(x[v] - z[v]), p);
    }
}

void accumulate_column(const double* __restrict column, std::size_t n, double center, double scale, double p,
                       double* __restrict out) {
    if (p == 2.0) {
        for (std::size_t i = 0; i < n; ++i) {
            const double d = column[i] - center;
            out[i] += scale * (d * d);
        }
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[i] += scale * std::pow(std::abs(column[i] - center), p);
    }
}

}  // namespace mwk::detail
