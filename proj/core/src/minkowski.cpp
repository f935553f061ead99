#include "mwk/minkowski.hpp"

#include "kernels.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "mwk/error.hpp"

namespace mwk {

namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            fail(ErrorKind::input, std::string(what) + " contains a non-finite value");
        }
    }
}

}  // namespace

Exponent::Exponent(double p) : p_(p) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        fail(ErrorKind::input, "Minkowski exponent must be finite and > 1, got " + std::to_string(p));
    }
}

double weighted_minkowski_distance(std::span<const double> x, std::span<const double> z,
                                   std::span<const double> w, Exponent p) {
    if (x.size() != z.size() || x.size() != w.size()) {
        fail(ErrorKind::length, "distance operands have lengths " + std::to_string(x.size()) + ", " +
                                    std::to_string(z.size()) + ", " + std::to_string(w.size()));
    }
    require_finite(x, "point");
    require_finite(z, "centroid");
    require_finite(w, "weights");
    double total = 0.0;
    for (std::size_t v = 0; v < x.size(); ++v) {
        if (w[v] < 0.0) {
            fail(ErrorKind::input, "negative feature weight");
        }
        total += abs_pow(w[v] * std::abs(x[v] - z[v]), p.value());
    }
    return total;
}

double default_center_tolerance(std::span<const double> values) {
    if (values.empty()) {
        return 1e-6;
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return 1e-6 * (*hi - *lo + 1.0);
}

double minkowski_center(std::span<const double> values, Exponent p, std::optional<double> tol) {
    if (values.empty()) {
        fail(ErrorKind::input, "Minkowski center of an empty list");
    }
    const double eps = tol.value_or(default_center_tolerance(values));
    if (!(eps > 0.0)) {
        fail(ErrorKind::input, "center tolerance must be positive");
    }
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double a = *lo_it;
    double b = *hi_it;
    if (b - a <= eps) {
        return 0.5 * (a + b);
    }

    auto f = [&](double c) { return detail::sum_abs_pow(values.data(), values.size(), c, p.value()); };
    constexpr double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > eps) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

double median_inplace(std::vector<double>& values) {
    if (values.empty()) {
        fail(ErrorKind::input, "median of an empty list");
    }
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double minkowski_center_fast(std::span<const double> values, Exponent p) {
    if (values.empty()) {
        fail(ErrorKind::input, "Minkowski center of an empty list");
    }
    if (p.value() < 1.5) {
        std::vector<double> copy(values.begin(), values.end());
        return median_inplace(copy);
    }
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double feature_dispersion(std::span<const double> values, double center, Exponent p) {
    require_finite(values, "values");
    if (!std::isfinite(center)) {
        fail(ErrorKind::input, "center is not finite");
    }
    double total = 0.0;
    for (double v : values) {
        total += abs_pow(std::abs(v - center), p.value());
    }
    return total;
}

}  // namespace mwk
