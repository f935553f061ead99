#ifndef MWK_MINKOWSKI_HPP
#define MWK_MINKOWSKI_HPP

#include <cmath>
#include <optional>
#include <span>
#include <vector>

/**
 * @file minkowski.hpp
 * @brief Primitives of the weighted Minkowski metric space.
 *
 * Distances are always the p-th power form sum_v w_v^p |x_v - z_v|^p.
 * No p-th root is taken anywhere in the library.
 */

namespace mwk {

/// Minkowski exponent, strictly greater than one.
class Exponent {
public:
    explicit Exponent(double p);

    double value() const noexcept { return p_; }
    /// 1 / (p - 1), the exponent applied to dispersion ratios in the weight formula.
    double ratio_exponent() const noexcept { return 1.0 / (p_ - 1.0); }

    friend bool operator==(Exponent a, Exponent b) noexcept { return a.p_ == b.p_; }

private:
    double p_;
};

/// Whether the centroid update solves for the exact Minkowski center or uses
/// the median (p < 1.5) / mean (p >= 1.5) shortcut.
enum class CenterMode { exact, fast };

/// |a|^p for a >= 0, with the p == 2 case kept in plain arithmetic.
inline double abs_pow(double a, double p) {
    return p == 2.0 ? a * a : std::pow(a, p);
}

double weighted_minkowski_distance(std::span<const double> x, std::span<const double> z,
                                   std::span<const double> w, Exponent p);

/// Scale-relative stopping tolerance 1e-6 * (max - min + 1).
double default_center_tolerance(std::span<const double> values);

/**
 * Minimizer of f(c) = sum_i |values_i - c|^p over [min, max] by golden-section
 * search. f is strictly convex for p > 1; the returned point is within `tol`
 * of the true minimizer.
 */
double minkowski_center(std::span<const double> values, Exponent p, std::optional<double> tol = {});

/// Component median when p < 1.5, arithmetic mean otherwise.
double minkowski_center_fast(std::span<const double> values, Exponent p);

/// sum_i |values_i - center|^p. Zero for an empty list.
double feature_dispersion(std::span<const double> values, double center, Exponent p);

/// Median with the even-count midpoint convention. Reorders `values`.
double median_inplace(std::vector<double>& values);

}  // namespace mwk

#endif
