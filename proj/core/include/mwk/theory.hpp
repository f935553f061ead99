#ifndef MWK_THEORY_HPP
#define MWK_THEORY_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mwk/dataset.hpp"
#include "mwk/feature_select.hpp"
#include "mwk/minkowski.hpp"

/**
 * @file theory.hpp
 * @brief Numeric checks of the weight-stability conditions.
 *
 * For a feature v in cluster l, let a_u = D_lv / D_lu. Then
 *   A(p) = sum_u a_u^(1/(p-1))            (so w_lv = 1 / A(p))
 *   L(p) = sum_u a_u^(1/(p-1)) |ln a_u|
 *   delta = gamma * A^2 (p-1)^2 / L
 * and the selection condition is delta > 1 / (2 alpha).
 */

namespace mwk {

/// Dispersion ratios of one feature against every feature (its own ratio is 1).
struct RatioProfile {
    std::vector<double> ratios;
    Exponent p{2.0};

    /// Ratios D[v] / D[u] for all u of one dispersion row.
    static RatioProfile from_dispersion(std::span<const double> dispersion, std::size_t v, Exponent p);
};

struct NoiseVerdict {
    /// Per cluster: average ratio term over relevant features is > 1.
    std::vector<bool> noise;
    std::vector<double> average_ratio;
    /// Some relevant feature had zero dispersion, making a ratio infinite.
    bool degenerate = false;
};

/// Whether feature v behaves as a noise feature against `relevant` in every cluster row of `dispersion`.
NoiseVerdict is_noise_feature(const Matrix& dispersion, std::size_t v, std::span<const std::size_t> relevant,
                              Exponent p);

double capital_A(const RatioProfile& profile);
double capital_L(const RatioProfile& profile);

struct DeltaBound {
    double value = 0.0;
    /// L == 0: the weight does not move with p, so the bound is +infinity.
    bool unbounded = false;
};

DeltaBound delta_bound(double gamma, const RatioProfile& profile);
/// Same quantity from precomputed A and L.
DeltaBound delta_bound(double gamma, double A, double L, Exponent p);

struct TheoremInputs {
    double gamma = 0.0;
    double alpha = 1.0;
    Exponent p{2.0};
    double A = 1.0;
    double L = 0.0;
    std::size_t m = 1;
};

struct TheoremCheck {
    double value = 0.0;
    double threshold = 0.0;
    bool satisfied = false;
    bool unbounded = false;
};

TheoremCheck theorem_condition(const TheoremInputs& inputs);

/// Largest A compatible with w = 1/A >= 1/m + gamma.
double max_A_for_margin(std::size_t m, double gamma);

struct PairAudit {
    double p = 0.0;
    std::size_t sample_id = 0;
    std::size_t cluster = 0;
    /// Fraction of noise features whose weight is < 1/m in this row.
    double noise_below_fraction = 1.0;
    bool all_noise_below = true;
    /// At least one feature strictly above 1/m.
    bool some_feature_above = false;
};

struct AuditReport {
    std::size_t m = 0;
    std::vector<PairAudit> pairs;
    /// gamma_v = max over pairs of (w_lv - 1/m).
    std::vector<double> margins;
    /// Share of pairs in which every noise feature is below 1/m.
    double pairs_all_noise_below = 0.0;
    /// Share of pairs with some feature above 1/m.
    double pairs_some_above = 0.0;
};

AuditReport audit_run(const WeightStack& stack, const std::vector<bool>& informative_mask);

}  // namespace mwk

#endif
