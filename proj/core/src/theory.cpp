#include "mwk/theory.hpp"

#include <cmath>
#include <limits>

#include "mwk/error.hpp"

namespace mwk {

RatioProfile RatioProfile::from_dispersion(std::span<const double> dispersion, std::size_t v, Exponent p) {
    if (v >= dispersion.size()) {
        fail(ErrorKind::input, "feature index out of range");
    }
    RatioProfile out;
    out.p = p;
    out.ratios.reserve(dispersion.size());
    for (double du : dispersion) {
        if (!(du > 0.0) || !(dispersion[v] > 0.0)) {
            fail(ErrorKind::input, "ratio profile needs strictly positive dispersions");
        }
        out.ratios.push_back(dispersion[v] / du);
    }
    return out;
}

NoiseVerdict is_noise_feature(const Matrix& dispersion, std::size_t v, std::span<const std::size_t> relevant,
                              Exponent p) {
    if (relevant.empty()) {
        fail(ErrorKind::input, "relevant feature set is empty");
    }
    if (v >= dispersion.cols()) {
        fail(ErrorKind::input, "feature index out of range");
    }
    NoiseVerdict out;
    const double e = p.ratio_exponent();
    for (std::size_t u : relevant) {
        if (u == v) {
            fail(ErrorKind::input, "feature under test is listed as relevant");
        }
        if (u >= dispersion.cols()) {
            fail(ErrorKind::input, "relevant feature index out of range");
        }
    }
    for (std::size_t l = 0; l < dispersion.rows(); ++l) {
        double sum = 0.0;
        bool infinite = false;
        for (std::size_t u : relevant) {
            if (dispersion(l, u) <= 0.0) {
                infinite = true;
                continue;
            }
            sum += std::pow(dispersion(l, v) / dispersion(l, u), e);
        }
        if (infinite) {
            out.degenerate = true;
            out.average_ratio.push_back(std::numeric_limits<double>::infinity());
            out.noise.push_back(true);
            continue;
        }
        const double avg = sum / static_cast<double>(relevant.size());
        out.average_ratio.push_back(avg);
        out.noise.push_back(avg > 1.0);
    }
    return out;
}

double capital_A(const RatioProfile& profile) {
    const double e = profile.p.ratio_exponent();
    double total = 0.0;
    for (double a : profile.ratios) {
        total += std::pow(a, e);
    }
    return total;
}

double capital_L(const RatioProfile& profile) {
    const double e = profile.p.ratio_exponent();
    double total = 0.0;
    for (double a : profile.ratios) {
        total += std::pow(a, e) * std::abs(std::log(a));
    }
    return total;
}

DeltaBound delta_bound(double gamma, double A, double L, Exponent p) {
    if (!(gamma > 0.0)) {
        fail(ErrorKind::input, "gamma must be > 0");
    }
    if (!(A > 0.0) || L < 0.0) {
        fail(ErrorKind::input, "A must be > 0 and L >= 0");
    }
    if (L == 0.0) {
        return {std::numeric_limits<double>::infinity(), true};
    }
    const double pm1 = p.value() - 1.0;
    return {gamma * A * A * pm1 * pm1 / L, false};
}

DeltaBound delta_bound(double gamma, const RatioProfile& profile) {
    return delta_bound(gamma, capital_A(profile), capital_L(profile), profile.p);
}

TheoremCheck theorem_condition(const TheoremInputs& inputs) {
    if (!(inputs.alpha > 0.0) || inputs.alpha > 1.0) {
        fail(ErrorKind::input, "alpha must be in (0, 1]");
    }
    const DeltaBound delta = delta_bound(inputs.gamma, inputs.A, inputs.L, inputs.p);
    TheoremCheck out;
    out.value = delta.value;
    out.unbounded = delta.unbounded;
    out.threshold = 1.0 / (2.0 * inputs.alpha);
    out.satisfied = out.value > out.threshold;
    return out;
}

double max_A_for_margin(std::size_t m, double gamma) {
    if (m == 0) {
        fail(ErrorKind::input, "m must be >= 1");
    }
    return 1.0 / (1.0 / static_cast<double>(m) + gamma);
}

AuditReport audit_run(const WeightStack& stack, const std::vector<bool>& informative_mask) {
    if (informative_mask.size() != stack.m) {
        fail(ErrorKind::length, "mask length " + std::to_string(informative_mask.size()) + " != m " +
                                    std::to_string(stack.m));
    }
    AuditReport report;
    report.m = stack.m;
    const double uniform = 1.0 / static_cast<double>(stack.m);
    report.margins.assign(stack.m, -std::numeric_limits<double>::infinity());
    std::size_t all_below = 0;
    std::size_t some_above = 0;
    for (const auto& entry : stack.entries) {
        for (std::size_t l = 0; l < entry.weights.k(); ++l) {
            PairAudit pair;
            pair.p = entry.p;
            pair.sample_id = entry.sample_id;
            pair.cluster = l;
            std::size_t noise = 0;
            std::size_t below = 0;
            for (std::size_t v = 0; v < stack.m; ++v) {
                const double w = entry.weights.w(l, v);
                report.margins[v] = std::max(report.margins[v], w - uniform);
                if (w > uniform) {
                    pair.some_feature_above = true;
                }
                if (!informative_mask[v]) {
                    ++noise;
                    below += w < uniform ? 1 : 0;
                }
            }
            pair.noise_below_fraction = noise == 0 ? 1.0 : static_cast<double>(below) / static_cast<double>(noise);
            pair.all_noise_below = below == noise;
            all_below += pair.all_noise_below ? 1 : 0;
            some_above += pair.some_feature_above ? 1 : 0;
            report.pairs.push_back(pair);
        }
    }
    if (!report.pairs.empty()) {
        report.pairs_all_noise_below = static_cast<double>(all_below) / static_cast<double>(report.pairs.size());
        report.pairs_some_above = static_cast<double>(some_above) / static_cast<double>(report.pairs.size());
    }
    return report;
}

}  // namespace mwk
