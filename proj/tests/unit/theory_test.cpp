#include <doctest.h>

#include <mwk/cluster.hpp>
#include <mwk/error.hpp>
#include <mwk/io.hpp>
#include <mwk/synth.hpp>
#include <mwk/theory.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "properties.hpp"

using namespace mwk;

namespace {

RatioProfile profile(std::vector<double> ratios, double p) {
    RatioProfile r;
    r.ratios = std::move(ratios);
    r.p = Exponent(p);
    return r;
}

}  // namespace

TEST_CASE("noise feature definition") {
    const std::vector<std::size_t> relevant{1, 2};
    Matrix d(3, 3);
    // Row 0: equal to the relevant dispersions. Row 1: four times larger. Row 2: a quarter.
    d(0, 0) = 2;
    d(0, 1) = 2;
    d(0, 2) = 2;
    d(1, 0) = 4;
    d(1, 1) = 1;
    d(1, 2) = 1;
    d(2, 0) = 1;
    d(2, 1) = 4;
    d(2, 2) = 4;
    const NoiseVerdict v = is_noise_feature(d, 0, relevant, Exponent(2.0));
    CHECK(v.noise == std::vector<bool>{false, true, false});
    CHECK(v.average_ratio[0] == 1.0);
    CHECK(v.average_ratio[1] == 4.0);
    CHECK(v.average_ratio[2] == 0.25);
    CHECK_FALSE(v.degenerate);

    d(2, 1) = 0;
    const NoiseVerdict z = is_noise_feature(d, 0, relevant, Exponent(2.0));
    CHECK(z.degenerate);
    CHECK(z.noise[2]);

    CHECK_THROWS_AS(is_noise_feature(d, 1, relevant, Exponent(2.0)), Error);
    CHECK_THROWS_AS(is_noise_feature(d, 0, std::vector<std::size_t>{}, Exponent(2.0)), Error);
}

TEST_CASE("A and L") {
    CHECK(capital_A(profile(std::vector<double>(12, 1.0), 2.0)) == 12.0);
    CHECK(capital_L(profile(std::vector<double>(12, 1.0), 2.7)) == 0.0);
    const RatioProfile two = profile({1.0, 3.0}, 2.0);
    CHECK(capital_A(two) == 4.0);
    CHECK(1.0 / capital_A(two) == 0.25);
    CHECK(capital_L(profile({std::numbers::e}, 2.0)) == doctest::Approx(std::numbers::e));

    const RatioProfile worked = profile(std::vector<double>(12, 0.171), 2.4);
    CHECK(capital_A(worked) == doctest::Approx(3.4).epsilon(0.02));
    CHECK(capital_L(worked) == doctest::Approx(6.00).epsilon(0.02));
}

TEST_CASE("1/A is the weight formula") {
    Rng rng(3);
    for (int t = 0; t < 50; ++t) {
        const std::size_t m = 2 + rng.index(10);
        const double p = rng.uniform(1.1, 3.5);
        std::vector<double> d(m);
        for (double& x : d) {
            x = rng.uniform(0.01, 10.0);
        }
        std::vector<double> w(m);
        weights_from_dispersion(d, Exponent(p), w, Regularization::when_degenerate);
        for (std::size_t v = 0; v < m; ++v) {
            const double a = capital_A(RatioProfile::from_dispersion(d, v, Exponent(p)));
            CHECK(std::abs(1.0 / a - w[v]) <= 1e-12);
        }
    }
}

TEST_CASE("L is non-negative and vanishes only on unit ratios") {
    Rng rng(4);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> r(1 + rng.index(8));
        for (double& x : r) {
            x = rng.uniform(0.05, 5.0);
        }
        CHECK(capital_L(profile(r, rng.uniform(1.1, 3.0))) > 0.0);
    }
}

TEST_CASE("delta bound") {
    CHECK(delta_bound(0.15, 3.4, 6.00, Exponent(2.4)).value == doctest::Approx(0.566).epsilon(0.01));
    CHECK(delta_bound(0.3, 3.4, 6.00, Exponent(2.4)).value ==
          doctest::Approx(2 * delta_bound(0.15, 3.4, 6.00, Exponent(2.4)).value));
    CHECK(delta_bound(1e-9, 3.4, 6.00, Exponent(2.4)).value < 1e-8);
    const DeltaBound flat = delta_bound(0.1, 5.0, 0.0, Exponent(2.0));
    CHECK(flat.unbounded);
    CHECK(std::isinf(flat.value));
    CHECK_THROWS_AS(delta_bound(0.0, 3.4, 6.0, Exponent(2.4)), Error);
}

TEST_CASE("theorem condition") {
    TheoremInputs in;
    in.gamma = 0.15;
    in.alpha = 0.9;
    in.p = Exponent(2.4);
    in.A = 3.4;
    in.L = 6.00;
    in.m = 12;
    const TheoremCheck c = theorem_condition(in);
    CHECK(c.value == doctest::Approx(0.566).epsilon(0.01));
    CHECK(std::abs(c.threshold - 0.5556) < 1e-4);
    CHECK(c.satisfied);

    in.alpha = 0.5;
    const TheoremCheck strict = theorem_condition(in);
    CHECK(strict.threshold == 1.0);
    CHECK_FALSE(strict.satisfied);

    Rng rng(6);
    for (int t = 0; t < 50; ++t) {
        in.gamma = rng.uniform(0.01, 0.5);
        in.alpha = rng.uniform(0.1, 1.0);
        in.A = rng.uniform(0.5, 10);
        in.L = rng.uniform(0.1, 10);
        const TheoremCheck r = theorem_condition(in);
        CHECK(r.satisfied == (delta_bound(in.gamma, in.A, in.L, in.p).value > 1.0 / (2.0 * in.alpha)));
    }
    in.alpha = 1.5;
    CHECK_THROWS_AS(theorem_condition(in), Error);

    CHECK(max_A_for_margin(12, 0.15) == doctest::Approx(4.29).epsilon(0.002));
}

TEST_CASE("audit of a weight stack") {
    WeightStack uniform;
    uniform.k = 2;
    uniform.m = 4;
    WeightStackEntry e;
    e.p = 2.0;
    e.weights = WeightMatrix::uniform(2, 4);
    uniform.entries.push_back(e);
    const AuditReport u = audit_run(uniform, {true, true, false, false});
    REQUIRE(u.pairs.size() == 2);
    for (const PairAudit& pair : u.pairs) {
        CHECK_FALSE(pair.some_feature_above);
        CHECK_FALSE(pair.all_noise_below);
    }
    CHECK(u.pairs_some_above == 0.0);

    WeightStack skewed = uniform;
    skewed.entries[0].weights.w(0, 0) = 0.4;
    skewed.entries[0].weights.w(0, 1) = 0.4;
    skewed.entries[0].weights.w(0, 2) = 0.1;
    skewed.entries[0].weights.w(0, 3) = 0.1;
    const AuditReport s = audit_run(skewed, {true, true, false, false});
    CHECK(s.pairs[0].all_noise_below);
    CHECK(s.pairs[0].some_feature_above);
    CHECK(s.pairs[0].noise_below_fraction == 1.0);
    CHECK(s.pairs_all_noise_below == 0.5);
    CHECK(s.margins[0] == doctest::Approx(0.15));
    CHECK(s.margins[2] == doctest::Approx(0.0));

    CHECK_THROWS_AS(audit_run(uniform, {true, false}), Error);
}

TEST_CASE("pigeonhole on random rows") {
    const testing::Verdict v = testing::pigeonhole(8);
    INFO(v.detail);
    CHECK(v.ok);
}

TEST_CASE("noise weights fall below 1/m on generated data") {
    // The bound is about the unshifted weight formula.
    const FitOptions fast{CenterMode::fast, 100, 1, Regularization::when_degenerate};
    double below = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Dataset data = normalize_range(generate(ConfigSpec{400, 4, 3, 2, seed})).data;
        const WeightStack stack = collect_weights(data, 3, ExponentGrid::coarse(), 3, seed, fast);
        below += audit_run(stack, *data.informative_mask).pairs_all_noise_below;
    }
    CHECK(below / 10.0 >= 0.95);
}
