#include <doctest.h>

#include <mwk/error.hpp>
#include <mwk/minkowski.hpp>

#include <cmath>
#include <vector>

#include "properties.hpp"

using mwk::Exponent;

TEST_CASE("exponent must exceed one") {
    CHECK_THROWS_AS(Exponent(1.0), mwk::Error);
    CHECK_THROWS_AS(Exponent(0.5), mwk::Error);
    CHECK_THROWS_AS(Exponent(std::nan("")), mwk::Error);
    CHECK(Exponent(1.1).value() == 1.1);
    CHECK(Exponent(3.0).ratio_exponent() == doctest::Approx(0.5));
}

TEST_CASE("weighted distance") {
    const Exponent p2(2.0);
    SUBCASE("identical points") {
        const std::vector<double> x{1.5, -2.0, 7.0};
        const std::vector<double> w{0.2, 0.3, 0.5};
        CHECK(mwk::weighted_minkowski_distance(x, x, w, Exponent(1.7)) == 0.0);
    }
    SUBCASE("half weights") {
        const std::vector<double> x{0, 0}, z{1, 1}, w{0.5, 0.5};
        CHECK(mwk::weighted_minkowski_distance(x, z, w, p2) == doctest::Approx(0.25 * 1 + 0.25 * 1));
    }
    SUBCASE("zero weight hides a coordinate") {
        const std::vector<double> x{0, 3}, z{0, 0}, w{1, 0};
        CHECK(mwk::weighted_minkowski_distance(x, z, w, p2) == 0.0);
    }
    SUBCASE("general exponent by direct summation") {
        const std::vector<double> x{1.0, -2.0}, z{3.0, 0.5}, w{0.4, 0.6};
        const double p = 2.7;
        const double want = std::pow(0.4 * 2.0, p) + std::pow(0.6 * 2.5, p);
        CHECK(mwk::weighted_minkowski_distance(x, z, w, Exponent(p)) == doctest::Approx(want).epsilon(1e-12));
    }
    SUBCASE("length mismatch") {
        const std::vector<double> x{0, 1}, z{0}, w{1, 0};
        CHECK_THROWS_AS(mwk::weighted_minkowski_distance(x, z, w, p2), mwk::Error);
    }
}

TEST_CASE("exact Minkowski center") {
    CHECK(mwk::minkowski_center(std::vector<double>{1, 2, 3}, Exponent(2.0)) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(mwk::minkowski_center(std::vector<double>{0, 10}, Exponent(1.3)) == doctest::Approx(5.0).epsilon(1e-6));
    CHECK(mwk::minkowski_center(std::vector<double>{0, 10}, Exponent(2.9)) == doctest::Approx(5.0).epsilon(1e-6));
    CHECK(mwk::minkowski_center(std::vector<double>{4.25}, Exponent(2.0)) == 4.25);

    // 2 c^2 = (9 - c)^2 at the optimum for p = 3, so c = 9 / (1 + sqrt 2).
    const std::vector<double> v{0, 0, 9};
    const double analytic = 9.0 / (1.0 + std::sqrt(2.0));
    CHECK(mwk::minkowski_center(v, Exponent(3.0)) == doctest::Approx(analytic).epsilon(1e-5));
    CHECK(mwk::testing::grid_center(v, 3.0, 1e-5) == doctest::Approx(3.7279).epsilon(1e-4));

    CHECK_THROWS_AS(mwk::minkowski_center(std::vector<double>{}, Exponent(2.0)), mwk::Error);
}

TEST_CASE("center tolerance scales with the range") {
    CHECK(mwk::default_center_tolerance(std::vector<double>{0, 1}) == doctest::Approx(2e-6));
    CHECK(mwk::default_center_tolerance(std::vector<double>{-50, 50}) == doctest::Approx(101e-6));
}

TEST_CASE("fast center switches at 1.5") {
    const std::vector<double> v{0, 1, 100};
    CHECK(mwk::minkowski_center_fast(v, Exponent(1.2)) == 1.0);
    CHECK(mwk::minkowski_center_fast(v, Exponent(2.0)) == doctest::Approx(101.0 / 3.0));
    CHECK(mwk::minkowski_center_fast(v, Exponent(1.5)) == doctest::Approx(101.0 / 3.0));
    CHECK(mwk::minkowski_center_fast(std::vector<double>{4, 1, 3, 2}, Exponent(1.1)) == 2.5);
}

TEST_CASE("dispersion") {
    CHECK(mwk::feature_dispersion(std::vector<double>{2, 2, 2}, 2.0, Exponent(1.4)) == 0.0);
    CHECK(mwk::feature_dispersion(std::vector<double>{0, 2}, 1.0, Exponent(2.0)) == 2.0);
    CHECK(mwk::feature_dispersion(std::vector<double>{0, 2}, 1.0, Exponent(3.0)) == 2.0);
    CHECK(mwk::feature_dispersion(std::vector<double>{}, 1.0, Exponent(3.0)) == 0.0);
}

TEST_CASE("median convention") {
    std::vector<double> odd{5, 1, 3};
    std::vector<double> even{4, 1, 2, 10};
    CHECK(mwk::median_inplace(odd) == 3.0);
    CHECK(mwk::median_inplace(even) == 3.0);
}
