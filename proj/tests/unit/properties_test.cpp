#include <doctest.h>

#include "properties.hpp"

using namespace mwk::testing;

TEST_CASE("weight rows stay on the simplex") {
    const Verdict v = weight_simplex(101);
    INFO(v.detail);
    CHECK(v.ok);
    CHECK(v.cases == 200);
}

TEST_CASE("exact-mode objective never increases") {
    const Verdict v = objective_monotone(202);
    INFO(v.detail);
    CHECK(v.ok);
}

TEST_CASE("golden-section center matches a grid minimizer") {
    const Verdict v = center_vs_grid(303);
    INFO(v.detail);
    CHECK(v.ok);
}

TEST_CASE("ARI matches pair counting") {
    const Verdict v = ari_vs_pairs(404);
    INFO(v.detail);
    CHECK(v.ok);
}

TEST_CASE("sub-uniform weight implies a super-uniform weight") {
    const Verdict v = pigeonhole(505);
    INFO(v.detail);
    CHECK(v.ok);
}
