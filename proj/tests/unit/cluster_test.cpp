#include <doctest.h>

#include <mwk/cluster.hpp>
#include <mwk/error.hpp>
#include <mwk/metrics.hpp>
#include <mwk/minkowski.hpp>
#include <mwk/rng.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "properties.hpp"

using namespace mwk;

namespace {

Dataset rows(const std::vector<std::vector<double>>& r) {
    return Dataset::from_rows(r);
}

std::size_t row_index(const Dataset& data, std::span<const double> z) {
    for (std::size_t i = 0; i < data.n(); ++i) {
        if (std::equal(z.begin(), z.end(), data.values.row(i).begin())) {
            return i;
        }
    }
    return data.n();
}

bool has_note(const std::vector<std::string>& notes, const std::string& note) {
    return std::find(notes.begin(), notes.end(), note) != notes.end();
}

}  // namespace

TEST_CASE("weights from a dispersion row") {
    std::vector<double> out(2);
    SUBCASE("two features") {
        const std::vector<double> d{1, 3};
        CHECK_FALSE(weights_from_dispersion(d, Exponent(2.0), out, Regularization::when_degenerate));
        CHECK(out[0] == doctest::Approx(0.75));
        CHECK(out[1] == doctest::Approx(0.25));
    }
    SUBCASE("regularized always: (1,3) becomes (3,5)") {
        const std::vector<double> d{1, 3};
        weights_from_dispersion(d, Exponent(2.0), out, Regularization::always);
        CHECK(out[0] == doctest::Approx(1.0 / (1.0 + 3.0 / 5.0)));
        CHECK(out[1] == doctest::Approx(1.0 / (5.0 / 3.0 + 1.0)));
    }
    SUBCASE("a constant feature takes the largest weight") {
        const std::vector<double> d{0, 4, 8};
        std::vector<double> w(3);
        for (auto reg : {Regularization::when_degenerate, Regularization::always}) {
            CHECK_FALSE(weights_from_dispersion(d, Exponent(2.0), w, reg));
            CHECK(w[0] == doctest::Approx(6.0 / 11.0));
            CHECK(w[1] == doctest::Approx(1.0 / (8.0 / 4.0 + 1.0 + 8.0 / 12.0)));
            CHECK(w[2] == doctest::Approx(1.0 / (12.0 / 4.0 + 12.0 / 8.0 + 1.0)));
        }
    }
    SUBCASE("all zero is uniform and flagged") {
        const std::vector<double> d{0, 0};
        CHECK(weights_from_dispersion(d, Exponent(1.5), out));
        CHECK(out[0] == 0.5);
        CHECK(out[1] == 0.5);
    }
    SUBCASE("equal dispersions are uniform") {
        const std::vector<double> d{2.5, 2.5, 2.5, 2.5};
        std::vector<double> w(4);
        weights_from_dispersion(d, Exponent(2.2), w, Regularization::when_degenerate);
        for (double x : w) {
            CHECK(x == doctest::Approx(0.25));
        }
    }
    SUBCASE("larger p flattens the row") {
        const std::vector<double> d{1, 2, 6};
        std::vector<double> w2(3), w3(3);
        weights_from_dispersion(d, Exponent(2.0), w2, Regularization::when_degenerate);
        weights_from_dispersion(d, Exponent(3.0), w3, Regularization::when_degenerate);
        const auto spread = [](const std::vector<double>& w) {
            const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
            return *hi - *lo;
        };
        CHECK(spread(w3) < spread(w2));
    }
    SUBCASE("length mismatch") {
        const std::vector<double> d{1, 2, 3};
        CHECK_THROWS_AS(weights_from_dispersion(d, Exponent(2.0), out), Error);
    }
}

TEST_CASE("i.i.d. features get near-uniform weights") {
    Rng rng(17);
    Dataset data;
    data.values = Matrix(4000, 4);
    for (double& x : data.values.flat()) {
        x = rng.normal();
    }
    data.feature_names = default_feature_names(4);
    const GlobalWeights g = mwkpp_global_weights(data, Exponent(2.0));
    for (double w : g.weights) {
        CHECK(w == doctest::Approx(0.25).epsilon(0.05));
    }
}

TEST_CASE("assignment") {
    const Exponent p(2.0);
    SUBCASE("1-D two points") {
        const Dataset data = rows({{0}, {10}});
        const CentroidSet z{Matrix(2, 1)};
        CentroidSet c = z;
        c.z(0, 0) = 0;
        c.z(1, 0) = 10;
        const Partition part = mwk_assign(data, c, WeightMatrix::uniform(2, 1), p);
        CHECK(part.assignment == std::vector<int>{0, 1});
        CHECK(part.cluster_sizes == std::vector<std::size_t>{1, 1});
    }
    SUBCASE("ties go to the lower index") {
        const Dataset data = rows({{5, 1}});
        CentroidSet c{Matrix(3, 2)};
        c.z(0, 0) = 0;   // distance 25 + 1 on uniform weights
        c.z(1, 0) = 10;  // same distance
        c.z(2, 0) = 20;
        c.z(0, 1) = c.z(1, 1) = c.z(2, 1) = 0;
        const Partition part = mwk_assign(data, c, WeightMatrix::uniform(3, 2), p);
        CHECK(part.assignment[0] == 0);
        CentroidSet swapped = c;
        swapped.z(0, 0) = 20;
        swapped.z(2, 0) = 0;
        CHECK(mwk_assign(data, swapped, WeightMatrix::uniform(3, 2), p).assignment[0] == 1);
    }
    SUBCASE("a point on a centroid goes there") {
        const Dataset data = rows({{1, 2}, {3, 4}});
        CentroidSet c{Matrix(2, 2)};
        c.z(0, 0) = 3;
        c.z(0, 1) = 4;
        c.z(1, 0) = 1;
        c.z(1, 1) = 2;
        WeightMatrix w{Matrix(2, 2)};
        w.w(0, 0) = 0.9;
        w.w(0, 1) = 0.1;
        w.w(1, 0) = 0.2;
        w.w(1, 1) = 0.8;
        CHECK(mwk_assign(data, c, w, Exponent(1.3)).assignment == std::vector<int>{1, 0});
    }
    SUBCASE("no single move lowers the objective") {
        Rng rng(5);
        for (int t = 0; t < 20; ++t) {
            const std::size_t n = 5 + rng.index(26);
            const std::size_t m = 1 + rng.index(5);
            const std::size_t k = 2 + rng.index(3);
            const Exponent q(rng.uniform(1.1, 3.0));
            const Dataset data = testing::random_dataset(rng, n, m);
            CentroidSet c{Matrix(k, m)};
            WeightMatrix w{Matrix(k, m)};
            for (std::size_t l = 0; l < k; ++l) {
                double sum = 0;
                for (std::size_t v = 0; v < m; ++v) {
                    c.z(l, v) = rng.normal(0, 2);
                    w.w(l, v) = rng.uniform(0.05, 1.0);
                    sum += w.w(l, v);
                }
                for (std::size_t v = 0; v < m; ++v) {
                    w.w(l, v) /= sum;
                }
            }
            Partition part = mwk_assign(data, c, w, q);
            const double base = mwk_objective(data, part, c, w, q);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t l = 0; l < k; ++l) {
                    std::vector<int> moved = part.assignment;
                    moved[i] = static_cast<int>(l);
                    const double alt = mwk_objective(data, Partition::from_assignment(moved, k), c, w, q);
                    CHECK(alt >= base * (1 - 1e-12));
                }
            }
        }
    }
}

TEST_CASE("centroid update") {
    const Dataset data = rows({{0, 1}, {0, 3}, {9, 8}, {4, 4}});
    const Partition part = Partition::from_assignment({0, 0, 0, 1}, 2);
    SUBCASE("exact p = 2 gives means") {
        const CentroidSet z = mwk_update_centroids(data, part, Exponent(2.0), CenterMode::exact);
        CHECK(z.z(0, 0) == doctest::Approx(3.0));
        CHECK(z.z(0, 1) == doctest::Approx(4.0));
        CHECK(z.z(1, 0) == 4.0);
        CHECK(z.z(1, 1) == 4.0);
    }
    SUBCASE("exact p = 3 on {0,0,9}") {
        const CentroidSet z = mwk_update_centroids(data, part, Exponent(3.0), CenterMode::exact);
        CHECK(z.z(0, 0) == doctest::Approx(9.0 / (1.0 + std::sqrt(2.0))).epsilon(1e-5));
    }
    SUBCASE("fast p < 1.5 gives medians") {
        const CentroidSet z = mwk_update_centroids(data, part, Exponent(1.2), CenterMode::fast);
        CHECK(z.z(0, 0) == 0.0);
        CHECK(z.z(0, 1) == 3.0);
    }
    SUBCASE("empty cluster throws without a reseed context") {
        const Partition holes = Partition::from_assignment({0, 0, 0, 0}, 2);
        CHECK_THROWS_AS(mwk_update_centroids(data, holes, Exponent(2.0), CenterMode::exact), Error);
    }
}

TEST_CASE("weight update stays on the simplex") {
    const testing::Verdict v = testing::weight_simplex(9);
    INFO(v.detail);
    CHECK(v.ok);
}

TEST_CASE("objective matches a direct triple loop") {
    const Dataset data = rows({{0, 1}, {2, -1}, {5, 5}, {6, 4}});
    const Partition part = Partition::from_assignment({0, 0, 1, 1}, 2);
    CentroidSet z{Matrix(2, 2)};
    z.z(0, 0) = 1;
    z.z(0, 1) = 0.5;
    z.z(1, 0) = 5.5;
    z.z(1, 1) = 4.0;
    WeightMatrix w{Matrix(2, 2)};
    w.w(0, 0) = 0.3;
    w.w(0, 1) = 0.7;
    w.w(1, 0) = 0.6;
    w.w(1, 1) = 0.4;
    const double p = 2.3;
    double want = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto l = static_cast<std::size_t>(part.assignment[i]);
        for (std::size_t v = 0; v < 2; ++v) {
            want += std::pow(w.w(l, v), p) * std::pow(std::abs(data.values(i, v) - z.z(l, v)), p);
        }
    }
    CHECK(mwk_objective(data, part, z, w, Exponent(p)) == doctest::Approx(want).epsilon(1e-12));

    const Partition same = Partition::from_assignment({0, 0, 0, 0}, 1);
    CentroidSet at_points{Matrix(1, 2)};
    CHECK(mwk_objective(rows({{0, 0}}), Partition::from_assignment({0}, 1), at_points, WeightMatrix::uniform(1, 2),
                        Exponent(2.0)) == 0.0);
    const std::vector<double> x{2, -1}, c{1, 0.5}, wr{0.3, 0.7};
    CentroidSet one{Matrix(1, 2)};
    one.z(0, 0) = 1;
    one.z(0, 1) = 0.5;
    WeightMatrix wone{Matrix(1, 2)};
    wone.w(0, 0) = 0.3;
    wone.w(0, 1) = 0.7;
    CHECK(mwk_objective(rows({{2, -1}}), Partition::from_assignment({0}, 1), one, wone, Exponent(p)) ==
          doctest::Approx(weighted_minkowski_distance(x, c, wr, Exponent(p))));
    (void)same;
}

TEST_CASE("k-means++ seeding") {
    SUBCASE("two coincident pairs: the second centroid is always from the other pair") {
        const Dataset data = rows({{0, 0}, {0, 0}, {10, 10}, {10, 10}});
        for (std::uint64_t s = 0; s < 200; ++s) {
            Rng rng(s);
            const Seeding seed = kmeanspp_init(data, 2, rng);
            CHECK(seed.centroids.z(0, 0) != seed.centroids.z(1, 0));
        }
    }
    SUBCASE("k = n uses every point") {
        const Dataset data = rows({{0}, {1}, {3}, {7}, {15}});
        Rng rng(3);
        const Seeding seed = kmeanspp_init(data, 5, rng);
        std::vector<double> got(seed.centroids.z.flat().begin(), seed.centroids.z.flat().end());
        std::sort(got.begin(), got.end());
        CHECK(got == std::vector<double>{0, 1, 3, 7, 15});
        CHECK(seed.notes.empty());
    }
    SUBCASE("k = 1 is one data point") {
        const Dataset data = rows({{0, 4}, {1, 5}, {3, 6}});
        Rng rng(4);
        const Seeding seed = kmeanspp_init(data, 1, rng);
        CHECK(row_index(data, seed.centroids.z.row(0)) < 3);
    }
    SUBCASE("squared Euclidean sampling probabilities") {
        // First pick 0; distances^2 from 0 to {1, 3} are 1 and 9: P(second = 3) = 0.9.
        const Dataset data = rows({{0}, {1}, {3}});
        std::map<std::pair<std::size_t, std::size_t>, int> counts;
        const int trials = 30000;
        for (int s = 0; s < trials; ++s) {
            Rng rng(static_cast<std::uint64_t>(s));
            const Seeding seed = kmeanspp_init(data, 2, rng);
            ++counts[{row_index(data, seed.centroids.z.row(0)), row_index(data, seed.centroids.z.row(1))}];
        }
        const double p03 = counts[{0, 2}] / static_cast<double>(counts[{0, 2}] + counts[{0, 1}]);
        CHECK(p03 == doctest::Approx(0.9).epsilon(0.03));
    }
    SUBCASE("duplicates force draws with replacement") {
        const Dataset data = rows({{1}, {1}, {1}});
        Rng rng(8);
        const Seeding seed = kmeanspp_init(data, 2, rng);
        CHECK(has_note(seed.notes, "seeding_with_replacement"));
    }
}

TEST_CASE("MWK++ seeding samples by weighted Minkowski distance") {
    // n = 6 points, uniform global weights: P(first=i, second=j) = 1/n * d(i,j) / sum_t d(i,t).
    const Dataset data = rows({{0, 0}, {1, 0}, {0, 2}, {3, 1}, {4, 4}, {1, 5}});
    const Exponent p(1.6);
    GlobalWeights g;
    g.weights.assign(2, 0.5);
    const std::size_t n = data.n();
    const std::vector<double> w{0.5, 0.5};
    std::vector<std::vector<double>> expected(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        double total = 0;
        for (std::size_t t = 0; t < n; ++t) {
            total += weighted_minkowski_distance(data.values.row(i), data.values.row(t), w, p);
        }
        for (std::size_t j = 0; j < n; ++j) {
            expected[i][j] = weighted_minkowski_distance(data.values.row(i), data.values.row(j), w, p) / total / n;
        }
    }
    std::vector<std::vector<double>> seen(n, std::vector<double>(n, 0.0));
    const int trials = 60000;
    for (int s = 0; s < trials; ++s) {
        Rng rng(static_cast<std::uint64_t>(s) * 7919 + 1);
        const Seeding seed = mwkpp_init(data, 2, p, g, rng);
        seen[row_index(data, seed.centroids.z.row(0))][row_index(data, seed.centroids.z.row(1))] += 1.0 / trials;
        CHECK(seed.weights.w(1, 0) == 0.5);
    }
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            worst = std::max(worst, std::abs(seen[i][j] - expected[i][j]));
        }
    }
    CHECK(worst < 0.006);
}

TEST_CASE("global MWK++ weights favor the compact feature") {
    const Dataset data = rows({{0, 0}, {0.1, 5}, {-0.1, -5}, {0.05, 9}});
    const GlobalWeights g = mwkpp_global_weights(data, Exponent(2.0));
    CHECK(g.weights[0] > g.weights[1]);
    CHECK(g.weights[0] + g.weights[1] == doctest::Approx(1.0));
    CHECK_FALSE(g.degenerate);
    const Dataset flat = rows({{1, 2}, {1, 2}});
    CHECK(mwkpp_global_weights(flat, Exponent(2.0)).degenerate);
}

TEST_CASE("fit") {
    const FitOptions exact{CenterMode::exact, 100, 1};
    SUBCASE("two separated 1-D clusters") {
        const Dataset data = rows({{0}, {0.1}, {10}, {10.1}});
        for (std::uint64_t s = 0; s < 10; ++s) {
            Rng rng(s);
            const ClusteringResult r = mwk_fit(data, 2, Exponent(2.0), InitMethod::mwkpp, exact, rng);
            CHECK(ari(std::vector<int>{0, 0, 1, 1}, r.partition.assignment) == 1.0);
            CHECK(r.objective == doctest::Approx(4 * 0.05 * 0.05));
            CHECK(r.converged);
        }
    }
    SUBCASE("k = 1 centers on the Minkowski center") {
        const Dataset data = rows({{0, 1}, {0, 2}, {9, 7}});
        Rng rng(1);
        const ClusteringResult r = mwk_fit(data, 1, Exponent(3.0), InitMethod::mwkpp, exact, rng);
        CHECK(r.centroids.z(0, 0) == doctest::Approx(minkowski_center(std::vector<double>{0, 0, 9}, Exponent(3.0))));
        CHECK(r.centroids.z(0, 1) == doctest::Approx(minkowski_center(std::vector<double>{1, 2, 7}, Exponent(3.0))));
    }
    SUBCASE("one pass is consistent") {
        Rng data_rng(2);
        const Dataset data = testing::random_dataset(data_rng, 60, 4);
        Rng rng(3);
        const FitOptions once{CenterMode::exact, 1, 1};
        const ClusteringResult r = mwk_fit(data, 3, Exponent(1.8), InitMethod::mwkpp, once, rng);
        CHECK(r.iterations == 1);
        CHECK(r.objective_trace.size() == 1);
        CHECK(r.objective == doctest::Approx(mwk_objective(data, r.partition, r.centroids, r.weights, r.p)));
    }
    SUBCASE("reported objective is recomputable") {
        Rng rng(4);
        for (int t = 0; t < 10; ++t) {
            const Dataset data = testing::random_dataset(rng, 80, 5);
            const FitOptions fast{CenterMode::fast, 100, 1};
            const ClusteringResult r = mwk_fit(data, 3, Exponent(1.3 + 0.15 * t), InitMethod::mwkpp, fast, rng);
            CHECK(r.objective ==
                  doctest::Approx(mwk_objective(data, r.partition, r.centroids, r.weights, r.p)).epsilon(1e-9));
        }
    }
    SUBCASE("monotone in exact mode") {
        const testing::Verdict v = testing::objective_monotone(77, 15);
        INFO(v.detail);
        CHECK(v.ok);
    }
    SUBCASE("an empty cluster is reseeded at the farthest point") {
        const Dataset data = rows({{0}, {1}, {2}, {30}});
        Seeding start;
        start.centroids.z = Matrix(3, 1);
        start.centroids.z(0, 0) = 0;
        start.centroids.z(1, 0) = 1000;
        start.centroids.z(2, 0) = 2000;
        start.weights = WeightMatrix::uniform(3, 1);
        const ClusteringResult r = mwk_fit(data, 3, Exponent(2.0), start, exact);
        CHECK(has_note(r.notes, "empty_cluster_reseeded:1"));
        for (std::size_t size : r.partition.cluster_sizes) {
            CHECK(size > 0);
        }
    }
    SUBCASE("k larger than n") {
        Rng rng(1);
        CHECK_THROWS_AS(mwk_fit(rows({{0}, {1}}), 3, Exponent(2.0), InitMethod::mwkpp, exact, rng), Error);
    }
}

TEST_CASE("plain k-means") {
    const Dataset data = rows({{0, 0}, {0, 2}, {10, 0}, {10, 2}});
    Rng rng(6);
    const ClusteringResult r = kmeans_fit(data, 2, FitOptions{}, rng);
    CHECK(ari(std::vector<int>{0, 0, 1, 1}, r.partition.assignment) == 1.0);
    // WCSS = 4 (each point 1 from its mean, squared), divided by m^2 = 4.
    CHECK(r.objective == doctest::Approx(1.0));
    CHECK(r.p.value() == 2.0);
}

TEST_CASE("restarts") {
    Rng data_rng(10);
    const Dataset data = testing::random_dataset(data_rng, 90, 4);
    const Exponent p(1.7);
    const FitOptions fast{CenterMode::fast, 100, 1};

    SUBCASE("a single restart is one fit on the derived seed") {
        const ClusteringResult best = restart_best(data, 3, p, 1, 99, fast);
        Rng rng(restart_seed(99, 0));
        const ClusteringResult single = mwk_fit(data, 3, p, InitMethod::mwkpp, fast, rng);
        CHECK(best.partition.assignment == single.partition.assignment);
        CHECK(best.objective == single.objective);
    }
    SUBCASE("best is no worse than any restart, and deterministic") {
        const ClusteringResult a = restart_best(data, 3, p, 8, 5, fast);
        const ClusteringResult b = restart_best(data, 3, p, 8, 5, fast);
        CHECK(a.partition.assignment == b.partition.assignment);
        CHECK(a.centroids.z == b.centroids.z);
        CHECK(a.weights.w == b.weights.w);
        CHECK(a.objective_trace == b.objective_trace);
        for (const ClusteringResult& r : run_restarts(data, 3, p, 8, 5, InitMethod::mwkpp, fast)) {
            CHECK(a.objective <= r.objective);
        }
    }
    SUBCASE("thread count does not change the result") {
        FitOptions threaded = fast;
        threaded.threads = 4;
        const ClusteringResult a = restart_best(data, 3, p, 6, 12, fast);
        const ClusteringResult b = restart_best(data, 3, p, 6, 12, threaded);
        CHECK(a.partition.assignment == b.partition.assignment);
        CHECK(a.objective == b.objective);
    }
    SUBCASE("observer sees every restart in order") {
        std::vector<std::size_t> seen;
        restart_best(data, 3, p, 5, 1, fast, [&](std::size_t r, const ClusteringResult&) { seen.push_back(r); });
        CHECK(seen == std::vector<std::size_t>{0, 1, 2, 3, 4});
    }
}
