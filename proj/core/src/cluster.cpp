#include "mwk/cluster.hpp"

#include "kernels.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "mwk/error.hpp"
#include "mwk/parallel.hpp"

namespace mwk {

namespace {

void check_k(const Dataset& data, std::size_t k) {
    if (k < 1 || k > data.n()) {
        fail(ErrorKind::input, "k must be in [1, n]; got k=" + std::to_string(k) + ", n=" + std::to_string(data.n()));
    }
}

void check_shapes(const Dataset& data, const CentroidSet& centroids, const WeightMatrix& weights) {
    if (centroids.z.cols() != data.m() || weights.w.cols() != data.m()) {
        fail(ErrorKind::length, "centroid/weight width does not match the number of features");
    }
    if (weights.k() != centroids.k()) {
        fail(ErrorKind::length, "centroid and weight matrices have different numbers of rows");
    }
    if (centroids.k() == 0) {
        fail(ErrorKind::input, "no centroids");
    }
}

void check_partition(const Dataset& data, const Partition& partition) {
    if (partition.assignment.size() != data.n()) {
        fail(ErrorKind::length, "partition covers " + std::to_string(partition.assignment.size()) + " points, dataset has " +
                                    std::to_string(data.n()));
    }
}

// Samples an index with probability proportional to mass[i]. Returns npos when all mass is zero.
std::size_t sample_proportional(std::span<const double> mass, Rng& rng) {
    const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    if (!(total > 0.0)) {
        return std::numeric_limits<std::size_t>::max();
    }
    const double target = rng.uniform() * total;
    double running = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
        if (mass[i] > 0.0) {
            running += mass[i];
            last_positive = i;
            if (running > target) {
                return i;
            }
        }
    }
    return last_positive;
}

/*
 * Generic D^2-style seeding: first point uniform, then each next point drawn with
 * probability proportional to `dist(i, chosen)` minimized over chosen centroids.
 */
template <class Dist>
CentroidSet seed_by_distance(const Dataset& data, std::size_t k, Rng& rng, Dist&& dist,
                             std::vector<std::string>& notes) {
    const std::size_t n = data.n();
    CentroidSet out{Matrix(k, data.m())};
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());

    std::size_t pick = rng.index(n);
    for (std::size_t l = 0;; ++l) {
        const auto src = data.values.row(pick);
        std::copy(src.begin(), src.end(), out.z.row(l).begin());
        if (l + 1 == k) {
            break;
        }
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], dist(data.values.row(i), out.z.row(l)));
        }
        pick = sample_proportional(nearest, rng);
        if (pick == std::numeric_limits<std::size_t>::max()) {
            // All remaining mass sits on already-chosen points: fall back to uniform draws.
            notes.emplace_back("seeding_with_replacement");
            pick = rng.index(n);
        }
    }
    return out;
}

struct ClusterMembers {
    std::vector<std::vector<std::size_t>> members;
};

ClusterMembers members_of(const Partition& partition) {
    ClusterMembers out;
    out.members.resize(partition.k());
    for (std::size_t l = 0; l < partition.k(); ++l) {
        out.members[l].reserve(partition.cluster_sizes[l]);
    }
    for (std::size_t i = 0; i < partition.assignment.size(); ++i) {
        out.members[static_cast<std::size_t>(partition.assignment[i])].push_back(i);
    }
    return out;
}

double center_of(std::vector<double>& values, Exponent p, CenterMode mode) {
    if (mode == CenterMode::fast) {
        return minkowski_center_fast(values, p);
    }
    if (p.value() == 2.0) {
        // The exact minimizer of the squared loss is the mean.
        return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    }
    return minkowski_center(values, p);
}

double objective_from_dispersion(const Matrix& dispersion, const WeightMatrix& weights, Exponent p) {
    double total = 0.0;
    for (std::size_t l = 0; l < dispersion.rows(); ++l) {
        for (std::size_t v = 0; v < dispersion.cols(); ++v) {
            const double w = weights.w(l, v);
            if (w > 0.0) {
                total += abs_pow(w, p.value()) * dispersion(l, v);
            }
        }
    }
    return total;
}

// Alternating minimization shared by MWK and plain k-means (weights frozen).
ClusteringResult fit_loop(const Dataset& data, std::size_t k, Exponent p, const Seeding& start,
                          const FitOptions& options, std::uint64_t seed, bool learn_weights) {
    check_k(data, k);
    if (options.max_iter < 1) {
        fail(ErrorKind::input, "max_iter must be >= 1");
    }
    if (start.centroids.k() != k) {
        fail(ErrorKind::length, "initial centroid count does not match k");
    }
    check_shapes(data, start.centroids, start.weights);

    ClusteringResult result;
    result.p = p;
    result.seed = seed;
    result.notes = start.notes;

    CentroidSet centroids = start.centroids;
    WeightMatrix weights = start.weights;
    Partition previous;
    bool have_previous = false;

    for (int pass = 1; pass <= options.max_iter; ++pass) {
        Partition partition = mwk_assign(data, centroids, weights, p);
        if (have_previous && partition.assignment == previous.assignment) {
            result.converged = true;
            break;
        }
        CentroidUpdate update = mwk_update_centroids(data, partition, p, options.mode, centroids, weights);
        for (std::size_t l : update.reseeded) {
            result.notes.push_back("empty_cluster_reseeded:" + std::to_string(l));
        }
        centroids = std::move(update.centroids);
        const Matrix dispersion = dispersion_matrix(data, partition, centroids, p);
        if (learn_weights) {
            for (std::size_t l = 0; l < k; ++l) {
                weights_from_dispersion(dispersion.row(l), p, weights.w.row(l), options.regularization);
            }
        }
        result.objective_trace.push_back(objective_from_dispersion(dispersion, weights, p));
        result.iterations = pass;
        previous = std::move(partition);
        have_previous = true;
    }

    result.partition = std::move(previous);
    result.centroids = std::move(centroids);
    result.weights = std::move(weights);
    result.objective = result.objective_trace.back();
    return result;
}

}  // namespace

WeightMatrix WeightMatrix::uniform(std::size_t k, std::size_t m) {
    return WeightMatrix{Matrix(k, m, 1.0 / static_cast<double>(m))};
}

Partition Partition::from_assignment(std::vector<int> assignment, std::size_t k) {
    Partition out;
    out.cluster_sizes.assign(k, 0);
    for (int a : assignment) {
        if (a < 0 || static_cast<std::size_t>(a) >= k) {
            fail(ErrorKind::input, "cluster label " + std::to_string(a) + " outside [0, " + std::to_string(k) + ")");
        }
        ++out.cluster_sizes[static_cast<std::size_t>(a)];
    }
    out.assignment = std::move(assignment);
    return out;
}

bool weights_from_dispersion(std::span<const double> dispersion, Exponent p, std::span<double> out,
                             Regularization regularization) {
    const std::size_t m = dispersion.size();
    if (out.size() != m || m == 0) {
        fail(ErrorKind::length, "weight row and dispersion row lengths differ");
    }
    const double mean = std::accumulate(dispersion.begin(), dispersion.end(), 0.0) / static_cast<double>(m);
    if (!(mean > 0.0)) {
        std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(m));
        return true;
    }
    const bool has_zero = std::find(dispersion.begin(), dispersion.end(), 0.0) != dispersion.end();
    const double shift = regularization == Regularization::always || has_zero ? mean : 0.0;
    const double e = p.ratio_exponent();
    for (std::size_t v = 0; v < m; ++v) {
        const double dv = dispersion[v] + shift;
        double denom = 0.0;
        for (std::size_t u = 0; u < m; ++u) {
            denom += std::pow(dv / (dispersion[u] + shift), e);
        }
        out[v] = 1.0 / denom;
    }
    return false;
}

Seeding kmeanspp_init(const Dataset& data, std::size_t k, Rng& rng) {
    check_k(data, k);
    Seeding out;
    out.centroids = seed_by_distance(
        data, k, rng,
        [](std::span<const double> x, std::span<const double> z) {
            double s = 0.0;
            for (std::size_t v = 0; v < x.size(); ++v) {
                const double d = x[v] - z[v];
                s += d * d;
            }
            return s;
        },
        out.notes);
    out.weights = WeightMatrix::uniform(k, data.m());
    return out;
}

Seeding random_init(const Dataset& data, std::size_t k, Rng& rng) {
    check_k(data, k);
    // Partial Fisher-Yates over row indices.
    std::vector<std::size_t> order(data.n());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Seeding out;
    out.centroids.z = Matrix(k, data.m());
    for (std::size_t l = 0; l < k; ++l) {
        const std::size_t j = l + rng.index(data.n() - l);
        std::swap(order[l], order[j]);
        const auto src = data.values.row(order[l]);
        std::copy(src.begin(), src.end(), out.centroids.z.row(l).begin());
    }
    out.weights = WeightMatrix::uniform(k, data.m());
    return out;
}

GlobalWeights mwkpp_global_weights(const Dataset& data, Exponent p) {
    if (data.n() == 0 || data.m() == 0) {
        fail(ErrorKind::input, "empty dataset");
    }
    GlobalWeights out;
    out.center.resize(data.m());
    out.dispersion.resize(data.m());
    out.weights.resize(data.m());
    std::vector<double> raw(data.m());
    for (std::size_t v = 0; v < data.m(); ++v) {
        const std::vector<double> column = data.values.column(v);
        out.center[v] = minkowski_center(column, p);
        raw[v] = feature_dispersion(column, out.center[v], p);
    }
    const double mean = std::accumulate(raw.begin(), raw.end(), 0.0) / static_cast<double>(raw.size());
    for (std::size_t v = 0; v < data.m(); ++v) {
        out.dispersion[v] = raw[v] + mean;
    }
    out.degenerate = weights_from_dispersion(raw, p, out.weights);
    return out;
}

Seeding mwkpp_init(const Dataset& data, std::size_t k, Exponent p, Rng& rng) {
    return mwkpp_init(data, k, p, mwkpp_global_weights(data, p), rng);
}

Seeding mwkpp_init(const Dataset& data, std::size_t k, Exponent p, const GlobalWeights& global, Rng& rng) {
    check_k(data, k);
    if (global.weights.size() != data.m()) {
        fail(ErrorKind::length, "global weights do not match the number of features");
    }
    Seeding out;
    if (global.degenerate) {
        out.notes.emplace_back("degenerate_dispersion");
    }
    const std::vector<double>& w = global.weights;
    out.centroids = seed_by_distance(
        data, k, rng,
        [&](std::span<const double> x, std::span<const double> z) {
            return detail::weighted_pow_distance(x.data(), z.data(), w.data(), x.size(), p.value());
        },
        out.notes);
    out.weights.w = Matrix(k, data.m());
    for (std::size_t l = 0; l < k; ++l) {
        std::copy(w.begin(), w.end(), out.weights.w.row(l).begin());
    }
    return out;
}

Partition mwk_assign(const Dataset& data, const CentroidSet& centroids, const WeightMatrix& weights, Exponent p) {
    check_shapes(data, centroids, weights);
    const std::size_t k = centroids.k();
    const std::size_t m = data.m();
    std::vector<int> assignment(data.n());
    const std::size_t n = data.n();
    // Column-major pass: one contiguous sweep over the points per (cluster, feature).
    std::vector<double> columns(n * m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t v = 0; v < m; ++v) {
            columns[v * n + i] = data.values(i, v);
        }
    }
    std::vector<double> dist(k * n, 0.0);
    for (std::size_t l = 0; l < k; ++l) {
        for (std::size_t v = 0; v < m; ++v) {
            const double w = weights.w(l, v);
            if (w > 0.0) {
                detail::accumulate_column(&columns[v * n], n, centroids.z(l, v), abs_pow(w, p.value()), p.value(),
                                          &dist[l * n]);
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double best = dist[i];
        int best_l = 0;
        for (std::size_t l = 1; l < k; ++l) {
            if (dist[l * n + i] < best) {
                best = dist[l * n + i];
                best_l = static_cast<int>(l);
            }
        }
        assignment[i] = best_l;
    }
    return Partition::from_assignment(std::move(assignment), k);
}

Matrix dispersion_matrix(const Dataset& data, const Partition& partition, const CentroidSet& centroids, Exponent p) {
    check_partition(data, partition);
    if (centroids.z.cols() != data.m() || centroids.k() != partition.k()) {
        fail(ErrorKind::length, "centroids do not match the partition or dataset");
    }
    Matrix out(centroids.k(), data.m());
    for (std::size_t i = 0; i < data.n(); ++i) {
        const auto l = static_cast<std::size_t>(partition.assignment[i]);
        detail::accumulate_abs_pow(data.values.row(i).data(), centroids.z.row(l).data(), out.row(l).data(), data.m(),
                                   p.value());
    }
    return out;
}

CentroidUpdate mwk_update_centroids(const Dataset& data, const Partition& partition, Exponent p, CenterMode mode,
                                    const CentroidSet& current, const WeightMatrix& weights) {
    check_partition(data, partition);
    const std::size_t k = partition.k();
    const ClusterMembers groups = members_of(partition);
    CentroidUpdate out;
    out.centroids.z = Matrix(k, data.m());
    std::vector<double> buffer;
    for (std::size_t l = 0; l < k; ++l) {
        const auto& members = groups.members[l];
        if (members.empty()) {
            out.reseeded.push_back(l);
            continue;
        }
        for (std::size_t v = 0; v < data.m(); ++v) {
            buffer.clear();
            for (std::size_t i : members) {
                buffer.push_back(data.values(i, v));
            }
            out.centroids.z(l, v) = center_of(buffer, p, mode);
        }
    }
    if (out.reseeded.empty()) {
        return out;
    }

    check_shapes(data, current, weights);
    if (current.k() != k) {
        fail(ErrorKind::length, "current centroids do not match the partition");
    }
    std::vector<double> far(data.n());
    for (std::size_t i = 0; i < data.n(); ++i) {
        const auto l = static_cast<std::size_t>(partition.assignment[i]);
        far[i] = weighted_minkowski_distance(data.values.row(i), current.z.row(l), weights.w.row(l), p);
    }
    for (std::size_t l : out.reseeded) {
        const auto it = std::max_element(far.begin(), far.end());
        const auto i = static_cast<std::size_t>(it - far.begin());
        const auto src = data.values.row(i);
        std::copy(src.begin(), src.end(), out.centroids.z.row(l).begin());
        *it = -1.0;
    }
    return out;
}

CentroidSet mwk_update_centroids(const Dataset& data, const Partition& partition, Exponent p, CenterMode mode) {
    for (std::size_t l = 0; l < partition.k(); ++l) {
        if (partition.cluster_sizes[l] == 0) {
            fail(ErrorKind::input, "cluster " + std::to_string(l) + " is empty");
        }
    }
    const CentroidSet unused{Matrix(partition.k(), data.m())};
    return mwk_update_centroids(data, partition, p, mode, unused, WeightMatrix::uniform(partition.k(), data.m()))
        .centroids;
}

WeightMatrix mwk_update_weights(const Dataset& data, const Partition& partition, const CentroidSet& centroids,
                                Exponent p, Regularization regularization) {
    const Matrix dispersion = dispersion_matrix(data, partition, centroids, p);
    WeightMatrix out{Matrix(centroids.k(), data.m())};
    for (std::size_t l = 0; l < centroids.k(); ++l) {
        weights_from_dispersion(dispersion.row(l), p, out.w.row(l), regularization);
    }
    return out;
}

double mwk_objective(const Dataset& data, const Partition& partition, const CentroidSet& centroids,
                     const WeightMatrix& weights, Exponent p) {
    check_partition(data, partition);
    check_shapes(data, centroids, weights);
    double total = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) {
        const auto l = static_cast<std::size_t>(partition.assignment[i]);
        for (std::size_t v = 0; v < data.m(); ++v) {
            total += abs_pow(weights.w(l, v), p.value()) * abs_pow(std::abs(data.values(i, v) - centroids.z(l, v)), p.value());
        }
    }
    return total;
}

ClusteringResult mwk_fit(const Dataset& data, std::size_t k, Exponent p, const Seeding& start,
                         const FitOptions& options, std::uint64_t seed) {
    return fit_loop(data, k, p, start, options, seed, true);
}

ClusteringResult mwk_fit(const Dataset& data, std::size_t k, Exponent p, InitMethod init, const FitOptions& options,
                         Rng& rng) {
    switch (init) {
    case InitMethod::kmeanspp:
        return mwk_fit(data, k, p, kmeanspp_init(data, k, rng), options, rng.seed());
    case InitMethod::random:
        return mwk_fit(data, k, p, random_init(data, k, rng), options, rng.seed());
    case InitMethod::mwkpp:
        break;
    }
    return mwk_fit(data, k, p, mwkpp_init(data, k, p, rng), options, rng.seed());
}

ClusteringResult kmeans_fit(const Dataset& data, std::size_t k, const FitOptions& options, Rng& rng) {
    FitOptions euclid = options;
    euclid.mode = CenterMode::exact;
    return fit_loop(data, k, Exponent(2.0), kmeanspp_init(data, k, rng), euclid, rng.seed(), false);
}

std::uint64_t restart_seed(std::uint64_t base_seed, std::size_t restart) noexcept {
    return derive_seed(base_seed, restart);
}

std::vector<ClusteringResult> run_restarts(const Dataset& data, std::size_t k, Exponent p, std::size_t restarts,
                                           std::uint64_t base_seed, InitMethod init, const FitOptions& options) {
    if (restarts < 1) {
        fail(ErrorKind::input, "restarts must be >= 1");
    }
    check_k(data, k);
    std::vector<ClusteringResult> results(restarts);
    if (init == InitMethod::mwkpp) {
        // The global weights do not depend on the random stream; compute them once.
        const GlobalWeights global = mwkpp_global_weights(data, p);
        parallel_for(restarts, options.threads, [&](std::size_t r) {
            Rng rng(restart_seed(base_seed, r));
            results[r] = mwk_fit(data, k, p, mwkpp_init(data, k, p, global, rng), options, rng.seed());
        });
    } else {
        parallel_for(restarts, options.threads, [&](std::size_t r) {
            Rng rng(restart_seed(base_seed, r));
            results[r] = mwk_fit(data, k, p, init, options, rng);
        });
    }
    return results;
}

ClusteringResult restart_best(const Dataset& data, std::size_t k, Exponent p, std::size_t restarts,
                              std::uint64_t base_seed, const FitOptions& options, const RestartObserver& observer) {
    std::vector<ClusteringResult> results = run_restarts(data, k, p, restarts, base_seed, InitMethod::mwkpp, options);
    std::size_t best = 0;
    for (std::size_t r = 0; r < results.size(); ++r) {
        if (observer) {
            observer(r, results[r]);
        }
        if (results[r].objective < results[best].objective) {
            best = r;
        }
    }
    return std::move(results[best]);
}

}  // namespace mwk
