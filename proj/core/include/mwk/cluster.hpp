#ifndef MWK_CLUSTER_HPP
#define MWK_CLUSTER_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mwk/dataset.hpp"
#include "mwk/minkowski.hpp"
#include "mwk/rng.hpp"

/**
 * @file cluster.hpp
 * @brief Minkowski weighted k-means: seeding, alternating minimization, restarts.
 *
 * The objective minimized is
 *   W_p(S, Z, w) = sum_l sum_{i in S_l} sum_v w_lv^p |x_iv - z_lv|^p
 * subject to every weight row lying on the probability simplex.
 */

namespace mwk {

/// k x m matrix of cluster centers.
struct CentroidSet {
    Matrix z;

    std::size_t k() const noexcept { return z.rows(); }
};

/// k x m row-stochastic matrix of per-cluster feature weights.
struct WeightMatrix {
    Matrix w;

    std::size_t k() const noexcept { return w.rows(); }
    static WeightMatrix uniform(std::size_t k, std::size_t m);
};

/// Hard assignment of n points to k clusters.
struct Partition {
    std::vector<int> assignment;
    std::vector<std::size_t> cluster_sizes;

    std::size_t k() const noexcept { return cluster_sizes.size(); }
    /// Checks every label is in [0, k) and computes the sizes.
    static Partition from_assignment(std::vector<int> assignment, std::size_t k);
};

enum class InitMethod {
    kmeanspp,  ///< k-means++ (squared Euclidean sampling), uniform weights
    mwkpp,     ///< relevance-aware MWK++ seeding with global dispersion weights
    random,    ///< k distinct points uniformly at random, uniform weights
};

/// Initial centroids and weights, plus any degeneracy notes raised while seeding.
struct Seeding {
    CentroidSet centroids;
    WeightMatrix weights;
    std::vector<std::string> notes;
};

/// When the additive row-mean term enters the weight formula during fitting.
enum class Regularization {
    always,           ///< every row, every update
    when_degenerate,  ///< only rows with a zero dispersion; the objective then never increases in exact mode
};

struct FitOptions {
    CenterMode mode = CenterMode::exact;
    int max_iter = 100;
    /// Workers used by the restart and grid drivers. Results never depend on it.
    unsigned threads = 1;
    Regularization regularization = Regularization::always;
};

struct ClusteringResult {
    Partition partition;
    CentroidSet centroids;
    WeightMatrix weights;
    Exponent p{2.0};
    double objective = 0.0;
    /// Number of assign/update passes performed.
    int iterations = 0;
    bool converged = false;
    std::uint64_t seed = 0;
    /// Objective after each pass, in order.
    std::vector<double> objective_trace;
    std::vector<std::string> notes;
};

/// Global feature weights computed by MWK++ before sampling centroids.
struct GlobalWeights {
    std::vector<double> center;
    /// Regularized dispersions (raw dispersion plus their mean).
    std::vector<double> dispersion;
    std::vector<double> weights;
    bool degenerate = false;
};

/**
 * Fills `out` with w_v = 1 / sum_u (D'_v / D'_u)^(1/(p-1)). D' = D + mean(D) when
 * regularizing (always, or when some D_v is zero), otherwise D' = D.
 * When every dispersion is zero the row is uniform and the function returns true.
 */
bool weights_from_dispersion(std::span<const double> dispersion, Exponent p, std::span<double> out,
                             Regularization regularization = Regularization::always);

Seeding kmeanspp_init(const Dataset& data, std::size_t k, Rng& rng);
Seeding random_init(const Dataset& data, std::size_t k, Rng& rng);

GlobalWeights mwkpp_global_weights(const Dataset& data, Exponent p);
Seeding mwkpp_init(const Dataset& data, std::size_t k, Exponent p, Rng& rng);
/// Same as above with the rng-independent global weights already computed.
Seeding mwkpp_init(const Dataset& data, std::size_t k, Exponent p, const GlobalWeights& global, Rng& rng);

/// Nearest centroid under each cluster's weighted distance; ties go to the lowest index.
Partition mwk_assign(const Dataset& data, const CentroidSet& centroids, const WeightMatrix& weights, Exponent p);

/// D_lv = sum_{i in S_l} |x_iv - z_lv|^p. Rows of empty clusters are zero.
Matrix dispersion_matrix(const Dataset& data, const Partition& partition, const CentroidSet& centroids, Exponent p);

struct CentroidUpdate {
    CentroidSet centroids;
    /// Clusters that were empty and got re-seeded at a far point.
    std::vector<std::size_t> reseeded;
};

/**
 * Per-cluster per-feature Minkowski centers. An empty cluster is re-seeded at the
 * point farthest from its current centroid (weighted distance, lowest index on ties).
 */
CentroidUpdate mwk_update_centroids(const Dataset& data, const Partition& partition, Exponent p, CenterMode mode,
                                    const CentroidSet& current, const WeightMatrix& weights);

/// As above; throws if a cluster is empty since there is nothing to re-seed from.
CentroidSet mwk_update_centroids(const Dataset& data, const Partition& partition, Exponent p, CenterMode mode);

/// Optimal weights for the current dispersions.
WeightMatrix mwk_update_weights(const Dataset& data, const Partition& partition, const CentroidSet& centroids,
                                Exponent p, Regularization regularization = Regularization::always);

double mwk_objective(const Dataset& data, const Partition& partition, const CentroidSet& centroids,
                     const WeightMatrix& weights, Exponent p);

/// Alternates assign, centroid update and weight update from a given start until the
/// assignment repeats or `max_iter` passes have run.
ClusteringResult mwk_fit(const Dataset& data, std::size_t k, Exponent p, const Seeding& start,
                         const FitOptions& options, std::uint64_t seed = 0);

ClusteringResult mwk_fit(const Dataset& data, std::size_t k, Exponent p, InitMethod init, const FitOptions& options,
                         Rng& rng);

/// Plain k-means (Lloyd) with k-means++ seeding. The result carries uniform weights
/// and p = 2, so `objective` is the Euclidean WCSS divided by m^2.
ClusteringResult kmeans_fit(const Dataset& data, std::size_t k, const FitOptions& options, Rng& rng);

/// Seed of restart r under base seed `base_seed`.
std::uint64_t restart_seed(std::uint64_t base_seed, std::size_t restart) noexcept;

using RestartObserver = std::function<void(std::size_t restart, const ClusteringResult&)>;

/// Every restart's result, in restart order.
std::vector<ClusteringResult> run_restarts(const Dataset& data, std::size_t k, Exponent p, std::size_t restarts,
                                           std::uint64_t base_seed, InitMethod init, const FitOptions& options);

/**
 * Runs MWK++-seeded MWK `restarts` times and returns the lowest-objective run
 * (lowest restart index on ties). The observer, if set, sees every run in restart order.
 */
ClusteringResult restart_best(const Dataset& data, std::size_t k, Exponent p, std::size_t restarts,
                              std::uint64_t base_seed, const FitOptions& options, const RestartObserver& observer = {});

}  // namespace mwk

#endif
