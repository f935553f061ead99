#ifndef MWK_RNG_HPP
#define MWK_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <random>

namespace mwk {

/// SplitMix64 finalizer. Used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Deterministic child seed for work item (a, b) of a run seeded with `base`.
/// Independent of evaluation order, so parallel schedules reproduce serial ones.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) noexcept;

/// Seeded random stream. Everything random in the library draws from one of these.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi);
    /// Unbiased integer in [0, n). Requires n > 0.
    std::size_t index(std::size_t n);
    double normal(double mean = 0.0, double stddev = 1.0);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace mwk

#endif
