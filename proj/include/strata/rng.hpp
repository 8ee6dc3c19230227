#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace strata {

// Seed derivation. Every random stream in the library is keyed by a seed
// derived from its coordinates, never by scheduling order.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept;
std::uint64_t hash_string(std::string_view s) noexcept;

/// mt19937_64 with distribution code of our own, so draws do not depend on
/// the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform integer in [0, bound). bound must be > 0.
    std::size_t below(std::size_t bound);
    /// Uniform double in [0, 1).
    double uniform();
    double normal(double mean = 0.0, double stddev = 1.0);
    /// Index drawn from unnormalized nonnegative weights.
    std::size_t weighted(const std::vector<double>& weights);

private:
    std::mt19937_64 engine_;
};

/// k distinct indices from [0, population), returned in ascending order.
std::vector<std::size_t> sample_indices(std::size_t population, std::size_t k, Rng& rng);

} // namespace strata
