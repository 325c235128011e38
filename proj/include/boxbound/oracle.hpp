#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "boxbound/geometry.hpp"
#include "boxbound/measure.hpp"

namespace boxbound {

// Distribution of the number xi of events that occur: p[i] = P(xi = i).
struct CountDistribution {
    std::vector<double> p;

    std::size_t n_events() const { return p.size() - 1; }
    double at_least(std::size_t r) const;
    double exactly(std::size_t r) const { return r < p.size() ? p[r] : 0.0; }
    double union_probability() const { return at_least(1); }
    // E[C(xi, k)]
    double binomial_moment(std::size_t k) const;
};

inline constexpr std::size_t kInclusionExclusionMaxEvents = 20;
inline constexpr std::size_t kCellOracleMaxEvents = 12;
inline constexpr std::size_t kCellOracleMaxDim = 3;

// Unpruned inclusion-exclusion over all 2^N - 1 subsets.
double full_inclusion_exclusion_union(std::span<const Box> boxes, const ProductMeasure& measure);

// Splits every axis at all box coordinates and credits each cell's exact
// probability to its coverage count. Parallel over first-axis slabs; slab
// partials are combined in slab order so the result is reproducible.
CountDistribution exact_count_distribution(std::span<const Box> boxes, const ProductMeasure& measure);

struct MonteCarloEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t hits = 0;
};

inline constexpr std::size_t kDefaultChunks = 64;

// Hit-or-miss estimate of the union probability by inverse-transform
// sampling. The budget is split into `chunks` streams seeded from
// (seed, chunk index), so the result depends only on (samples, seed, chunks).
MonteCarloEstimate monte_carlo_union(std::span<const Box> boxes, const ProductMeasure& measure,
                                     std::uint64_t samples, std::uint64_t seed,
                                     std::size_t chunks = kDefaultChunks);

namespace serial {

CountDistribution exact_count_distribution(std::span<const Box> boxes, const ProductMeasure& measure);

MonteCarloEstimate monte_carlo_union(std::span<const Box> boxes, const ProductMeasure& measure,
                                     std::uint64_t samples, std::uint64_t seed,
                                     std::size_t chunks = kDefaultChunks);

}  // namespace serial

}  // namespace boxbound
