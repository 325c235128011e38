#include "boxbound/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "boxbound/detail/compensated_sum.hpp"
#include "boxbound/errors.hpp"
#include "boxbound/rng.hpp"

namespace boxbound {

double CountDistribution::at_least(std::size_t r) const {
    detail::CompensatedSum sum;
    for (std::size_t i = r; i < p.size(); ++i)
        sum.add(p[i]);
    return sum.value();
}

double CountDistribution::binomial_moment(std::size_t k) const {
    detail::CompensatedSum sum;
    for (std::size_t i = k; i < p.size(); ++i) {
        double c = 1.0;
        for (std::size_t t = 0; t < k; ++t)
            c = c * static_cast<double>(i - t) / static_cast<double>(t + 1);
        sum.add(std::round(c) * p[i]);
    }
    return sum.value();
}

namespace {

void check_inputs(std::span<const Box> boxes, const ProductMeasure& measure) {
    for (const Box& b : boxes) {
        validate(b);
        if (b.dim() != measure.dim())
            throw InputError(fmt::format("box '{}' is {}-d but the measure is {}-d", b.id, b.dim(),
                                         measure.dim()));
    }
}

void check_cell_caps(std::span<const Box> boxes, const ProductMeasure& measure) {
    if (boxes.size() > kCellOracleMaxEvents)
        throw InputError(fmt::format("cell oracle is capped at {} events, got {}",
                                     kCellOracleMaxEvents, boxes.size()));
    if (measure.dim() > kCellOracleMaxDim)
        throw InputError(fmt::format("cell oracle is capped at dimension {}, got {}",
                                     kCellOracleMaxDim, measure.dim()));
}

// Sorted distinct box coordinates on one axis.
std::vector<double> breakpoints(std::span<const Box> boxes, std::size_t axis) {
    std::vector<double> cuts;
    for (const Box& b : boxes) {
        cuts.push_back(b.lower[axis]);
        cuts.push_back(b.upper[axis]);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

// Per axis: cell probabilities and, per box, which cells it covers. Cell c
// spans (cuts[c-1], cuts[c]) with the outer two cells unbounded.
struct AxisCells {
    std::vector<double> weight;
    std::vector<std::vector<std::uint8_t>> covered;  // [box][cell]
};

AxisCells axis_cells(std::span<const Box> boxes, const Marginal& marginal, std::size_t axis) {
    const std::vector<double> cuts = breakpoints(boxes, axis);
    const std::size_t cells = cuts.size() + 1;
    AxisCells out;
    out.weight.resize(cells);
    double prev = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
        const double next = c < cuts.size() ? cdf(marginal, cuts[c]) : 1.0;
        out.weight[c] = std::max(0.0, next - prev);
        prev = next;
    }
    out.covered.assign(boxes.size(), std::vector<std::uint8_t>(cells, 0));
    for (std::size_t b = 0; b < boxes.size(); ++b)
        for (std::size_t c = 1; c + 1 < cells; ++c)
            out.covered[b][c] = boxes[b].lower[axis] <= cuts[c - 1] && cuts[c] <= boxes[b].upper[axis];
    return out;
}

}  // namespace

double full_inclusion_exclusion_union(std::span<const Box> boxes, const ProductMeasure& measure) {
    check_inputs(boxes, measure);
    if (boxes.size() > kInclusionExclusionMaxEvents)
        throw InputError(fmt::format("full inclusion-exclusion is capped at {} events, got {}",
                                     kInclusionExclusionMaxEvents, boxes.size()));
    const std::size_t n = measure.dim();
    const std::uint64_t subsets = std::uint64_t{1} << boxes.size();
    detail::CompensatedSum q;
    std::vector<double> lo(n), hi(n);
    for (std::uint64_t mask = 1; mask < subsets; ++mask) {
        std::fill(lo.begin(), lo.end(), -INFINITY);
        std::fill(hi.begin(), hi.end(), INFINITY);
        int parity = 0;
        for (std::size_t i = 0; i < boxes.size(); ++i) {
            if (!((mask >> i) & 1U))
                continue;
            ++parity;
            for (std::size_t k = 0; k < n; ++k) {
                lo[k] = std::max(lo[k], boxes[i].lower[k]);
                hi[k] = std::min(hi[k], boxes[i].upper[k]);
            }
        }
        double p = 1.0;
        for (std::size_t k = 0; k < n && p > 0.0; ++k)
            p *= hi[k] > lo[k] ? cdf(measure.marginals()[k], hi[k]) - cdf(measure.marginals()[k], lo[k])
                               : 0.0;
        q.add(parity % 2 == 1 ? p : -p);
    }
    return q.value();
}

CountDistribution exact_count_distribution(std::span<const Box> boxes, const ProductMeasure& measure) {
    check_inputs(boxes, measure);
    check_cell_caps(boxes, measure);
    const std::size_t n = measure.dim();
    const std::size_t nb = boxes.size();

    std::vector<AxisCells> axes;
    for (std::size_t k = 0; k < n; ++k)
        axes.push_back(axis_cells(boxes, measure.marginals()[k], k));

    std::size_t inner = 1;
    for (std::size_t k = 1; k < n; ++k)
        inner *= axes[k].weight.size();
    const auto slabs = static_cast<std::ptrdiff_t>(axes[0].weight.size());

    std::vector<std::vector<double>> partial(static_cast<std::size_t>(slabs),
                                             std::vector<double>(nb + 1, 0.0));
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t s = 0; s < slabs; ++s) {
        const auto slab = static_cast<std::size_t>(s);
        std::vector<std::size_t> idx(n, 0);
        idx[0] = slab;
        for (std::size_t flat = 0; flat < inner; ++flat) {
            std::size_t rest = flat;
            double w = axes[0].weight[slab];
            for (std::size_t k = 1; k < n; ++k) {
                idx[k] = rest % axes[k].weight.size();
                rest /= axes[k].weight.size();
                w *= axes[k].weight[idx[k]];
            }
            if (w == 0.0)
                continue;
            std::size_t count = 0;
            for (std::size_t b = 0; b < nb; ++b) {
                bool in = true;
                for (std::size_t k = 0; k < n && in; ++k)
                    in = axes[k].covered[b][idx[k]] != 0;
                count += in;
            }
            partial[slab][count] += w;
        }
    }

    CountDistribution out{std::vector<double>(nb + 1, 0.0)};
    for (std::size_t i = 0; i <= nb; ++i) {
        detail::CompensatedSum sum;
        for (const auto& slab : partial)
            sum.add(slab[i]);
        out.p[i] = sum.value();
    }
    return out;
}

namespace {

bool inside_any(std::span<const Box> boxes, const std::vector<double>& x) {
    for (const Box& b : boxes) {
        bool in = true;
        for (std::size_t k = 0; k < x.size() && in; ++k)
            in = b.lower[k] <= x[k] && x[k] <= b.upper[k];
        if (in)
            return true;
    }
    return false;
}

std::uint64_t chunk_hits(std::span<const Box> boxes, const ProductMeasure& measure,
                         std::uint64_t draws, std::uint64_t seed, std::size_t chunk) {
    std::mt19937_64 engine = chunk_engine(seed, chunk);
    std::vector<double> x(measure.dim());
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < draws; ++s) {
        for (std::size_t k = 0; k < x.size(); ++k)
            x[k] = quantile(measure.marginals()[k], uniform01(engine));
        hits += inside_any(boxes, x);
    }
    return hits;
}

std::uint64_t chunk_draws(std::uint64_t samples, std::size_t chunks, std::size_t chunk) {
    return samples / chunks + (chunk < samples % chunks ? 1 : 0);
}

MonteCarloEstimate finish(std::uint64_t samples, std::uint64_t hits) {
    MonteCarloEstimate out;
    out.samples = samples;
    out.hits = hits;
    out.estimate = static_cast<double>(hits) / static_cast<double>(samples);
    out.standard_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(samples));
    return out;
}

void check_mc(std::uint64_t samples, std::size_t chunks) {
    if (samples == 0)
        throw InputError("Monte Carlo needs at least one sample");
    if (chunks == 0)
        throw InputError("Monte Carlo needs at least one chunk");
}

}  // namespace

MonteCarloEstimate monte_carlo_union(std::span<const Box> boxes, const ProductMeasure& measure,
                                     std::uint64_t samples, std::uint64_t seed, std::size_t chunks) {
    check_inputs(boxes, measure);
    check_mc(samples, chunks);
    std::uint64_t hits = 0;
    const auto n_chunks = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel for schedule(dynamic) reduction(+ : hits)
    for (std::ptrdiff_t c = 0; c < n_chunks; ++c) {
        const auto chunk = static_cast<std::size_t>(c);
        hits += chunk_hits(boxes, measure, chunk_draws(samples, chunks, chunk), seed, chunk);
    }
    return finish(samples, hits);
}

namespace serial {

CountDistribution exact_count_distribution(std::span<const Box> boxes, const ProductMeasure& measure) {
    check_inputs(boxes, measure);
    check_cell_caps(boxes, measure);
    const std::size_t n = measure.dim();
    std::vector<std::vector<double>> cuts;
    std::vector<std::size_t> extent;
    for (std::size_t k = 0; k < n; ++k) {
        cuts.push_back(breakpoints(boxes, k));
        extent.push_back(cuts.back().size() + 1);
    }
    CountDistribution out{std::vector<double>(boxes.size() + 1, 0.0)};
    std::vector<std::size_t> idx(n, 0);
    for (;;) {
        // Probability of the cell and a representative interior point per axis.
        double w = 1.0;
        std::vector<double> mid(n);
        bool bounded = true;
        for (std::size_t k = 0; k < n; ++k) {
            const auto& c = cuts[k];
            const double lo = idx[k] == 0 ? 0.0 : cdf(measure.marginals()[k], c[idx[k] - 1]);
            const double hi = idx[k] == c.size() ? 1.0 : cdf(measure.marginals()[k], c[idx[k]]);
            w *= std::max(0.0, hi - lo);
            bounded = bounded && idx[k] > 0 && idx[k] < c.size();
            if (bounded)
                mid[k] = 0.5 * (c[idx[k] - 1] + c[idx[k]]);
        }
        std::size_t count = 0;
        if (bounded)
            for (const Box& b : boxes)
                count += inside_any(std::span<const Box>(&b, 1), mid);
        out.p[count] += w;

        std::size_t k = 0;
        while (k < n && ++idx[k] == extent[k])
            idx[k++] = 0;
        if (k == n)
            break;
    }
    return out;
}

MonteCarloEstimate monte_carlo_union(std::span<const Box> boxes, const ProductMeasure& measure,
                                     std::uint64_t samples, std::uint64_t seed, std::size_t chunks) {
    check_inputs(boxes, measure);
    check_mc(samples, chunks);
    std::uint64_t hits = 0;
    for (std::size_t chunk = 0; chunk < chunks; ++chunk)
        hits += chunk_hits(boxes, measure, chunk_draws(samples, chunks, chunk), seed, chunk);
    return finish(samples, hits);
}

}  // namespace serial

}  // namespace boxbound
