#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "boxbound/geometry.hpp"

namespace boxbound {

// Uniform distribution on [a, b], a < b.
struct UniformInterval {
    double a = 0.0;
    double b = 1.0;
};

// Continuous CDF, linear between strictly increasing knots. values start at 0,
// end at 1 and never decrease; the CDF is 0 left of the first knot and 1 right
// of the last.
struct PiecewiseCdf {
    std::vector<double> knots;
    std::vector<double> values;
};

using Marginal = std::variant<UniformInterval, PiecewiseCdf>;

void validate(const Marginal& marginal);

double cdf(const Marginal& marginal, double x);

// Generalized inverse: smallest x with cdf(x) >= u, for u in [0, 1].
double quantile(const Marginal& marginal, double u);

// Independent coordinates: P(box) = prod_k (F_k(upper_k) - F_k(lower_k)).
class ProductMeasure {
public:
    ProductMeasure() = default;
    explicit ProductMeasure(std::vector<Marginal> marginals);

    // Uniform on the box [lower, upper].
    static ProductMeasure uniform(const std::vector<double>& lower, const std::vector<double>& upper);

    std::size_t dim() const { return marginals_.size(); }
    const std::vector<Marginal>& marginals() const { return marginals_; }

    // Every supported marginal has a continuous CDF.
    bool is_continuous() const { return true; }

private:
    std::vector<Marginal> marginals_;
};

double box_probability(const Box& box, const ProductMeasure& measure);

// Default emptiness test for a measure: strict for continuous marginals.
EmptinessMode default_mode(const ProductMeasure& measure);

}  // namespace boxbound
