#include <cmath>
#include <random>

#include "doctest.h"

#include "boxbound/errors.hpp"
#include "boxbound/measure.hpp"
#include "boxbound/oracle.hpp"
#include "support/instances.hpp"

using namespace boxbound;

TEST_CASE("uniform cdf clamps outside the support") {
    const Marginal u = UniformInterval{0, 10};
    CHECK(cdf(u, 4) == doctest::Approx(0.4));
    CHECK(cdf(u, -1) == 0.0);
    CHECK(cdf(u, 11) == 1.0);
}

TEST_CASE("piecewise cdf interpolates linearly") {
    const Marginal identity = PiecewiseCdf{{0, 1}, {0, 1}};
    CHECK(cdf(identity, 0.25) == doctest::Approx(0.25));
    const Marginal kinked = PiecewiseCdf{{0, 1, 3}, {0, 0.5, 1}};
    CHECK(cdf(kinked, 2.0) == doctest::Approx(0.75));
    CHECK(cdf(kinked, -5.0) == 0.0);
    CHECK(cdf(kinked, 9.0) == 1.0);
    CHECK(quantile(kinked, 0.75) == doctest::Approx(2.0));
    CHECK(quantile(kinked, 0.25) == doctest::Approx(0.5));
}

TEST_CASE("quantile inverts cdf on flat pieces from the left") {
    const Marginal flat = PiecewiseCdf{{0, 1, 2, 3}, {0, 0.5, 0.5, 1}};
    CHECK(quantile(flat, 0.5) == doctest::Approx(1.0));
    CHECK(quantile(flat, 0.0) == doctest::Approx(0.0));
    CHECK(quantile(flat, 1.0) == doctest::Approx(3.0));
}

TEST_CASE("invalid marginals are rejected") {
    CHECK_THROWS_AS(validate(Marginal{UniformInterval{1, 1}}), InputError);
    CHECK_THROWS_AS(validate(Marginal{PiecewiseCdf{{0, 0}, {0, 1}}}), InputError);
    CHECK_THROWS_AS(validate(Marginal{PiecewiseCdf{{0, 1}, {0.1, 1}}}), InputError);
    CHECK_THROWS_AS(validate(Marginal{PiecewiseCdf{{0, 1, 2}, {0, 0.7, 0.6}}}), InputError);
    CHECK_THROWS_AS(ProductMeasure(std::vector<Marginal>{}), InputError);
}

TEST_CASE("box probability under uniform measures") {
    const auto m2 = ProductMeasure::uniform({0, 0}, {10, 10});
    CHECK(box_probability(Box{"A1", {5, 6}, {9, 9}}, m2) == doctest::Approx(0.12));
    const auto m3 = ProductMeasure::uniform({0, 0, 0}, {5, 5, 5});
    CHECK(box_probability(Box{"A7", {4, 1, 4}, {5, 2, 5}}, m3) == doctest::Approx(0.008));
    CHECK(box_probability(Box{"pt", {2, 2, 2}, {2, 2, 2}}, m3) == 0.0);
    CHECK_THROWS_AS(box_probability(Box{"x", {0}, {1}}, m3), InputError);
}

TEST_CASE("default emptiness mode is strict for continuous marginals") {
    CHECK(default_mode(ProductMeasure::uniform({0}, {1})) == EmptinessMode::PositiveMeasure);
}

TEST_CASE("property: box probability factorizes and is monotone") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const ProductMeasure measure({UniformInterval{0, 10}, PiecewiseCdf{{-1, 0, 4, 12}, {0, 0.2, 0.9, 1}},
                                  UniformInterval{-5, 5}});
    for (int trial = 0; trial < 300; ++trial) {
        Box b{"b", {}, {}};
        for (std::size_t k = 0; k < 3; ++k) {
            double a = -6 + 18 * u(rng), c = -6 + 18 * u(rng);
            b.lower.push_back(std::min(a, c));
            b.upper.push_back(std::max(a, c));
        }
        double product = 1.0;
        for (std::size_t k = 0; k < 3; ++k)
            product *= cdf(measure.marginals()[k], b.upper[k]) - cdf(measure.marginals()[k], b.lower[k]);
        const double p = box_probability(b, measure);
        CHECK(p == doctest::Approx(product).epsilon(1e-14));
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        Box shrunk = b;
        const std::size_t axis = trial % 3;
        shrunk.upper[axis] = shrunk.lower[axis] + u(rng) * (shrunk.upper[axis] - shrunk.lower[axis]);
        CHECK(box_probability(shrunk, measure) <= p);
    }
}

TEST_CASE("property: box probability agrees with Monte Carlo within 4 standard errors") {
    std::mt19937_64 rng(13);
    const ProductMeasure measure({UniformInterval{0, 10}, PiecewiseCdf{{0, 2, 10}, {0, 0.6, 1}}});
    for (int trial = 0; trial < 20; ++trial) {
        auto inst = boxbound::testing::random_instance(rng, 1, 2);
        Box b = inst.boxes.front();
        b.lower.resize(2, 1.0);
        b.upper.resize(2, 7.0);
        const double exact = box_probability(b, measure);
        const std::vector<Box> one{b};
        const auto est = monte_carlo_union(one, measure, 200'000, 1000 + trial);
        const double se = std::max(est.standard_error, 1e-6);
        CHECK(std::abs(est.estimate - exact) <= 4 * se);
    }
}
