#include <cmath>
#include <random>

#include "doctest.h"

#include "boxbound/bounding.hpp"
#include "boxbound/errors.hpp"
#include "boxbound/oracle.hpp"
#include "support/instances.hpp"

using namespace boxbound;
using namespace boxbound::testing;

namespace {

constexpr double kTol = 1e-9;

MomentVector moments_of(const std::vector<double>& p, std::size_t m) {
    MomentVector mv;
    mv.n_events = p.size() - 1;
    mv.s.assign(m + 1, 0.0);
    for (std::size_t k = 0; k <= m; ++k)
        for (std::size_t i = k; i < p.size(); ++i)
            mv.s[k] += binomial(i, k) * p[i];
    mv.q = 1.0 - p[0];
    return mv;
}

std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t n) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> p(n + 1);
    double total = 0.0;
    for (double& x : p) {
        x = rng() % 3 == 0 ? 0.0 : e(rng);
        total += x;
    }
    if (total == 0.0) {
        p[0] = 1.0;
        return p;
    }
    for (double& x : p)
        x /= total;
    return p;
}

MomentVector example2_moments(std::size_t m) {
    return binomial_moments(example2_boxes(), example2_measure(), EmptinessMode::PositiveMeasure, m);
}

}  // namespace

TEST_CASE("binomial coefficients are exact") {
    CHECK(binomial(5, 2) == 10.0);
    CHECK(binomial(3, 5) == 0.0);
    CHECK(binomial(60, 30) == 118264581564861424.0);
    CHECK(binomial(300, 4) == 330791175.0);
    CHECK_THROWS_AS(binomial(200, 100), NumericalError);
}

TEST_CASE("union bounds of the 3-d example bracket the exact union") {
    const auto mv = example2_moments(2);
    for (bool p0 : {true, false}) {
        const auto b = union_bounds(mv, 2, p0);
        CHECK(b.lower <= 0.224 + kTol);
        CHECK(b.upper >= 0.224 - kTol);
    }
}

TEST_CASE("single event pins the union") {
    MomentVector mv{1, {1.0, 0.4}, std::nullopt};
    for (bool p0 : {true, false}) {
        const auto b = union_bounds(mv, 1, p0);
        CHECK(b.lower == doctest::Approx(0.4));
        CHECK(b.upper == doctest::Approx(0.4));
    }
    const auto e = exactly_r_bounds(mv, 1, 1);
    CHECK(e.lower == doctest::Approx(0.4));
    CHECK(e.upper == doctest::Approx(0.4));
}

TEST_CASE("order-2 bounds without p0 equal the closed forms") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + trial % 9;
        const auto mv = moments_of(random_distribution(rng, n), 2);
        const double s1 = mv.S(1), s2 = mv.S(2);
        if (s1 <= 0.0)
            continue;
        const double k = 1.0 + std::floor(2.0 * s2 / s1);
        const double dawson_sankoff = 2.0 * s1 / (k + 1.0) - 2.0 * s2 / (k * (k + 1.0));
        const double upper = s1 - 2.0 * s2 / static_cast<double>(n);
        const auto b = union_bounds(mv, 2, false);
        CHECK(std::abs(b.lower - dawson_sankoff) < kTol);
        CHECK(std::abs(b.upper - upper) < kTol);
    }
}

TEST_CASE("at-least-r bounds") {
    const auto mv = example2_moments(2);
    const auto r1 = atleast_r_bounds(mv, 2, 1);
    const auto u = union_bounds(mv, 2, true);
    CHECK(r1.lower == doctest::Approx(u.lower));
    CHECK(r1.upper == doctest::Approx(u.upper));

    const auto r2 = atleast_r_bounds(mv, 2, 2);
    CHECK(r2.lower <= 1.0 / 125 + kTol);
    CHECK(r2.upper >= 1.0 / 125 - kTol);

    std::mt19937_64 rng(41);
    const auto p = random_distribution(rng, 5);
    const auto full = moments_of(p, 5);
    const auto top = atleast_r_bounds(full, 5, 5);
    CHECK(std::abs(top.lower - full.S(5)) < kTol);
    CHECK(std::abs(top.upper - full.S(5)) < kTol);

    CHECK_THROWS_AS(atleast_r_bounds(mv, 2, 0), InputError);
    CHECK_THROWS_AS(atleast_r_bounds(mv, 2, 8), InputError);
    CHECK_THROWS_AS(atleast_r_bounds(mv, 3, 1), InputError);
}

TEST_CASE("exactly-r bounds") {
    std::mt19937_64 rng(43);
    const auto p = random_distribution(rng, 4);
    const auto full = moments_of(p, 4);
    const auto zero = exactly_r_bounds(full, 4, 0);
    CHECK(std::abs(zero.lower - (1.0 - *full.q)) < kTol);
    CHECK(std::abs(zero.upper - (1.0 - *full.q)) < kTol);

    const auto one = exactly_r_bounds(example2_moments(2), 2, 1);
    CHECK(one.lower <= 27.0 / 125 + kTol);
    CHECK(one.upper >= 27.0 / 125 - kTol);
}

TEST_CASE("Q-augmented bounds on the 3-d example are pinned") {
    const auto mv = example2_moments(3);
    CHECK(mv.S(3) == 0.0);
    const auto two = q_atleast_bounds(*mv.q, mv, 2);
    CHECK(std::abs(two.lower - 1.0 / 125) < kTol);
    CHECK(std::abs(two.upper - 1.0 / 125) < kTol);
    const auto one = q_atleast_bounds(*mv.q, mv, 1);
    CHECK(std::abs(one.lower - 28.0 / 125) < kTol);
    CHECK(std::abs(one.upper - 28.0 / 125) < kTol);
    const auto ex1 = q_exactly_bounds(*mv.q, mv, 1);
    CHECK(std::abs(ex1.lower - 27.0 / 125) < kTol);
    CHECK(std::abs(ex1.upper - 27.0 / 125) < kTol);
    CHECK_THROWS_AS(q_exactly_bounds(*mv.q, mv, 0), InputError);
    CHECK_THROWS_AS(q_atleast_bounds(1.5, mv, 1), InputError);
    // Q larger than S_1 cannot be matched by any distribution
    CHECK_THROWS_AS(q_atleast_bounds(0.5, mv, 1), BoundingError);
}

TEST_CASE("rounding overshoot of Q is clamped") {
    MomentVector mv;
    mv.n_events = 2;
    mv.s = {1.0, 2.0, 1.0};
    const auto b = q_atleast_bounds(1.0 + 4e-16, mv, 2, 2);
    CHECK(std::abs(b.lower - 1.0) < kTol);
    CHECK(std::abs(b.upper - 1.0) < kTol);
    CHECK_THROWS_AS(q_atleast_bounds(1.0 + 1e-6, mv, 2, 2), InputError);
}

TEST_CASE("property: Q-augmented bounds are never looser") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 3 + trial % 6;
        const auto mv = moments_of(random_distribution(rng, n), 3);
        const std::size_t r = 1 + rng() % n;
        const auto plain = atleast_r_bounds(mv, 3, r);
        const auto aug = q_atleast_bounds(*mv.q, mv, r, 3);
        CHECK(aug.lower >= plain.lower - kTol);
        CHECK(aug.upper <= plain.upper + kTol);
        const auto plain_e = exactly_r_bounds(mv, 3, r);
        const auto aug_e = q_exactly_bounds(*mv.q, mv, r, 3);
        CHECK(aug_e.lower >= plain_e.lower - kTol);
        CHECK(aug_e.upper <= plain_e.upper + kTol);
    }
}

TEST_CASE("inconsistent moments surface the LP status") {
    MomentVector bad{2, {1.0, 0.5, 0.5}, std::nullopt};
    try {
        union_bounds(bad, 2, true);
        FAIL("expected BoundingError");
    } catch (const BoundingError& e) {
        CHECK(e.status() == LpStatus::Infeasible);
    }
}

TEST_CASE("Hunter-Worsley upper bound") {
    const auto ex = example2_boxes();
    const auto led = enumerate_tuples(ex, build_graph(ex, EmptinessMode::PositiveMeasure),
                                      EmptinessMode::PositiveMeasure, 2, example2_measure());
    const auto pw = pairwise_weights(led);
    CHECK(std::abs(hunter_worsley_upper(29.0 / 125, pw, 7) - 28.0 / 125) < 1e-15);

    CHECK(hunter_worsley_upper(0.9, {}, 3) == 0.9);
    const std::vector<PairWeight> twins{{0, 1, 0.3}};
    CHECK(hunter_worsley_upper(0.6, twins, 2) == doctest::Approx(0.3));

    // triangle: the forest keeps the two heaviest edges
    const std::vector<PairWeight> tri{{0, 1, 0.2}, {1, 2, 0.1}, {0, 2, 0.15}};
    CHECK(hunter_worsley_upper(1.0, tri, 3) == doctest::Approx(1.0 - 0.35));
    // two components
    const std::vector<PairWeight> split{{0, 1, 0.2}, {2, 3, 0.1}};
    CHECK(hunter_worsley_upper(1.0, split, 4) == doctest::Approx(0.7));
    CHECK_THROWS_AS(hunter_worsley_upper(1.0, std::vector<PairWeight>{{0, 0, 0.1}}, 2), InputError);
}

TEST_CASE("Boolean LP") {
    BooleanSystem two{2, 2, {1.0, 0.5, 0.5, 0.25}};
    const auto u = boolean_lp_bounds(two, Target::Union);
    CHECK(u.lower == doctest::Approx(0.75));
    CHECK(u.upper == doctest::Approx(0.75));

    BooleanSystem zero{3, 2, std::vector<double>(8, 0.0)};
    zero.intersection_prob[0] = 1.0;
    const auto z = boolean_lp_bounds(zero, Target::Union);
    CHECK(std::abs(z.lower) < kTol);
    CHECK(std::abs(z.upper) < kTol);

    BooleanSystem bad{2, 2, {1.0, 0.9, 0.9, 0.1}};
    CHECK_THROWS_AS(boolean_lp_bounds(bad, Target::Union), BoundingError);
    BooleanSystem nonmono{2, 2, {1.0, 0.2, 0.5, 0.3}};
    CHECK_THROWS_AS(boolean_lp_bounds(nonmono, Target::Union), InputError);
    BooleanSystem big{13, 1, {}};
    CHECK_THROWS_AS(boolean_lp_bounds(big, Target::Union), InputError);
}

TEST_CASE("Boolean LP on the 2-d example is at least as tight as aggregated moments") {
    const auto ex = example1_boxes();
    const auto mode = EmptinessMode::PositiveMeasure;
    const auto led = enumerate_tuples(ex, build_graph(ex, mode), mode, 5, example1_measure());
    const auto mv = binomial_moments(led, 5, 2);
    const auto agg = union_bounds(mv, 2, false);
    const auto boo = boolean_lp_bounds(make_boolean_system(led, 5, 2), Target::Union);
    CHECK(boo.lower >= agg.lower - kTol);
    CHECK(boo.upper <= agg.upper + kTol);
    CHECK(boo.lower <= 0.72 + kTol);
    CHECK(boo.upper >= 0.72 - kTol);
}
