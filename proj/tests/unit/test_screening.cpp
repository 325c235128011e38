#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "doctest.h"

#include "boxbound/errors.hpp"
#include "boxbound/oracle.hpp"
#include "boxbound/screening.hpp"
#include "support/instances.hpp"

using namespace boxbound;
using namespace boxbound::testing;

namespace {

using Tuple = std::vector<std::size_t>;

std::set<Tuple> tuples_of(const TupleLedger& ledger, std::size_t k) {
    std::set<Tuple> out;
    if (k <= ledger.max_order())
        for (const auto& e : ledger.order(k))
            out.insert(e.members);
    return out;
}

// Every subset tested directly with the coordinate test, no graph involved.
std::vector<std::set<Tuple>> brute_force_tuples(const std::vector<Box>& boxes, EmptinessMode mode) {
    std::vector<std::set<Tuple>> by_order(boxes.size() + 1);
    for (std::uint32_t mask = 1; mask < (1U << boxes.size()); ++mask) {
        std::vector<Box> sel;
        Tuple members;
        for (std::size_t i = 0; i < boxes.size(); ++i)
            if (mask >> i & 1U) {
                sel.push_back(boxes[i]);
                members.push_back(i);
            }
        if (sel.size() == 1 || is_nonempty(intersect(sel), mode))
            by_order[sel.size()].insert(members);
    }
    return by_order;
}

TupleLedger full_ledger(const std::vector<Box>& boxes, const ProductMeasure& m, EmptinessMode mode) {
    return enumerate_tuples(boxes, build_graph(boxes, mode), mode, boxes.size(), m);
}

}  // namespace

TEST_CASE("graph of the 2-d example drops exactly A1A3 and A1A5") {
    const auto g = build_graph(example1_boxes(), EmptinessMode::PositiveMeasure);
    CHECK(g.edge_count() == 8);
    CHECK_FALSE(g.adjacent(0, 2));
    CHECK_FALSE(g.adjacent(0, 4));
    CHECK(g.adjacent(3, 1));
    CHECK(clique_counts(g) == std::vector<std::uint64_t>{1, 5, 8, 5, 1});
    CHECK(clique_number(g) == 4);
}

TEST_CASE("graph of the 3-d example has the single edge A2A7") {
    const auto g = build_graph(example2_boxes(), EmptinessMode::PositiveMeasure);
    using E = std::pair<std::size_t, std::size_t>;
    CHECK(g.edges() == std::vector<E>{{1, 6}});
    CHECK(clique_number(g) == 2);
    // Closed mode also keeps the touching pairs
    CHECK(build_graph(example2_boxes(), EmptinessMode::Closed).edge_count() > 1);
}

TEST_CASE("graph edge cases") {
    const std::vector<Box> one{{"B", {0}, {1}}};
    CHECK(build_graph(one, EmptinessMode::Closed).edge_count() == 0);
    CHECK(clique_number(build_graph(std::vector<Box>{}, EmptinessMode::Closed)) == 0);
    const std::vector<Box> mixed{{"a", {0}, {1}}, {"b", {0, 0}, {1, 1}}};
    CHECK_THROWS_AS(build_graph(mixed, EmptinessMode::Closed), InputError);
}

TEST_CASE("DOT export lists vertices by id and the edges") {
    const auto boxes = example2_boxes();
    const std::string dot = to_dot(build_graph(boxes, EmptinessMode::PositiveMeasure), boxes);
    CHECK(dot.find("\"A2\" -- \"A7\";") != std::string::npos);
    CHECK(dot.find("\"A4\";") != std::string::npos);
    CHECK(std::count(dot.begin(), dot.end(), '-') == 2);
}

TEST_CASE("tuple enumeration on the 2-d example") {
    const auto led = full_ledger(example1_boxes(), example1_measure(), EmptinessMode::PositiveMeasure);
    CHECK(tuples_of(led, 3) == std::set<Tuple>{{0, 1, 3}, {1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}});
    CHECK(tuples_of(led, 4) == std::set<Tuple>{{1, 2, 3, 4}});
    CHECK(led.order(4).front().box.lower == std::vector<double>{3, 4});
    CHECK(led.order(4).front().box.upper == std::vector<double>{4, 5});
    CHECK(led.order(4).front().box.id == "A2A3A4A5");
    CHECK(led.max_order() == 4);
    CHECK(tuples_of(led, 5).empty());
    CHECK(led.complete);
}

TEST_CASE("tuple enumeration on the 3-d example stops at pairs") {
    const auto led = full_ledger(example2_boxes(), example2_measure(), EmptinessMode::PositiveMeasure);
    CHECK(led.max_order() == 2);
    CHECK(tuples_of(led, 3).empty());
}

TEST_CASE("max order is clamped and truncation is flagged") {
    const auto boxes = example1_boxes();
    const auto g = build_graph(boxes, EmptinessMode::PositiveMeasure);
    const auto led = enumerate_tuples(boxes, g, EmptinessMode::PositiveMeasure, 99, example1_measure());
    CHECK(led.max_order() == 4);
    const auto cut = enumerate_tuples(boxes, g, EmptinessMode::PositiveMeasure, 2, example1_measure());
    CHECK(cut.max_order() == 2);
    CHECK_FALSE(cut.complete);
    CHECK_THROWS_AS(screened_union(cut, boxes.size()), InputError);
}

TEST_CASE("screened union of the worked examples") {
    // Q values frozen from an independent unit-cell count over the integer grids.
    const auto r1 = screened_union(example1_boxes(), example1_measure(), EmptinessMode::PositiveMeasure);
    CHECK(r1.terms_used == 19);
    CHECK(r1.terms_full == 31);
    CHECK(std::abs(r1.q - 0.72) < 1e-12);

    const auto r2 = screened_union(example2_boxes(), example2_measure(), EmptinessMode::PositiveMeasure);
    CHECK(r2.terms_used == 8);
    CHECK(r2.terms_full == 127);
    CHECK(std::abs(r2.q - 28.0 / 125.0) < 1e-12);

    const std::vector<Box> one{{"B", {1, 1}, {3, 2}}};
    const auto r3 = screened_union(one, example1_measure(), EmptinessMode::PositiveMeasure);
    CHECK(r3.terms_used == 1);
    CHECK(r3.q == doctest::Approx(0.02));
}

TEST_CASE("term count saturates beyond 63 events") {
    CHECK(full_term_count(0) == 0);
    CHECK(full_term_count(63) == (std::uint64_t{1} << 63) - 1);
    CHECK(full_term_count(64) == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("binomial moments of the worked examples") {
    const auto m2 = binomial_moments(example2_boxes(), example2_measure(), EmptinessMode::PositiveMeasure, 2);
    CHECK(m2.S(0) == 1.0);
    CHECK(std::abs(m2.S(1) - 29.0 / 125.0) < 1e-12);
    CHECK(std::abs(m2.S(2) - 1.0 / 125.0) < 1e-12);
    REQUIRE(m2.q.has_value());
    CHECK(std::abs(*m2.q - 28.0 / 125.0) < 1e-12);

    const auto m1 = binomial_moments(example1_boxes(), example1_measure(), EmptinessMode::PositiveMeasure, 4);
    CHECK(std::abs(m1.S(1) - 1.11) < 1e-12);
    CHECK(std::abs(m1.S(2) - 0.49) < 1e-12);
    CHECK(std::abs(m1.S(3) - 0.11) < 1e-12);
    CHECK(std::abs(m1.S(4) - 0.01) < 1e-12);

    const auto none = binomial_moments(std::vector<Box>{}, example1_measure(), EmptinessMode::PositiveMeasure, 2);
    CHECK(none.n_events == 0);
    CHECK(none.S(1) == 0.0);
    CHECK(none.S(2) == 0.0);
    CHECK(none.q.value() == 0.0);
}

TEST_CASE("property: parallel and serial pair screening agree") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        auto inst = random_instance(rng, 40, 4);
        for (auto mode : {EmptinessMode::Closed, EmptinessMode::PositiveMeasure})
            CHECK(build_graph(inst.boxes, mode) == serial::build_graph(inst.boxes, mode));
    }
}

TEST_CASE("property: clique extension equals direct subset testing (Helly)") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 150; ++trial) {
        auto inst = random_instance(rng, 12, 4);
        for (auto mode : {EmptinessMode::Closed, EmptinessMode::PositiveMeasure}) {
            const auto led = full_ledger(inst.boxes, inst.measure, mode);
            const auto brute = brute_force_tuples(inst.boxes, mode);
            for (std::size_t k = 1; k <= inst.boxes.size(); ++k)
                CHECK(tuples_of(led, k) == brute[k]);
            // ledger order-k entries are the k-cliques of the graph
            const auto counts = clique_counts(build_graph(inst.boxes, mode));
            for (std::size_t k = 1; k < counts.size(); ++k)
                CHECK(counts[k] == tuples_of(led, k).size());
        }
    }
}

TEST_CASE("property: pruned tuples carry zero probability; ledger is hereditary") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 80; ++trial) {
        auto inst = random_instance(rng, 10, 3);
        const auto led = full_ledger(inst.boxes, inst.measure, EmptinessMode::PositiveMeasure);
        const std::size_t n = inst.boxes.size();
        for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
            std::vector<Box> sel;
            Tuple members;
            for (std::size_t i = 0; i < n; ++i)
                if (mask >> i & 1U) {
                    sel.push_back(inst.boxes[i]);
                    members.push_back(i);
                }
            const bool listed = tuples_of(led, members.size()).count(members) > 0;
            if (!listed)
                CHECK(volume(corner_meet(sel)) == 0.0);
            if (listed && members.size() > 1) {
                for (std::size_t drop = 0; drop < members.size(); ++drop) {
                    Tuple sub = members;
                    sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
                    CHECK(tuples_of(led, sub.size()).count(sub) == 1);
                }
            }
        }
    }
}

TEST_CASE("property: screened union equals unpruned inclusion-exclusion") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 60; ++trial) {
        auto inst = random_instance(rng, 15, 4);
        const auto res = screened_union(inst.boxes, inst.measure, EmptinessMode::PositiveMeasure);
        CHECK(std::abs(res.q - full_inclusion_exclusion_union(inst.boxes, inst.measure)) < 1e-12);
        CHECK(res.q >= -1e-15);
        CHECK(res.q <= 1.0 + 1e-12);
    }
}
