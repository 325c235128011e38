#include "boxbound/screening.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "boxbound/detail/compensated_sum.hpp"
#include "boxbound/errors.hpp"

namespace boxbound {

IntersectionGraph::IntersectionGraph(std::size_t n_events)
    : n_(n_events), adj_(n_events * n_events, 0) {}

void IntersectionGraph::add_edge(std::size_t i, std::size_t j) {
    if (i >= n_ || j >= n_ || i == j)
        throw InputError(fmt::format("invalid edge ({}, {}) for {} events", i, j, n_));
    adj_[i * n_ + j] = 1;
    adj_[j * n_ + i] = 1;
}

std::vector<std::pair<std::size_t, std::size_t>> IntersectionGraph::edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            if (adj_[i * n_ + j])
                out.emplace_back(i, j);
    return out;
}

std::size_t IntersectionGraph::edge_count() const {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            count += adj_[i * n_ + j];
    return count;
}

namespace {

void check_dimensions(std::span<const Box> boxes) {
    for (const Box& b : boxes) {
        validate(b);
        if (b.dim() != boxes.front().dim())
            throw InputError(fmt::format("box '{}' is {}-d, expected {}-d", b.id, b.dim(),
                                         boxes.front().dim()));
    }
}

// Corner comparison for one pair without materializing the intersection box.
bool pair_passes(const Box& a, const Box& b, EmptinessMode mode) {
    for (std::size_t k = 0; k < a.dim(); ++k) {
        const double lo = std::max(a.lower[k], b.lower[k]);
        const double hi = std::min(a.upper[k], b.upper[k]);
        if (mode == EmptinessMode::Closed ? !(lo <= hi) : !(lo < hi))
            return false;
    }
    return true;
}

}  // namespace

IntersectionGraph build_graph(std::span<const Box> boxes, EmptinessMode mode) {
    check_dimensions(boxes);
    const auto n = static_cast<std::ptrdiff_t>(boxes.size());
    // Each row writes a disjoint slice of the verdict matrix.
    std::vector<std::uint8_t> verdict(boxes.size() * boxes.size(), 0);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        for (std::ptrdiff_t j = i + 1; j < n; ++j)
            verdict[static_cast<std::size_t>(i * n + j)] =
                pair_passes(boxes[static_cast<std::size_t>(i)], boxes[static_cast<std::size_t>(j)], mode);
    }
    IntersectionGraph graph(boxes.size());
    for (std::size_t i = 0; i < boxes.size(); ++i)
        for (std::size_t j = i + 1; j < boxes.size(); ++j)
            if (verdict[i * boxes.size() + j])
                graph.add_edge(i, j);
    return graph;
}

namespace serial {

IntersectionGraph build_graph(std::span<const Box> boxes, EmptinessMode mode) {
    check_dimensions(boxes);
    IntersectionGraph graph(boxes.size());
    for (std::size_t i = 0; i < boxes.size(); ++i)
        for (std::size_t j = i + 1; j < boxes.size(); ++j)
            if (is_nonempty(intersect(boxes[i], boxes[j]), mode))
                graph.add_edge(i, j);
    return graph;
}

}  // namespace serial

namespace {

void count_extensions(const IntersectionGraph& g, std::vector<std::size_t>& clique,
                      std::vector<std::uint64_t>& counts) {
    if (counts.size() <= clique.size())
        counts.push_back(0);
    ++counts[clique.size()];
    for (std::size_t v = clique.back() + 1; v < g.n_events(); ++v) {
        bool common = true;
        for (std::size_t u : clique)
            common = common && g.adjacent(u, v);
        if (!common)
            continue;
        clique.push_back(v);
        count_extensions(g, clique, counts);
        clique.pop_back();
    }
}

}  // namespace

std::vector<std::uint64_t> clique_counts(const IntersectionGraph& graph) {
    std::vector<std::uint64_t> counts{1};
    std::vector<std::size_t> clique;
    for (std::size_t v = 0; v < graph.n_events(); ++v) {
        clique.assign(1, v);
        count_extensions(graph, clique, counts);
    }
    return counts;
}

std::size_t clique_number(const IntersectionGraph& graph) {
    return clique_counts(graph).size() - 1;
}

std::string to_dot(const IntersectionGraph& graph, std::span<const Box> boxes) {
    if (boxes.size() != graph.n_events())
        throw InputError("graph and box list differ in event count");
    std::ostringstream os;
    os << "graph intersections {\n";
    for (const Box& b : boxes)
        os << "  \"" << b.id << "\";\n";
    for (auto [i, j] : graph.edges())
        os << "  \"" << boxes[i].id << "\" -- \"" << boxes[j].id << "\";\n";
    os << "}\n";
    return os.str();
}

std::uint64_t TupleLedger::total_terms() const {
    std::uint64_t total = 0;
    for (const auto& level : by_order)
        total += level.size();
    return total;
}

TupleLedger enumerate_tuples(std::span<const Box> boxes, const IntersectionGraph& graph,
                             EmptinessMode mode, std::size_t max_order,
                             const ProductMeasure& measure) {
    if (graph.n_events() != boxes.size())
        throw InputError("graph and box list differ in event count");
    check_dimensions(boxes);
    TupleLedger ledger;
    max_order = std::min(max_order, boxes.size());
    if (max_order == 0) {
        ledger.complete = boxes.empty();
        return ledger;
    }

    ledger.complete = max_order == boxes.size();
    auto& singles = ledger.by_order.emplace_back();
    for (std::size_t i = 0; i < boxes.size(); ++i)
        singles.push_back({{i}, boxes[i], box_probability(boxes[i], measure)});

    for (std::size_t k = 2; k <= max_order; ++k) {
        std::vector<TupleEntry> next;
        for (const TupleEntry& parent : ledger.by_order.back()) {
            for (std::size_t v = parent.members.back() + 1; v < boxes.size(); ++v) {
                bool common = true;
                for (std::size_t u : parent.members)
                    common = common && graph.adjacent(u, v);
                if (!common)
                    continue;
                auto meet = intersect(parent.box, boxes[v]);
                // Boxes have the Helly property, so a clique must pass the direct test.
                if (!is_nonempty(meet, mode))
                    throw std::logic_error(fmt::format(
                        "clique {}+{} fails the coordinate test", parent.box.id, boxes[v].id));
                TupleEntry entry{parent.members, std::move(*meet), 0.0};
                entry.members.push_back(v);
                entry.probability = box_probability(entry.box, measure);
                next.push_back(std::move(entry));
            }
        }
        if (next.empty()) {
            ledger.complete = true;
            break;
        }
        ledger.by_order.push_back(std::move(next));
    }
    return ledger;
}

std::uint64_t full_term_count(std::size_t n_events) {
    if (n_events >= 64)
        return std::numeric_limits<std::uint64_t>::max();
    return (std::uint64_t{1} << n_events) - 1;
}

namespace {

double order_sum(const std::vector<TupleEntry>& level) {
    detail::CompensatedSum sum;
    for (const TupleEntry& e : level)
        sum.add(e.probability);
    return sum.value();
}

}  // namespace

UnionResult screened_union(const TupleLedger& ledger, std::size_t n_events) {
    if (!ledger.complete)
        throw InputError("union needs a ledger enumerated to full order");
    detail::CompensatedSum q;
    for (std::size_t k = 1; k <= ledger.max_order(); ++k) {
        const double s = order_sum(ledger.order(k));
        q.add(k % 2 == 1 ? s : -s);
    }
    return {q.value(), ledger.total_terms(), full_term_count(n_events)};
}

UnionResult screened_union(std::span<const Box> boxes, const ProductMeasure& measure,
                           EmptinessMode mode) {
    const IntersectionGraph graph = build_graph(boxes, mode);
    return screened_union(enumerate_tuples(boxes, graph, mode, boxes.size(), measure), boxes.size());
}

MomentVector binomial_moments(const TupleLedger& ledger, std::size_t n_events, std::size_t m) {
    MomentVector mv;
    mv.n_events = n_events;
    mv.s.assign(m + 1, 0.0);
    mv.s[0] = 1.0;
    for (std::size_t k = 1; k <= std::min(m, ledger.max_order()); ++k)
        mv.s[k] = order_sum(ledger.order(k));
    if (ledger.complete)
        mv.q = screened_union(ledger, n_events).q;
    return mv;
}

MomentVector binomial_moments(std::span<const Box> boxes, const ProductMeasure& measure,
                              EmptinessMode mode, std::size_t m) {
    const IntersectionGraph graph = build_graph(boxes, mode);
    const TupleLedger ledger = enumerate_tuples(boxes, graph, mode, boxes.size(), measure);
    return binomial_moments(ledger, boxes.size(), m);
}

}  // namespace boxbound
