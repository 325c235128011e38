#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "boxbound/geometry.hpp"
#include "boxbound/measure.hpp"

namespace boxbound {

// Vertices are events; an edge joins i < j when boxes i and j intersect under
// the chosen emptiness mode.
class IntersectionGraph {
public:
    IntersectionGraph() = default;
    explicit IntersectionGraph(std::size_t n_events);

    void add_edge(std::size_t i, std::size_t j);

    std::size_t n_events() const { return n_; }
    bool adjacent(std::size_t i, std::size_t j) const { return i != j && adj_[i * n_ + j] != 0; }
    // Sorted lexicographically.
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;
    std::size_t edge_count() const;

    friend bool operator==(const IntersectionGraph&, const IntersectionGraph&) = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint8_t> adj_;
};

// Pairwise screening, parallelized over rows with OpenMP.
IntersectionGraph build_graph(std::span<const Box> boxes, EmptinessMode mode);

// counts[k] = number of k-cliques (counts[0] = 1, counts[1] = N), computed
// from the graph alone.
std::vector<std::uint64_t> clique_counts(const IntersectionGraph& graph);
std::size_t clique_number(const IntersectionGraph& graph);

// Graphviz rendering; vertices labelled by event id.
std::string to_dot(const IntersectionGraph& graph, std::span<const Box> boxes);

struct TupleEntry {
    std::vector<std::size_t> members;  // increasing event indices
    Box box;                           // closed intersection of the members
    double probability = 0.0;
};

// All tuples with nonempty intersection, grouped by order.
struct TupleLedger {
    // by_order[k - 1] holds the order-k tuples in lexicographic order.
    std::vector<std::vector<TupleEntry>> by_order;
    // True when no nonempty tuple beyond max_order() exists, i.e. the ledger
    // was not truncated by the requested order.
    bool complete = true;

    std::size_t max_order() const { return by_order.size(); }
    const std::vector<TupleEntry>& order(std::size_t k) const { return by_order.at(k - 1); }
    std::uint64_t total_terms() const;
};

// Extends each (k-1)-tuple by higher-indexed common neighbours in the graph and
// confirms every candidate with the coordinate test. max_order is clamped to N.
// Order-1 entries are always all N events.
TupleLedger enumerate_tuples(std::span<const Box> boxes, const IntersectionGraph& graph,
                             EmptinessMode mode, std::size_t max_order,
                             const ProductMeasure& measure);

struct UnionResult {
    double q = 0.0;
    std::uint64_t terms_used = 0;
    // 2^N - 1, saturated at UINT64_MAX for N >= 64.
    std::uint64_t terms_full = 0;
};

std::uint64_t full_term_count(std::size_t n_events);

// Inclusion-exclusion restricted to the surviving tuples of the ledger.
UnionResult screened_union(const TupleLedger& ledger, std::size_t n_events);
UnionResult screened_union(std::span<const Box> boxes, const ProductMeasure& measure,
                           EmptinessMode mode);

// Binomial moments S_k = E[C(xi, k)] of the number xi of events that occur.
struct MomentVector {
    std::size_t n_events = 0;
    std::vector<double> s{1.0};  // s[0] = S_0 = 1, s[k] = S_k
    std::optional<double> q;     // exact union probability when known

    std::size_t order() const { return s.size() - 1; }
    double S(std::size_t k) const { return s.at(k); }
};

// S_k = sum of order-k intersection probabilities; S_k = 0 for k > N.
MomentVector binomial_moments(const TupleLedger& ledger, std::size_t n_events, std::size_t m);
MomentVector binomial_moments(std::span<const Box> boxes, const ProductMeasure& measure,
                              EmptinessMode mode, std::size_t m);

namespace serial {

// Reference for build_graph: the plain double loop.
IntersectionGraph build_graph(std::span<const Box> boxes, EmptinessMode mode);

}  // namespace serial

}  // namespace boxbound
