#include "boxbound/bounding.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <tuple>

#include <fmt/format.h>

namespace boxbound {

const char* to_string(Target target) {
    switch (target) {
        case Target::Union: return "union";
        case Target::AtLeast: return "atleast";
        case Target::Exactly: return "exactly";
    }
    return "unknown";
}

double binomial(std::size_t n, std::size_t k) {
    if (k > n)
        return 0.0;
    k = std::min(k, n - k);
    std::uint64_t c = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        // c * (n - k + i) / i stays integral at every step
        const std::uint64_t num = n - k + i;
        const std::uint64_t g = std::gcd(c, static_cast<std::uint64_t>(i));
        const std::uint64_t c_red = c / g;
        const std::uint64_t i_red = i / g;
        if (num % i_red != 0 || c_red > UINT64_MAX / (num / i_red))
            throw NumericalError(fmt::format("C({}, {}) overflows 64-bit integers", n, k));
        c = c_red * (num / i_red);
    }
    return static_cast<double>(c);
}

namespace {

constexpr double kProbabilitySlack = 1e-9;

BoundPair solve_pair(LpProblem problem, std::string method) {
    BoundPair out;
    out.method = std::move(method);
    for (Sense sense : {Sense::Minimize, Sense::Maximize}) {
        problem.sense = sense;
        const LpResult res = solve_lp(problem);
        if (res.status != LpStatus::Optimal)
            throw BoundingError(fmt::format("{} {} LP is {}", out.method,
                                            sense == Sense::Minimize ? "lower" : "upper",
                                            to_string(res.status)),
                                res.status);
        (sense == Sense::Minimize ? out.lower : out.upper) = res.value;
    }
    return out;
}

void check_order(const MomentVector& mv, std::size_t m) {
    if (m > mv.order())
        throw InputError(fmt::format("order m = {} requested but only S_1..S_{} are known", m,
                                     mv.order()));
    if (m > mv.n_events)
        throw InputError(fmt::format("order m = {} exceeds the event count N = {}", m, mv.n_events));
}

// Variables p_first..p_N, rows sum_i C(i, k) p_i = S_k for k = first..m.
LpProblem moment_problem(const MomentVector& mv, std::size_t m, std::size_t first) {
    const std::size_t n = mv.n_events;
    if (first > n)
        throw InputError("moment problem without variables (N = 0)");
    LpProblem lp;
    lp.objective.assign(n + 1 - first, 0.0);
    for (std::size_t k = first; k <= m; ++k) {
        std::vector<double> row(n + 1 - first);
        for (std::size_t i = first; i <= n; ++i)
            row[i - first] = binomial(i, k);
        lp.rows.push_back(std::move(row));
        lp.rhs.push_back(mv.S(k));
    }
    return lp;
}

void check_r(std::size_t r, std::size_t lo, std::size_t n) {
    if (r < lo || r > n)
        throw InputError(fmt::format("r = {} outside [{}, {}]", r, lo, n));
}

LpProblem q_problem(double q, const MomentVector& mv, std::size_t m) {
    check_order(mv, m);
    // a computed Q may overshoot the unit interval by rounding
    if (!(q >= -kProbabilitySlack && q <= 1.0 + kProbabilitySlack))
        throw InputError(fmt::format("union probability Q = {} outside [0, 1]", q));
    q = std::clamp(q, 0.0, 1.0);
    LpProblem lp = moment_problem(mv, m, 1);
    lp.rows.insert(lp.rows.begin(), std::vector<double>(mv.n_events, 1.0));
    lp.rhs.insert(lp.rhs.begin(), q);
    return lp;
}

}  // namespace

BoundPair union_bounds(const MomentVector& moments, std::size_t m, bool include_p0) {
    check_order(moments, m);
    const std::size_t first = include_p0 ? 0 : 1;
    LpProblem lp = moment_problem(moments, m, first);
    for (std::size_t i = 1; i <= moments.n_events; ++i)
        lp.objective[i - first] = 1.0;
    return solve_pair(std::move(lp), include_p0 ? "binomial-moment" : "binomial-moment-no-p0");
}

BoundPair atleast_r_bounds(const MomentVector& moments, std::size_t m, std::size_t r) {
    check_order(moments, m);
    check_r(r, 1, moments.n_events);
    LpProblem lp = moment_problem(moments, m, 0);
    for (std::size_t i = r; i <= moments.n_events; ++i)
        lp.objective[i] = 1.0;
    return solve_pair(std::move(lp), "binomial-moment");
}

BoundPair exactly_r_bounds(const MomentVector& moments, std::size_t m, std::size_t r) {
    check_order(moments, m);
    check_r(r, 0, moments.n_events);
    LpProblem lp = moment_problem(moments, m, 0);
    lp.objective[r] = 1.0;
    return solve_pair(std::move(lp), "binomial-moment");
}

BoundPair q_atleast_bounds(double q, const MomentVector& moments, std::size_t r, std::size_t m) {
    check_r(r, 1, moments.n_events);
    LpProblem lp = q_problem(q, moments, m);
    for (std::size_t i = r; i <= moments.n_events; ++i)
        lp.objective[i - 1] = 1.0;
    return solve_pair(std::move(lp), "binomial-moment+Q");
}

BoundPair q_exactly_bounds(double q, const MomentVector& moments, std::size_t r, std::size_t m) {
    check_r(r, 1, moments.n_events);
    LpProblem lp = q_problem(q, moments, m);
    lp.objective[r - 1] = 1.0;
    return solve_pair(std::move(lp), "binomial-moment+Q");
}

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t v) {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }

    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b)
            return false;
        parent_[std::max(a, b)] = std::min(a, b);
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

double hunter_worsley_upper(double s1, std::span<const PairWeight> pairwise, std::size_t n_events) {
    std::vector<PairWeight> edges(pairwise.begin(), pairwise.end());
    for (PairWeight& e : edges) {
        if (e.i >= n_events || e.j >= n_events || e.i == e.j)
            throw InputError(fmt::format("pair ({}, {}) invalid for {} events", e.i, e.j, n_events));
        if (!(e.weight >= 0.0 && e.weight <= 1.0))
            throw InputError(fmt::format("pair ({}, {}) has probability {}", e.i, e.j, e.weight));
        if (e.i > e.j)
            std::swap(e.i, e.j);
    }
    std::sort(edges.begin(), edges.end(), [](const PairWeight& a, const PairWeight& b) {
        if (a.weight != b.weight)
            return a.weight > b.weight;
        return std::tie(a.i, a.j) < std::tie(b.i, b.j);
    });
    DisjointSets forest(n_events);
    double tree = 0.0;
    for (const PairWeight& e : edges)
        if (e.weight > 0.0 && forest.unite(e.i, e.j))
            tree += e.weight;
    return s1 - tree;
}

std::vector<PairWeight> pairwise_weights(const TupleLedger& ledger) {
    std::vector<PairWeight> out;
    if (ledger.max_order() < 2)
        return out;
    for (const TupleEntry& e : ledger.order(2))
        out.push_back({e.members[0], e.members[1], e.probability});
    return out;
}

void BooleanSystem::validate() const {
    if (n_events > kMaxEvents)
        throw InputError(fmt::format("Boolean LP is capped at {} events, got {}", kMaxEvents, n_events));
    if (order > n_events)
        throw InputError(fmt::format("order m = {} exceeds N = {}", order, n_events));
    const std::size_t subsets = std::size_t{1} << n_events;
    if (intersection_prob.size() != subsets)
        throw InputError(fmt::format("expected {} subset probabilities, got {}", subsets,
                                     intersection_prob.size()));
    if (intersection_prob[0] != 1.0)
        throw InputError("probability of the empty intersection must be 1");
    for (std::size_t mask = 1; mask < subsets; ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) > order)
            continue;
        const double p = intersection_prob[mask];
        if (!(p >= 0.0 && p <= 1.0))
            throw InputError(fmt::format("p_I = {} outside [0, 1] for subset {:#x}", p, mask));
        for (std::size_t bit = 1; bit <= mask; bit <<= 1)
            if ((mask & bit) && p > intersection_prob[mask ^ bit] + 1e-12)
                throw InputError(fmt::format("p_I not monotone at subset {:#x}", mask));
    }
}

BooleanSystem make_boolean_system(const TupleLedger& ledger, std::size_t n_events, std::size_t m) {
    if (n_events > BooleanSystem::kMaxEvents)
        throw InputError(fmt::format("Boolean LP is capped at {} events, got {}",
                                     BooleanSystem::kMaxEvents, n_events));
    if (m > n_events)
        throw InputError(fmt::format("order m = {} exceeds N = {}", m, n_events));
    if (ledger.max_order() < m && !ledger.complete)
        throw InputError("ledger was truncated below the requested order");
    BooleanSystem sys{n_events, m, std::vector<double>(std::size_t{1} << n_events, 0.0)};
    sys.intersection_prob[0] = 1.0;
    for (std::size_t k = 1; k <= std::min(m, ledger.max_order()); ++k) {
        for (const TupleEntry& e : ledger.order(k)) {
            std::size_t mask = 0;
            for (std::size_t v : e.members)
                mask |= std::size_t{1} << v;
            sys.intersection_prob[mask] = e.probability;
        }
    }
    return sys;
}

BoundPair boolean_lp_bounds(const BooleanSystem& system, Target target, std::size_t r) {
    system.validate();
    const std::size_t n = system.n_events;
    const std::size_t subsets = std::size_t{1} << n;
    if (target == Target::AtLeast)
        check_r(r, 1, n);
    else if (target == Target::Exactly)
        check_r(r, 0, n);

    LpProblem lp;
    lp.objective.assign(subsets, 0.0);
    for (std::size_t atom = 0; atom < subsets; ++atom) {
        const auto size = static_cast<std::size_t>(std::popcount(atom));
        const bool counted = target == Target::Union     ? size >= 1
                             : target == Target::AtLeast ? size >= r
                                                         : size == r;
        lp.objective[atom] = counted ? 1.0 : 0.0;
    }
    for (std::size_t set = 0; set < subsets; ++set) {
        if (static_cast<std::size_t>(std::popcount(set)) > system.order)
            continue;
        std::vector<double> row(subsets, 0.0);
        for (std::size_t atom = 0; atom < subsets; ++atom)
            if ((atom & set) == set)
                row[atom] = 1.0;
        lp.rows.push_back(std::move(row));
        lp.rhs.push_back(system.intersection_prob[set]);
    }
    return solve_pair(std::move(lp), "boolean");
}

}  // namespace boxbound
