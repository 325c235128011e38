#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "boxbound/errors.hpp"
#include "boxbound/lp.hpp"
#include "boxbound/screening.hpp"

namespace boxbound {

struct BoundPair {
    double lower = 0.0;
    double upper = 1.0;
    std::string method;
};

// A bounding LP ended without an optimum; for well-formed inputs this means
// the supplied moments or intersection probabilities are inconsistent.
class BoundingError : public NumericalError {
public:
    BoundingError(const std::string& what, LpStatus status) : NumericalError(what), status_(status) {}
    LpStatus status() const { return status_; }

private:
    LpStatus status_;
};

enum class Target { Union, AtLeast, Exactly };

const char* to_string(Target target);

// C(n, k) in exact 64-bit integer arithmetic, converted to double.
// Throws NumericalError if the integer overflows.
double binomial(std::size_t n, std::size_t k);

// Sharp bounds on P(xi >= 1) from S_1..S_m. include_p0 adds p_0 and the row
// sum p_i = S_0 = 1; without it the problem runs over p_1..p_N only.
BoundPair union_bounds(const MomentVector& moments, std::size_t m, bool include_p0 = true);

// Sharp bounds on P(xi >= r), 1 <= r <= N, with p_0 and the S_0 row.
BoundPair atleast_r_bounds(const MomentVector& moments, std::size_t m, std::size_t r);

// Sharp bounds on P(xi = r), 0 <= r <= N, with p_0 and the S_0 row.
BoundPair exactly_r_bounds(const MomentVector& moments, std::size_t m, std::size_t r);

// Variants that replace the S_0 row by sum_{i>=1} p_i = Q, over p_1..p_N.
BoundPair q_atleast_bounds(double q, const MomentVector& moments, std::size_t r, std::size_t m = 3);
BoundPair q_exactly_bounds(double q, const MomentVector& moments, std::size_t r, std::size_t m = 3);

struct PairWeight {
    std::size_t i = 0;
    std::size_t j = 0;
    double weight = 0.0;  // P(A_i A_j)
};

// S_1 minus the weight of a maximum spanning forest on the pairwise
// intersection probabilities. Missing pairs weigh zero. Not truncated at 1.
double hunter_worsley_upper(double s1, std::span<const PairWeight> pairwise, std::size_t n_events);

// Pairwise weights taken from the order-2 entries of a ledger.
std::vector<PairWeight> pairwise_weights(const TupleLedger& ledger);

// Atom formulation: variables x_J for every J subset of {0..N-1}, one row
// sum_{J >= I} x_J = p_I for each I with |I| <= m (including I = {} with p = 1).
struct BooleanSystem {
    static constexpr std::size_t kMaxEvents = 12;

    std::size_t n_events = 0;
    std::size_t order = 0;
    // Indexed by subset bitmask; entries with popcount > order are ignored.
    std::vector<double> intersection_prob;

    void validate() const;
};

BooleanSystem make_boolean_system(const TupleLedger& ledger, std::size_t n_events, std::size_t m);

BoundPair boolean_lp_bounds(const BooleanSystem& system, Target target, std::size_t r = 1);

}  // namespace boxbound
