#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace boxbound {

enum class Sense { Minimize, Maximize };

enum class LpStatus { Optimal, Infeasible, Unbounded };

// optimize objective . x  subject to  rows x = rhs,  x >= 0.
struct LpProblem {
    std::vector<double> objective;
    Sense sense = Sense::Minimize;
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;

    std::size_t variables() const { return objective.size(); }
};

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;             // valid when Optimal
    std::vector<double> solution;   // valid when Optimal; non-unique under ties
    double primal_residual = 0.0;   // max |rows x - rhs|
    double worst_reduced_cost = 0.0;  // most adverse reduced cost at the final basis
    std::size_t pivots = 0;
};

struct LpOptions {
    double pivot_tolerance = 1e-9;
    double feasibility_tolerance = 1e-9;
    double optimality_tolerance = 1e-9;
};

// Two-phase dense tableau simplex with Bland's rule. Rows are equilibrated
// before solving, redundant rows are dropped after phase one, and the final
// basis is re-solved against the original matrix. An Optimal result is
// certified: residual and reduced costs are within tolerance, otherwise
// NumericalError is thrown. Malformed problems throw InputError.
LpResult solve_lp(const LpProblem& problem, const LpOptions& options = {});

const char* to_string(LpStatus status);

}  // namespace boxbound
