#include "boxbound/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <fmt/format.h>

#include "boxbound/errors.hpp"

namespace boxbound {

namespace {

using Matrix = std::vector<std::vector<double>>;

// Solves M x = v by Gaussian elimination with partial pivoting; nullopt if singular.
std::optional<std::vector<double>> dense_solve(Matrix m, std::vector<double> v) {
    const std::size_t n = v.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col]))
                piv = r;
        if (std::abs(m[piv][col]) < 1e-14)
            return std::nullopt;
        std::swap(m[piv], m[col]);
        std::swap(v[piv], v[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = m[r][col] / m[col][col];
            if (f == 0.0)
                continue;
            for (std::size_t c = col; c < n; ++c)
                m[r][c] -= f * m[col][c];
            v[r] -= f * v[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = v[i];
        for (std::size_t c = i + 1; c < n; ++c)
            acc -= m[i][c] * x[c];
        x[i] = acc / m[i][i];
    }
    return x;
}

// Tableau over [structural | artificial | rhs]; the last row holds reduced
// costs and minus the objective value.
class Simplex {
public:
    Simplex(const Matrix& a, const std::vector<double>& b, std::size_t n, const LpOptions& opts)
        : m_(b.size()),
          n_(n),
          width_(n_ + m_ + 1),
          opts_(opts),
          t_((m_ + 1) * width_, 0.0),
          basis_(m_),
          active_(m_, true) {
        for (std::size_t i = 0; i < m_; ++i) {
            std::copy(a[i].begin(), a[i].end(), &at(i, 0));
            at(i, n_ + i) = 1.0;
            at(i, rhs()) = b[i];
            basis_[i] = n_ + i;
        }
        original_.assign(t_.begin(), t_.begin() + static_cast<std::ptrdiff_t>(m_ * width_));
    }

    // Minimizes the sum of artificials; true when it reaches zero.
    bool phase_one() {
        cost_.assign(n_ + m_, 0.0);
        std::fill(cost_.begin() + static_cast<std::ptrdiff_t>(n_), cost_.end(), 1.0);
        price();
        iterate(n_);
        return -at(m_, rhs()) <= opts_.feasibility_tolerance * static_cast<double>(std::max<std::size_t>(1, m_));
    }

    // Pivots remaining artificials out of the basis; rows where that is
    // impossible are linearly dependent on the others and get deactivated.
    void drop_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_)
                continue;
            std::size_t best = n_;
            double best_abs = opts_.pivot_tolerance;
            for (std::size_t j = 0; j < n_; ++j) {
                if (std::abs(at(i, j)) > best_abs) {
                    best_abs = std::abs(at(i, j));
                    best = j;
                }
            }
            if (best == n_) {
                active_[i] = false;
                continue;
            }
            pivot(i, best);
        }
    }

    LpStatus phase_two(const std::vector<double>& cost) {
        cost_.assign(n_ + m_, 0.0);
        std::copy(cost.begin(), cost.end(), cost_.begin());
        price();
        return iterate(n_);
    }

    std::vector<double> primal() const {
        std::vector<double> x(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (active_[i])
                x[basis_[i]] = at(i, rhs());
        return x;
    }

    std::vector<std::size_t> active_rows() const {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < m_; ++i)
            if (active_[i])
                rows.push_back(i);
        return rows;
    }
    std::size_t basic_column(std::size_t row) const { return basis_[row]; }
    std::size_t pivots() const { return pivots_; }

private:
    double& at(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
    double at(std::size_t i, std::size_t j) const { return t_[i * width_ + j]; }
    std::size_t rhs() const { return width_ - 1; }

    // Objective row from the current constraint rows: c - c_B B^-1 [A | I | b].
    void price() {
        for (std::size_t j = 0; j < width_; ++j)
            at(m_, j) = j < cost_.size() ? cost_[j] : 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (!active_[i])
                continue;
            const double f = cost_[basis_[i]];
            if (f == 0.0)
                continue;
            for (std::size_t j = 0; j < width_; ++j)
                at(m_, j) -= f * at(i, j);
        }
    }

    // Rebuilds B^-1 [A | I | b] from the original rows for the current basis,
    // discarding the rounding error accumulated by the pivots so far.
    void reinvert() {
        std::vector<std::size_t> rows, cols;
        for (std::size_t i = 0; i < m_; ++i)
            if (active_[i]) {
                rows.push_back(i);
                cols.push_back(basis_[i]);
            }
        for (std::size_t i : rows)
            std::copy(&original_[i * width_], &original_[i * width_] + width_, &at(i, 0));
        std::vector<bool> done(m_, false);
        for (std::size_t col : cols) {
            std::size_t row = m_;
            double best = 0.0;
            for (std::size_t i : rows)
                if (!done[i] && std::abs(at(i, col)) > best) {
                    best = std::abs(at(i, col));
                    row = i;
                }
            if (row == m_ || best < 1e-11)
                throw NumericalError("simplex basis became singular");
            done[row] = true;
            eliminate(row, col);
        }
        price();
        since_reinvert_ = 0;
    }

    void eliminate(std::size_t row, std::size_t col) {
        const double p = at(row, col);
        for (std::size_t j = 0; j < width_; ++j)
            at(row, j) /= p;
        at(row, col) = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row || !active_[i])
                continue;
            const double f = at(i, col);
            if (f == 0.0)
                continue;
            for (std::size_t j = 0; j < width_; ++j)
                at(i, j) -= f * at(row, j);
            at(i, col) = 0.0;
        }
        basis_[row] = col;
    }

    void pivot(std::size_t row, std::size_t col) {
        const double p = at(row, col);
        for (std::size_t j = 0; j < width_; ++j)
            at(row, j) /= p;
        at(row, col) = 1.0;
        for (std::size_t i = 0; i <= m_; ++i) {
            if (i == row || (i < m_ && !active_[i]))
                continue;
            const double f = at(i, col);
            if (f == 0.0)
                continue;
            for (std::size_t j = 0; j < width_; ++j)
                at(i, j) -= f * at(row, j);
            at(i, col) = 0.0;
        }
        basis_[row] = col;
        ++pivots_;
        ++since_reinvert_;
    }

    // Dantzig pricing; after a run of degenerate pivots switch to Bland's
    // rule (lowest-index improving column) until the objective moves again.
    LpStatus iterate(std::size_t columns) {
        const std::size_t limit = 50 * (m_ + columns) + 1000;
        std::size_t degenerate_run = 0;
        for (std::size_t step = 0;; ++step) {
            if (step > limit)
                throw NumericalError(fmt::format("simplex did not converge within {} pivots", limit));
            const bool bland = degenerate_run >= kDegenerateRun;
            std::size_t enter = columns;
            double most = -opts_.optimality_tolerance;
            for (std::size_t j = 0; j < columns; ++j) {
                if (at(m_, j) < most) {
                    enter = j;
                    if (bland)
                        break;
                    most = at(m_, j);
                }
            }
            if (enter == columns) {
                if (since_reinvert_ == 0)
                    return LpStatus::Optimal;
                reinvert();
                continue;
            }

            std::size_t leave = m_;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                if (!active_[i])
                    continue;
                const double a = at(i, enter);
                if (a <= opts_.pivot_tolerance)
                    continue;
                const double ratio = std::max(0.0, at(i, rhs())) / a;
                const double slack = 1e-12 * (1.0 + std::abs(best));
                if (leave == m_ || ratio < best - slack) {
                    best = ratio;
                    leave = i;
                } else if (ratio <= best + slack && basis_[i] < basis_[leave]) {
                    best = std::min(best, ratio);
                    leave = i;
                }
            }
            if (leave == m_)
                return LpStatus::Unbounded;
            degenerate_run = best <= opts_.feasibility_tolerance ? degenerate_run + 1 : 0;
            pivot(leave, enter);
            if (since_reinvert_ >= kReinvertEvery)
                reinvert();
        }
    }

    static constexpr std::size_t kDegenerateRun = 50;
    static constexpr std::size_t kReinvertEvery = 100;

    std::size_t m_;
    std::size_t n_;
    std::size_t width_;
    LpOptions opts_;
    std::vector<double> t_;
    std::vector<double> original_;
    std::vector<double> cost_;
    std::size_t since_reinvert_ = 0;
    std::vector<std::size_t> basis_;
    std::vector<bool> active_;
    std::size_t pivots_ = 0;
};

void check_problem(const LpProblem& p) {
    if (p.objective.empty())
        throw InputError("LP has no variables");
    if (p.rows.size() != p.rhs.size())
        throw InputError(fmt::format("LP has {} rows but {} right-hand sides", p.rows.size(),
                                     p.rhs.size()));
    for (double c : p.objective)
        if (!std::isfinite(c))
            throw InputError("LP objective has a non-finite entry");
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
        if (p.rows[i].size() != p.variables())
            throw InputError(fmt::format("LP row {} has {} entries, expected {}", i,
                                         p.rows[i].size(), p.variables()));
        if (!std::isfinite(p.rhs[i]))
            throw InputError(fmt::format("LP rhs {} is not finite", i));
        for (double a : p.rows[i])
            if (!std::isfinite(a))
                throw InputError(fmt::format("LP row {} has a non-finite entry", i));
    }
}

LpResult infeasible() {
    LpResult r;
    r.status = LpStatus::Infeasible;
    return r;
}

}  // namespace

LpResult solve_lp(const LpProblem& problem, const LpOptions& options) {
    check_problem(problem);
    const std::size_t n = problem.variables();

    // Equilibrate rows, make rhs nonnegative, discard all-zero rows.
    Matrix a;
    std::vector<double> b;
    std::vector<double> row_scale;
    for (std::size_t i = 0; i < problem.rows.size(); ++i) {
        double scale = 0.0;
        for (double v : problem.rows[i])
            scale = std::max(scale, std::abs(v));
        if (scale == 0.0) {
            if (std::abs(problem.rhs[i]) > options.feasibility_tolerance)
                return infeasible();
            continue;
        }
        const double sign = problem.rhs[i] < 0.0 ? -1.0 : 1.0;
        std::vector<double> row(n);
        for (std::size_t j = 0; j < n; ++j)
            row[j] = sign * problem.rows[i][j] / scale;
        a.push_back(std::move(row));
        b.push_back(sign * problem.rhs[i] / scale);
        row_scale.push_back(scale);
    }

    std::vector<double> cost = problem.objective;
    if (problem.sense == Sense::Maximize)
        for (double& c : cost)
            c = -c;

    Simplex simplex(a, b, n, options);
    if (!a.empty()) {
        if (!simplex.phase_one())
            return infeasible();
        simplex.drop_artificials();
    }
    LpResult result;
    result.status = simplex.phase_two(cost);
    result.pivots = simplex.pivots();
    if (result.status != LpStatus::Optimal)
        return result;

    std::vector<double> x = simplex.primal();

    // Re-solve the final basis against the equilibrated matrix.
    const std::vector<std::size_t> rows = simplex.active_rows();
    const std::size_t k = rows.size();
    Matrix basis(k, std::vector<double>(k));
    Matrix basis_t(k, std::vector<double>(k));
    std::vector<double> rhs(k), cost_b(k);
    for (std::size_t r = 0; r < k; ++r) {
        rhs[r] = b[rows[r]];
        cost_b[r] = cost[simplex.basic_column(rows[r])];
        for (std::size_t s = 0; s < k; ++s) {
            basis[r][s] = a[rows[r]][simplex.basic_column(rows[s])];
            basis_t[s][r] = basis[r][s];
        }
    }
    if (auto xb = dense_solve(basis, rhs)) {
        const bool sane = std::all_of(xb->begin(), xb->end(),
                                      [&](double v) { return v >= -options.feasibility_tolerance; });
        if (sane) {
            std::fill(x.begin(), x.end(), 0.0);
            for (std::size_t r = 0; r < k; ++r)
                x[simplex.basic_column(rows[r])] = (*xb)[r];
        }
    }
    for (double& v : x)
        if (v < 0.0 && v >= -options.feasibility_tolerance)
            v = 0.0;

    // Dual certificate: y solves B^T y = c_B; reduced costs c - A^T y.
    std::vector<bool> basic(n, false);
    for (std::size_t r : rows)
        basic[simplex.basic_column(r)] = true;
    double worst = 0.0;
    if (auto y = dense_solve(basis_t, cost_b)) {
        for (std::size_t j = 0; j < n; ++j) {
            if (basic[j])
                continue;
            double d = cost[j];
            for (std::size_t r = 0; r < k; ++r)
                d -= a[rows[r]][j] * (*y)[r];
            worst = std::min(worst, d);
        }
    } else if (k > 0) {
        throw NumericalError("LP final basis is singular");
    }

    double residual = 0.0;
    for (std::size_t i = 0; i < problem.rows.size(); ++i) {
        double acc = -problem.rhs[i];
        double scale = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            acc += problem.rows[i][j] * x[j];
            scale = std::max(scale, std::abs(problem.rows[i][j]));
        }
        residual = std::max(residual, std::abs(acc) / scale);
    }
    const double min_x = x.empty() ? 0.0 : *std::min_element(x.begin(), x.end());

    result.solution = std::move(x);
    result.value = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        result.value += problem.objective[j] * result.solution[j];
    result.primal_residual = residual;
    result.worst_reduced_cost = problem.sense == Sense::Maximize ? -worst : worst;

    if (residual > options.feasibility_tolerance || min_x < -1e-12 ||
        worst < -options.optimality_tolerance)
        throw NumericalError(fmt::format(
            "LP optimum failed certification (residual {:.3g}, min x {:.3g}, reduced cost {:.3g})",
            residual, min_x, worst));
    return result;
}

const char* to_string(LpStatus status) {
    switch (status) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "unknown";
}

}  // namespace boxbound
